#include "taskrisk/trends.hpp"

#include "taskrisk/error.hpp"
#include "taskrisk/table.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>

namespace taskrisk {

namespace {

std::optional<std::string> coverage_problem(const std::map<int, double>& years, YearRange range) {
    for (int y = range.start; y <= range.end; ++y) {
        const auto it = years.find(y);
        if (it == years.end()) return fmt::format("no employment for {}", y);
        if (y < range.end && it->second == 0.0) return fmt::format("zero employment in {} (division by zero)", y);
    }
    return std::nullopt;
}

double mean_annual_change(const std::vector<double>& values) {
    double s = 0.0;
    for (std::size_t t = 0; t + 1 < values.size(); ++t) s += (values[t + 1] - values[t]) / values[t];
    return s / static_cast<double>(values.size() - 1);
}

}  // namespace

GrowthResult growth_stats(const EmploymentSeries& series, const std::vector<std::string>& group, YearRange range,
                          const std::string& label) {
    if (range.end <= range.start) throw ParameterError(fmt::format("year range {}..{} is empty", range.start, range.end));
    const auto span = static_cast<std::size_t>(range.end - range.start) + 1;

    GrowthResult out;
    std::vector<double> pooled(span, 0.0);
    std::set<const std::map<int, double>*> pooled_series;
    std::vector<std::string> unmatched;
    for (const auto& code : group) {
        const auto* years = series.find(code);
        if (!years) {
            out.excluded.push_back({code, "no employment series"});
            unmatched.push_back(code);
            continue;
        }
        if (auto problem = coverage_problem(*years, range)) {
            out.excluded.push_back({code, *problem});
            unmatched.push_back(code);
            continue;
        }
        std::vector<double> values(span);
        for (std::size_t t = 0; t < span; ++t) values[t] = years->at(range.start + static_cast<int>(t));
        const double years_elapsed = static_cast<double>(span - 1);
        out.occupations.push_back({code, mean_annual_change(values),
                                   std::pow(values.back() / values.front(), 1.0 / years_elapsed) - 1.0,
                                   (values.back() - values.front()) / values.front()});
        if (pooled_series.insert(years).second) {
            for (std::size_t t = 0; t < span; ++t) pooled[t] += values[t];
        }
    }
    if (out.occupations.empty()) throw EmptyGroupError(label, std::move(unmatched));

    auto& s = out.stats;
    s.occupations = out.occupations.size();
    const double count = static_cast<double>(s.occupations);
    for (const auto& o : out.occupations) {
        s.mean_growth += o.mean_annual;
        s.mean_cagr += o.cagr;
        s.mean_total_change += o.total_change;
    }
    s.mean_growth /= count;
    s.mean_cagr /= count;
    s.mean_total_change /= count;
    s.start_total = pooled.front();
    s.end_total = pooled.back();
    s.pooled_growth = mean_annual_change(pooled);
    s.pooled_total_change = (pooled.back() - pooled.front()) / pooled.front();
    return out;
}

TrendReport compare_groups(const EmploymentSeries& series, const VulnerabilityReport& report, YearRange range,
                           const std::vector<Subgroup>& subgroups) {
    std::vector<std::string> vulnerable;
    std::vector<std::string> others;
    for (const auto& code : report.occupation_ids) {
        (report.is_vulnerable(code) ? vulnerable : others).push_back(code);
    }

    TrendReport out;
    out.range = range;
    auto absorb = [&](const std::string& label, const GrowthResult& g, bool primary) {
        out.group_stats[label] = g.stats;
        if (!primary) return;
        for (const auto& o : g.occupations) {
            out.per_occupation_growth[o.soc_code] = o.mean_annual;
            out.group_of[o.soc_code] = label;
        }
        out.excluded.insert(out.excluded.end(), g.excluded.begin(), g.excluded.end());
    };
    absorb(kVulnerableGroup, growth_stats(series, vulnerable, range, kVulnerableGroup), true);
    absorb(kNonVulnerableGroup, growth_stats(series, others, range, kNonVulnerableGroup), true);
    for (const auto& sub : subgroups) {
        if (sub.label == kVulnerableGroup || sub.label == kNonVulnerableGroup) {
            throw ParameterError(fmt::format("subgroup label '{}' is reserved", sub.label));
        }
        absorb(sub.label, growth_stats(series, {sub.soc_codes.begin(), sub.soc_codes.end()}, range, sub.label), false);
    }

    const double denom = out.group_stats[kNonVulnerableGroup].mean_growth;
    if (denom > 0) out.ratio_vulnerable_to_nonvulnerable = out.group_stats[kVulnerableGroup].mean_growth / denom;
    std::sort(out.excluded.begin(), out.excluded.end(), [](const auto& a, const auto& b) { return a.soc_code < b.soc_code; });
    return out;
}

void write_trend_table(std::ostream& out, const TrendReport& report) {
    TableWriter w(out);
    w.row({"soc_code", "group", "mean_annual_growth"});
    for (const auto& [code, g] : report.per_occupation_growth) w.row({code, report.group_of.at(code), format_number(g)});
}

void write_trend_groups(std::ostream& out, const TrendReport& report) {
    TableWriter w(out);
    w.row({"group", "occupations", "mean_annual_growth", "mean_cagr", "mean_total_change", "pooled_annual_growth",
           "pooled_total_change", "start_employment", "end_employment"});
    for (const auto& [label, s] : report.group_stats) {
        w.row({label, std::to_string(s.occupations), format_number(s.mean_growth), format_number(s.mean_cagr),
               format_number(s.mean_total_change), format_number(s.pooled_growth), format_number(s.pooled_total_change),
               format_number(s.start_total), format_number(s.end_total)});
    }
}

void write_trend_summary(std::ostream& out, const TrendReport& report) {
    out << "year_start = " << report.range.start << '\n';
    out << "year_end = " << report.range.end << '\n';
    for (const auto& [label, s] : report.group_stats) {
        out << label << ".occupations = " << s.occupations << '\n';
        out << label << ".mean_annual_growth = " << format_number(s.mean_growth) << '\n';
        out << label << ".mean_total_change = " << format_number(s.mean_total_change) << '\n';
        out << label << ".pooled_annual_growth = " << format_number(s.pooled_growth) << '\n';
    }
    out << "ratio_vulnerable_to_nonvulnerable = "
        << (report.ratio_vulnerable_to_nonvulnerable ? format_number(*report.ratio_vulnerable_to_nonvulnerable)
                                                     : std::string("undefined"))
        << '\n';
    out << "excluded = " << report.excluded.size() << '\n';
    for (const auto& e : report.excluded) out << "excluded[" << e.soc_code << "] = " << e.reason << '\n';
}

}  // namespace taskrisk
