#include "taskrisk/vulnerability.hpp"

#include "taskrisk/error.hpp"
#include "taskrisk/table.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace taskrisk {

std::string_view to_string(Direction direction) { return direction == Direction::Top ? "top" : "bottom"; }

Direction parse_direction(std::string_view text) {
    if (text == "top") return Direction::Top;
    if (text == "bottom") return Direction::Bottom;
    throw ParameterError(fmt::format("unknown direction '{}'", text));
}

std::vector<SusceptibilityCriterion> default_criteria(std::size_t hazard, std::size_t problem_solving,
                                                      std::size_t dexterity) {
    return {
        {hazard, Direction::Top, 0.20, "hazard-top-20%"},
        {problem_solving, Direction::Bottom, 0.20, "problem-solving-bottom-20%"},
        {dexterity, Direction::Top, 0.20, "dexterity-top-20%"},
    };
}

namespace {

std::size_t flag_count(double fraction, std::size_t n) {
    const double exact = fraction * static_cast<double>(n);
    if (exact < 1.0) throw ParameterError(fmt::format("fraction {} flags fewer than one of {} occupations", fraction, n));
    // Absorb representation error such as 0.2 * 10 = 2.0000000000000004.
    return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

}  // namespace

CriteriaFlags score_criteria(const Matrix& scores, const std::vector<SusceptibilityCriterion>& criteria) {
    if (criteria.empty()) throw ParameterError("no susceptibility criteria configured");
    const auto n = static_cast<std::size_t>(scores.rows());
    std::set<std::string> labels;
    for (const auto& c : criteria) {
        if (c.factor_index >= static_cast<std::size_t>(scores.cols())) {
            throw ParameterError(fmt::format("criterion '{}' references factor {} of {}", c.label, c.factor_index + 1, scores.cols()));
        }
        if (!(c.fraction > 0.0 && c.fraction < 1.0)) throw ParameterError("criterion fraction must lie in (0, 1)");
        if (c.label.empty() || !labels.insert(c.label).second) throw ParameterError("criterion labels must be unique and non-empty");
    }

    CriteriaFlags out;
    out.satisfied.assign(n, {});
    std::vector<std::size_t> order(n);
    for (std::size_t ci = 0; ci < criteria.size(); ++ci) {
        const auto& c = criteria[ci];
        const auto col = static_cast<Eigen::Index>(c.factor_index);
        const auto count = flag_count(c.fraction, n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double sa = scores(static_cast<Eigen::Index>(a), col);
            const double sb = scores(static_cast<Eigen::Index>(b), col);
            return c.direction == Direction::Top ? sa > sb : sa < sb;
        });
        for (std::size_t r = 0; r < count; ++r) out.satisfied[order[r]].push_back(ci);
        if (count < n && scores(static_cast<Eigen::Index>(order[count - 1]), col) ==
                             scores(static_cast<Eigen::Index>(order[count]), col)) {
            out.ties.push_back(c.label);
        }
    }
    for (auto& s : out.satisfied) std::sort(s.begin(), s.end());

    out.types.reserve(n);
    for (const auto& s : out.satisfied) {
        if (s.empty()) {
            out.types.emplace_back("none");
            continue;
        }
        std::string type;
        for (auto ci : s) {
            if (!type.empty()) type += '+';
            type += criteria[ci].label;
        }
        out.types.push_back(std::move(type));
    }
    return out;
}

std::set<std::size_t> label_clusters(const ClusterSolution& solution, const Matrix& scores,
                                     const std::set<std::size_t>& susceptible_factors,
                                     const std::set<std::size_t>& bottleneck_factors, double threshold_sd) {
    if (susceptible_factors.empty() && bottleneck_factors.empty()) {
        throw ParameterError("cluster labeling needs susceptible or bottleneck factors");
    }
    for (auto f : susceptible_factors) {
        if (bottleneck_factors.count(f)) throw ParameterError(fmt::format("factor {} is both susceptible and bottleneck", f + 1));
    }
    const auto m = static_cast<std::size_t>(scores.cols());
    for (const auto* set : {&susceptible_factors, &bottleneck_factors}) {
        if (!set->empty() && *set->rbegin() >= m) throw ParameterError("factor index out of range");
    }
    if (solution.assignment.size() != static_cast<std::size_t>(scores.rows())) {
        throw ParameterError("cluster solution and score matrix are not aligned");
    }

    auto mean_over = [&](std::size_t row, const std::set<std::size_t>& factors) {
        double s = 0.0;
        for (auto f : factors) s += scores(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(f));
        return s / static_cast<double>(factors.size());
    };

    std::set<std::size_t> vulnerable;
    for (std::size_t c = 0; c < solution.medoids.size(); ++c) {
        const auto medoid = solution.medoids[c];
        const bool high = !susceptible_factors.empty() && mean_over(medoid, susceptible_factors) > threshold_sd;
        const bool low = !bottleneck_factors.empty() && mean_over(medoid, bottleneck_factors) < -threshold_sd;
        if (high || low) vulnerable.insert(c);
    }
    return vulnerable;
}

bool VulnerabilityReport::is_vulnerable(std::string_view soc_code) const {
    return std::binary_search(vulnerable_occupations.begin(), vulnerable_occupations.end(), std::string(soc_code));
}

VulnerabilityReport vulnerable_list(const std::vector<std::string>& occupation_ids, const ClusterSolution& solution,
                                    const std::vector<SusceptibilityCriterion>& criteria, const CriteriaFlags& flags,
                                    const std::set<std::size_t>& vulnerable_clusters, double threshold_sd) {
    const auto n = occupation_ids.size();
    if (solution.assignment.size() != n || flags.types.size() != n) {
        throw ParameterError("occupations, clusters and flags are not aligned");
    }
    VulnerabilityReport r;
    r.criteria = criteria;
    r.threshold_sd = threshold_sd;
    r.occupation_ids = occupation_ids;
    r.cluster_of = solution.assignment;
    r.vulnerable_clusters = vulnerable_clusters;
    for (std::size_t c = 0; c < solution.k; ++c) r.cluster_sizes[c] = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& code = occupation_ids[i];
        auto& labels = r.flags[code];
        for (auto ci : flags.satisfied[i]) labels.insert(criteria[ci].label);
        r.susceptibility_type[code] = flags.types[i];
        ++r.type_counts[flags.types[i]];
        ++r.cluster_sizes[solution.assignment[i]];
        if (vulnerable_clusters.count(solution.assignment[i])) r.vulnerable_occupations.push_back(code);
    }
    std::sort(r.vulnerable_occupations.begin(), r.vulnerable_occupations.end());
    r.vulnerable_occupations.erase(std::unique(r.vulnerable_occupations.begin(), r.vulnerable_occupations.end()),
                                   r.vulnerable_occupations.end());
    return r;
}

void write_vulnerability_table(std::ostream& out, const VulnerabilityReport& report) {
    TableWriter w(out);
    w.row({"soc_code", "cluster", "susceptibility_type", "criteria_satisfied", "vulnerable"});
    for (std::size_t i = 0; i < report.occupation_ids.size(); ++i) {
        const auto& code = report.occupation_ids[i];
        const auto c = report.cluster_of[i];
        const auto& flags = report.flags.at(code);
        w.row({code, std::to_string(c + 1), report.susceptibility_type.at(code), std::to_string(flags.size()),
               report.vulnerable_clusters.count(c) ? "true" : "false"});
    }
}

void write_vulnerability_summary(std::ostream& out, const VulnerabilityReport& report) {
    out << "threshold_sd = " << format_number(report.threshold_sd) << '\n';
    for (std::size_t i = 0; i < report.criteria.size(); ++i) {
        const auto& c = report.criteria[i];
        out << "criterion[" << i + 1 << "] = " << c.label << " (factor " << c.factor_index + 1 << ", "
            << to_string(c.direction) << ' ' << format_number(c.fraction) << ")\n";
    }
    out << "occupations = " << report.occupation_ids.size() << '\n';
    out << "vulnerable_occupations = " << report.vulnerable_occupations.size() << '\n';
    out << "vulnerable_clusters = ";
    bool first = true;
    for (auto c : report.vulnerable_clusters) {
        out << (first ? "" : ",") << c + 1;
        first = false;
    }
    out << '\n';
    for (const auto& [c, size] : report.cluster_sizes) {
        out << "cluster[" << c + 1 << "] = " << size << (report.vulnerable_clusters.count(c) ? " vulnerable" : "") << '\n';
    }
    for (const auto& [type, count] : report.type_counts) out << "type[" << type << "] = " << count << '\n';
}

void write_vulnerable_list(std::ostream& out, const VulnerabilityReport& report,
                           const std::map<std::string, std::string>& titles) {
    std::vector<std::pair<std::size_t, std::string>> rows;
    for (std::size_t i = 0; i < report.occupation_ids.size(); ++i) {
        if (!report.vulnerable_clusters.count(report.cluster_of[i])) continue;
        const auto& code = report.occupation_ids[i];
        const auto it = titles.find(code);
        rows.emplace_back(report.cluster_of[i], it == titles.end() ? code : it->second);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    TableWriter w(out);
    w.row({"cluster", "occupation"});
    for (const auto& [c, name] : rows) w.row({std::to_string(c + 1), name});
}

VulnerabilityReport read_vulnerability_table(std::istream& in) {
    const Table t = read_table(in);
    const auto cc = t.require_column("soc_code");
    const auto ck = t.require_column("cluster");
    const auto ct = t.require_column("susceptibility_type");
    const auto cv = t.require_column("vulnerable");
    VulnerabilityReport r;
    for (const auto& row : t.rows) {
        const auto cluster = parse_integer(row.fields[ck]);
        if (!cluster || *cluster < 1) throw ValidationError({{row.line, "bad cluster id"}});
        const auto& flag = row.fields[cv];
        if (flag != "true" && flag != "false") throw ValidationError({{row.line, "vulnerable must be true or false"}});
        const auto& code = row.fields[cc];
        const auto c = static_cast<std::size_t>(*cluster - 1);
        r.occupation_ids.push_back(code);
        r.cluster_of.push_back(c);
        r.susceptibility_type[code] = row.fields[ct];
        ++r.type_counts[row.fields[ct]];
        ++r.cluster_sizes[c];
        if (flag == "true") {
            r.vulnerable_clusters.insert(c);
            r.vulnerable_occupations.push_back(code);
        }
    }
    std::sort(r.vulnerable_occupations.begin(), r.vulnerable_occupations.end());
    return r;
}

}  // namespace taskrisk
