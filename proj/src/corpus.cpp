#include "taskrisk/corpus.hpp"

#include "taskrisk/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_map>

namespace taskrisk {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

bool is_soc_code(std::string_view code) {
    if (code.size() != 7 && code.size() != 10) return false;
    if (!all_digits(code.substr(0, 2)) || code[2] != '-' || !all_digits(code.substr(3, 4))) return false;
    if (code.size() == 10) return code[7] == '.' && all_digits(code.substr(8, 2));
    return true;
}

std::string soc_prefix(std::string_view code) { return std::string(code.substr(0, std::min<std::size_t>(7, code.size()))); }

std::string_view to_string(AttributeCategory category) {
    switch (category) {
        case AttributeCategory::Bottleneck: return "bottleneck";
        case AttributeCategory::Hazard: return "hazard";
        case AttributeCategory::Routine: return "routine";
    }
    return "unknown";
}

AttributeCategory parse_category(std::string_view text) {
    const auto t = lower(trim(text));
    if (t == "bottleneck") return AttributeCategory::Bottleneck;
    if (t == "hazard") return AttributeCategory::Hazard;
    if (t == "routine") return AttributeCategory::Routine;
    throw ValidationError(fmt::format("unknown attribute category '{}'", text));
}

AttributeCatalog::AttributeCatalog(std::vector<CatalogEntry> entries) : entries_(std::move(entries)) {
    std::set<std::string> seen;
    for (const auto& e : entries_) {
        if (e.attribute_id.empty()) throw ValidationError("catalog entry with empty attribute_id");
        if (!seen.insert(e.attribute_id).second) throw ConflictError("duplicate catalog attribute_id " + e.attribute_id);
    }
}

std::size_t AttributeCatalog::count(AttributeCategory category) const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.category == category; }));
}

std::vector<std::string> AttributeCatalog::attribute_ids() const {
    std::vector<std::string> ids;
    ids.reserve(entries_.size());
    for (const auto& e : entries_) ids.push_back(e.attribute_id);
    return ids;
}

const std::map<int, double>* EmploymentSeries::find(std::string_view soc_code) const {
    if (auto it = records.find(std::string(soc_code)); it != records.end()) return &it->second;
    const auto prefix = soc_prefix(soc_code);
    if (auto it = records.find(prefix); it != records.end()) return &it->second;
    // An O*NET-style key in the series can still serve a BLS-style query.
    auto it = records.lower_bound(prefix);
    if (it != records.end() && soc_prefix(it->first) == prefix) return &it->second;
    return nullptr;
}

std::vector<AttributeObservation> parse_attribute_file(std::istream& in, TableFormat format) {
    const Table table = read_table(in, format);
    const auto c_code = table.require_column("soc_code");
    const auto c_attr = table.require_column("attribute_id");
    const auto c_imp = table.require_column("importance");

    std::vector<AttributeObservation> out;
    std::vector<RowIssue> issues;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        const auto& code = row.fields[c_code];
        const auto& attr = row.fields[c_attr];
        if (!is_soc_code(code)) {
            issues.push_back({row.line, fmt::format("malformed soc_code '{}'", code)});
            continue;
        }
        if (attr.empty()) {
            issues.push_back({row.line, "empty attribute_id"});
            continue;
        }
        const auto value = parse_number(row.fields[c_imp]);
        if (!value) {
            issues.push_back({row.line, fmt::format("importance '{}' is not a number", row.fields[c_imp])});
            continue;
        }
        if (!(*value >= 0.0 && *value <= 100.0)) {
            issues.push_back({row.line, fmt::format("importance {} outside [0, 100]", row.fields[c_imp])});
            continue;
        }
        out.push_back({code, attr, *value});
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return out;
}

EmploymentSeries parse_employment_file(std::istream& in, TableFormat format) {
    const Table table = read_table(in, format);
    const auto c_code = table.require_column("soc_code");
    const auto c_year = table.require_column("year");
    const auto c_emp = table.require_column("employment");

    EmploymentSeries series;
    std::vector<RowIssue> issues;
    for (const auto& row : table.rows) {
        const auto& code = row.fields[c_code];
        if (!is_soc_code(code)) {
            issues.push_back({row.line, fmt::format("malformed soc_code '{}'", code)});
            continue;
        }
        const auto year = parse_integer(row.fields[c_year]);
        if (!year) {
            issues.push_back({row.line, fmt::format("year '{}' is not an integer", row.fields[c_year])});
            continue;
        }
        const auto count = parse_number(row.fields[c_emp]);
        if (!count || !std::isfinite(*count)) {
            issues.push_back({row.line, fmt::format("employment '{}' is not a number", row.fields[c_emp])});
            continue;
        }
        if (*count < 0.0) {
            issues.push_back({row.line, fmt::format("negative employment {}", row.fields[c_emp])});
            continue;
        }
        auto& years = series.records[code];
        if (!years.emplace(static_cast<int>(*year), *count).second) {
            throw ConflictError(fmt::format("line {}: duplicate employment record for ({}, {})", row.line, code, *year));
        }
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return series;
}

AttributeCatalog parse_catalog_file(std::istream& in, TableFormat format) {
    const Table table = read_table(in, format);
    const auto c_id = table.require_column("attribute_id");
    const auto c_cat = table.require_column("category");
    const auto c_label = table.require_column("label");
    std::vector<CatalogEntry> entries;
    std::vector<RowIssue> issues;
    for (const auto& row : table.rows) {
        try {
            entries.push_back({row.fields[c_id], parse_category(row.fields[c_cat]), row.fields[c_label]});
        } catch (const ValidationError& e) {
            issues.push_back({row.line, e.what()});
        }
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return AttributeCatalog(std::move(entries));
}

BuildResult build_matrix(const std::vector<AttributeObservation>& observations, const AttributeCatalog& catalog) {
    if (catalog.empty()) throw ParameterError("attribute catalog is empty");

    std::unordered_map<std::string, std::size_t> column_of;
    for (std::size_t j = 0; j < catalog.size(); ++j) column_of.emplace(catalog.entries()[j].attribute_id, j);

    // soc_code -> per-column value (NaN = missing)
    std::map<std::string, std::vector<double>> cells;
    const double missing = std::numeric_limits<double>::quiet_NaN();
    for (const auto& obs : observations) {
        auto& row = cells.try_emplace(obs.soc_code, catalog.size(), missing).first->second;
        const auto it = column_of.find(obs.attribute_id);
        if (it == column_of.end()) continue;
        double& cell = row[it->second];
        if (!std::isnan(cell)) {
            throw ConflictError(fmt::format("duplicate observation for ({}, {})", obs.soc_code, obs.attribute_id));
        }
        cell = obs.importance;
    }

    BuildResult result;
    std::vector<const std::vector<double>*> kept;
    for (const auto& [code, row] : cells) {
        std::vector<std::string> absent;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (std::isnan(row[j])) absent.push_back(catalog.entries()[j].attribute_id);
        }
        if (absent.empty()) {
            result.matrix.occupation_ids.push_back(code);
            kept.push_back(&row);
        } else {
            result.dropped.push_back({code, std::move(absent)});
        }
    }
    if (kept.empty()) throw EmptyCorpusError("no occupation has every catalog attribute");

    result.matrix.attribute_ids = catalog.attribute_ids();
    result.matrix.values.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(catalog.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        for (std::size_t j = 0; j < catalog.size(); ++j) {
            result.matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*kept[i])[j];
        }
    }
    result.matrix.standardized = false;
    return result;
}

OccupationMatrix standardize(const OccupationMatrix& matrix) {
    if (matrix.standardized) throw ParameterError("matrix is already standardized");
    const auto n = matrix.values.rows();
    if (n < 3) throw ParameterError(fmt::format("standardization needs at least 3 occupations, got {}", n));

    OccupationMatrix out = matrix;
    for (Eigen::Index j = 0; j < matrix.values.cols(); ++j) {
        auto col = out.values.col(j);
        const double mean = col.mean();
        col.array() -= mean;
        const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(n - 1));
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
            throw DegenerateColumnError(matrix.attribute_ids[static_cast<std::size_t>(j)]);
        }
        col /= sd;
    }
    out.standardized = true;
    return out;
}

void write_drop_report(std::ostream& out, const std::vector<DroppedOccupation>& dropped) {
    TableWriter w(out);
    w.row({"soc_code", "missing_attribute_ids"});
    for (const auto& d : dropped) w.row({d.soc_code, fmt::format("{}", fmt::join(d.missing_attribute_ids, ";"))});
}

void write_catalog(std::ostream& out, const AttributeCatalog& catalog) {
    TableWriter w(out);
    w.row({"attribute_id", "category", "label"});
    for (const auto& e : catalog.entries()) w.row({e.attribute_id, std::string(to_string(e.category)), e.label});
}

void write_matrix(std::ostream& out, const OccupationMatrix& matrix) {
    TableWriter w(out);
    std::vector<std::string> fields{"soc_code"};
    fields.insert(fields.end(), matrix.attribute_ids.begin(), matrix.attribute_ids.end());
    w.row(fields);
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        fields.assign(1, matrix.occupation_ids[i]);
        for (std::size_t j = 0; j < matrix.cols(); ++j) {
            fields.push_back(format_number(matrix.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        }
        w.row(fields);
    }
}

OccupationMatrix read_matrix(std::istream& in, bool standardized) {
    const Table table = read_table(in);
    if (table.header.empty() || table.header.front() != "soc_code") {
        throw FormatError("matrix table must start with a soc_code column");
    }
    OccupationMatrix m;
    m.attribute_ids.assign(table.header.begin() + 1, table.header.end());
    m.values.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(m.attribute_ids.size()));
    std::vector<RowIssue> issues;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        m.occupation_ids.push_back(row.fields[0]);
        for (std::size_t j = 1; j < row.fields.size(); ++j) {
            const auto v = parse_number(row.fields[j]);
            if (!v) {
                issues.push_back({row.line, fmt::format("non-numeric cell '{}'", row.fields[j])});
                continue;
            }
            m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j - 1)) = *v;
        }
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    m.standardized = standardized;
    return m;
}

}  // namespace taskrisk
