#pragma once

// Employment growth of vulnerable vs non-vulnerable occupations.

#include "taskrisk/corpus.hpp"
#include "taskrisk/vulnerability.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace taskrisk {

struct YearRange {
    int start = 0;
    int end = 0;
};

struct OccupationGrowth {
    std::string soc_code;
    double mean_annual = 0.0;   // mean of (E[t+1] - E[t]) / E[t]
    double cagr = 0.0;          // (E[end] / E[start])^(1 / years) - 1
    double total_change = 0.0;  // (E[end] - E[start]) / E[start]
};

struct GroupStats {
    std::size_t occupations = 0;
    double mean_growth = 0.0;        // unweighted mean of per-occupation mean_annual
    double mean_cagr = 0.0;
    double mean_total_change = 0.0;
    double pooled_growth = 0.0;      // mean annual change of the summed headcounts
    double pooled_total_change = 0.0;
    double start_total = 0.0;
    double end_total = 0.0;
};

struct Exclusion {
    std::string soc_code;
    std::string reason;
};

struct GrowthResult {
    GroupStats stats;
    std::vector<OccupationGrowth> occupations;
    std::vector<Exclusion> excluded;
};

/// Codes are matched to the series exactly or by 6-digit SOC prefix. Codes lacking any
/// year in the range, or with a zero headcount in a denominator year, are excluded.
/// Pooled totals count each matched series once.
GrowthResult growth_stats(const EmploymentSeries& series, const std::vector<std::string>& group, YearRange range,
                          const std::string& label = "group");

struct Subgroup {
    std::string label;
    std::set<std::string> soc_codes;
};

struct TrendReport {
    YearRange range;
    std::map<std::string, GroupStats> group_stats;  // "vulnerable", "non_vulnerable", subgroup labels
    std::optional<double> ratio_vulnerable_to_nonvulnerable;  // undefined when the denominator <= 0
    std::map<std::string, double> per_occupation_growth;
    std::map<std::string, std::string> group_of;
    std::vector<Exclusion> excluded;
};

inline constexpr const char* kVulnerableGroup = "vulnerable";
inline constexpr const char* kNonVulnerableGroup = "non_vulnerable";

TrendReport compare_groups(const EmploymentSeries& series, const VulnerabilityReport& report, YearRange range,
                           const std::vector<Subgroup>& subgroups = {});

/// Per-occupation table `soc_code,group,mean_annual_growth,cagr,total_change`.
void write_trend_table(std::ostream& out, const TrendReport& report);
void write_trend_groups(std::ostream& out, const TrendReport& report);
void write_trend_summary(std::ostream& out, const TrendReport& report);

}  // namespace taskrisk
