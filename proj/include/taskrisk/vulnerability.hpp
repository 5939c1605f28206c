#pragma once

// Quantile-based susceptibility flags, vulnerable-cluster labeling and the final report.

#include "taskrisk/clustering.hpp"
#include "taskrisk/linalg.hpp"

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace taskrisk {

enum class Direction { Top, Bottom };

std::string_view to_string(Direction direction);
Direction parse_direction(std::string_view text);

struct SusceptibilityCriterion {
    std::size_t factor_index = 0;
    Direction direction = Direction::Top;
    double fraction = 0.20;
    std::string label;
};

/// Three-criterion reconstruction (hazard top 20%, problem-solving bottom 20%,
/// dexterity top 20%) for the given factor indices.
std::vector<SusceptibilityCriterion> default_criteria(std::size_t hazard, std::size_t problem_solving,
                                                      std::size_t dexterity);

struct CriteriaFlags {
    /// Per occupation, the satisfied criterion indices in criteria order.
    std::vector<std::vector<std::size_t>> satisfied;
    /// Per occupation, satisfied labels joined by '+', or "none".
    std::vector<std::string> types;
    /// Labels of criteria whose cutoff fell inside a run of tied scores.
    std::vector<std::string> ties;
};

/// Flags the ceil(fraction * n) highest (top) or lowest (bottom) scorers per criterion;
/// ties at the cutoff go to the lower row index.
CriteriaFlags score_criteria(const Matrix& scores, const std::vector<SusceptibilityCriterion>& criteria);

/// A cluster is vulnerable when its medoid's mean score over the susceptible factors exceeds
/// +threshold_sd or its mean over the bottleneck factors is below -threshold_sd. An empty
/// index set disables its condition; both empty is an error.
std::set<std::size_t> label_clusters(const ClusterSolution& solution, const Matrix& scores,
                                     const std::set<std::size_t>& susceptible_factors,
                                     const std::set<std::size_t>& bottleneck_factors, double threshold_sd);

struct VulnerabilityReport {
    std::vector<SusceptibilityCriterion> criteria;
    double threshold_sd = 0.0;
    std::vector<std::string> occupation_ids;
    std::vector<std::size_t> cluster_of;  // 0-based, parallel to occupation_ids
    std::map<std::string, std::set<std::string>> flags;
    std::map<std::string, std::string> susceptibility_type;
    std::set<std::size_t> vulnerable_clusters;
    std::vector<std::string> vulnerable_occupations;  // sorted by soc_code
    std::map<std::size_t, std::size_t> cluster_sizes;
    std::map<std::string, std::size_t> type_counts;

    bool is_vulnerable(std::string_view soc_code) const;
};

VulnerabilityReport vulnerable_list(const std::vector<std::string>& occupation_ids, const ClusterSolution& solution,
                                    const std::vector<SusceptibilityCriterion>& criteria, const CriteriaFlags& flags,
                                    const std::set<std::size_t>& vulnerable_clusters, double threshold_sd);

/// `soc_code,cluster,susceptibility_type,criteria_satisfied,vulnerable`; clusters 1-based.
void write_vulnerability_table(std::ostream& out, const VulnerabilityReport& report);
/// Counts per cluster and per susceptibility type, plus the labeling threshold.
void write_vulnerability_summary(std::ostream& out, const VulnerabilityReport& report);
/// `cluster,occupation` listing of vulnerable occupations grouped by cluster; `titles` maps
/// soc_code to a display name and falls back to the code.
void write_vulnerable_list(std::ostream& out, const VulnerabilityReport& report,
                           const std::map<std::string, std::string>& titles = {});

/// Reads vulnerability.csv: occupation ids, clusters and the vulnerable set.
VulnerabilityReport read_vulnerability_table(std::istream& in);

}  // namespace taskrisk
