#pragma once

// PAM k-medoids in factor-score space with silhouette validation.

#include "taskrisk/linalg.hpp"

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace taskrisk {

enum class Metric { Euclidean, Manhattan };

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);

struct DissimilarityMatrix {
    std::vector<std::string> ids;
    Matrix values;
    Metric metric = Metric::Euclidean;

    std::size_t size() const { return ids.size(); }
    double operator()(std::size_t i, std::size_t j) const {
        return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
};

/// Pairwise distances between the rows of `points`.
DissimilarityMatrix dissimilarity_matrix(const Matrix& points, std::vector<std::string> ids, Metric metric);

enum class PamInit { Build, Random };

struct ClusterSolution {
    std::size_t k = 0;
    std::vector<std::size_t> medoids;     // point indices, ascending; cluster c is medoids[c]
    std::vector<std::size_t> assignment;  // cluster index per point
    double cost_z = 0.0;                  // sum of point-to-medoid distances
    std::vector<double> silhouettes;
    double mean_silhouette = 0.0;
    std::vector<double> swap_costs;       // cost after BUILD, then after each applied swap
};

/// Partitioning Around Medoids: greedy BUILD (or a seeded random start) followed by
/// best-improvement SWAP until no swap lowers the cost. Ties go to the lowest index.
/// Silhouettes are filled in when at least two clusters are non-empty.
ClusterSolution pam(const DissimilarityMatrix& d, std::size_t k, std::uint64_t seed = 0, PamInit init = PamInit::Build);

struct SilhouetteResult {
    std::vector<double> values;
    double mean = 0.0;
};

/// Rousseeuw silhouettes; points in singleton clusters get 0.
SilhouetteResult silhouette(const DissimilarityMatrix& d, const std::vector<std::size_t>& assignment);

struct KScanRow {
    std::size_t k = 0;
    double mean_silhouette = 0.0;
    double cost_z = 0.0;
};

struct KSelection {
    std::size_t best_k = 0;
    std::vector<KScanRow> table;
    std::vector<ClusterSolution> solutions;  // parallel to table
};

/// Runs pam + silhouette for k_min..k_max and keeps the k with the largest mean
/// silhouette (smaller k on ties).
KSelection select_k(const DissimilarityMatrix& d, std::size_t k_min, std::size_t k_max, std::uint64_t seed = 0,
                    PamInit init = PamInit::Build, unsigned threads = 0);

/// Cluster ids are written 1-based.
void write_cluster_report(std::ostream& out, const DissimilarityMatrix& d, const ClusterSolution& solution);
void write_medoid_table(std::ostream& out, const DissimilarityMatrix& d, const ClusterSolution& solution);
void write_kscan_table(std::ostream& out, const std::vector<KScanRow>& table);

/// Reads clusters.csv and medoids.csv back into a solution aligned with `ids`.
ClusterSolution read_cluster_tables(std::istream& clusters, std::istream& medoids, const std::vector<std::string>& ids);

}  // namespace taskrisk
