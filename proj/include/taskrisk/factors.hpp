#pragma once

// Exploratory factor analysis: parallel analysis for the factor count, iterated
// principal-axis extraction, varimax rotation, fit indices and regression scores.

#include "taskrisk/adequacy.hpp"
#include "taskrisk/corpus.hpp"
#include "taskrisk/linalg.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace taskrisk {

struct ParallelAnalysisResult {
    std::vector<double> observed_eigenvalues;   // descending
    std::vector<double> reference_eigenvalues;  // per-rank quantile over replicates
    std::size_t suggested_factors = 0;
    int replicates = 0;
    double quantile = 0.0;
    std::uint64_t seed = 0;
};

/// Horn's parallel analysis on principal-component eigenvalues. Replicate r draws its
/// own n x p standard-normal sample from a stream seeded by (seed, r), so the result
/// does not depend on `threads` (0 = hardware concurrency).
ParallelAnalysisResult parallel_analysis(const OccupationMatrix& matrix, int replicates, double quantile,
                                         std::uint64_t seed, unsigned threads = 0);

struct FitIndices {
    std::optional<double> tli;    // undefined when the model has no degrees of freedom
    double rmsr = 0.0;
    std::optional<double> rmsea;  // undefined when the model has no degrees of freedom
    double bic = 0.0;
    double chi_square = 0.0;
    long df = 0;
    double baseline_chi_square = 0.0;
    long baseline_df = 0;
};

struct FactorSolution {
    std::vector<std::string> attribute_ids;
    Matrix loadings;      // p x m
    Vector communalities; // p
    Matrix rotation;      // m x m; loadings = unrotated * rotation
    Vector eigenvalues;   // top-m eigenvalues of the final reduced correlation matrix
    Matrix scores;        // n x m, empty until factor_scores runs
    std::vector<std::string> factor_labels;
    FitIndices fit;
    int iterations = 0;
    std::vector<std::string> warnings;

    std::size_t factors() const { return static_cast<std::size_t>(loadings.cols()); }
};

/// Iterated principal-axis factoring starting from squared multiple correlations.
/// Communalities above 1 (Heywood cases) are clamped and reported in `warnings`.
FactorSolution extract_paf(const CorrelationMatrix& r, std::size_t m, double tol = 1e-6, int max_iter = 200);

/// Raw varimax criterion: sum over columns of the variance of squared loadings.
double varimax_criterion(const Matrix& loadings);

struct VarimaxResult {
    Matrix loadings;
    Matrix rotation;
    std::vector<double> criterion_history;  // after each sweep, starting with the input
    int sweeps = 0;
};

/// Pairwise (Kaiser) varimax rotation. With kaiser_normalize the rows are scaled to unit
/// length before rotating and restored afterwards.
VarimaxResult varimax(const Matrix& loadings, double tol = 1e-10, int max_iter = 1000, bool kaiser_normalize = false);

/// Rotates a solution by varimax, then orders factors by explained variance and makes
/// each column's largest-magnitude loading positive. The rotation matrix absorbs both.
FactorSolution rotate_varimax(const FactorSolution& solution, double tol = 1e-10, int max_iter = 1000,
                              bool kaiser_normalize = false);

/// Residual RMS plus chi-square based indices from the ML discrepancy at the PAF solution:
///   F = ln det S - ln det R + tr(R S^-1) - p,  S = L L' + diag(1 - h),  chi2 = (n - 1) F,
///   df = ((p - m)^2 - (p + m)) / 2,  TLI against the independence model,
///   RMSEA = sqrt(max(chi2 - df, 0) / (df (n - 1))),  BIC = chi2 - df ln n.
FitIndices fit_indices(const CorrelationMatrix& r, const FactorSolution& solution, std::size_t n);

/// Regression (Thurstone) scores Z R^-1 L.
Matrix factor_scores(const OccupationMatrix& matrix, const CorrelationMatrix& r, const FactorSolution& solution);

/// Six interpretive names plus "unnamed-7", truncated or padded ("unnamed-<k>") to m.
std::vector<std::string> default_factor_labels(std::size_t m);

void write_scree_table(std::ostream& out, const ParallelAnalysisResult& pa);
void write_loadings_table(std::ostream& out, const FactorSolution& solution);
void write_scores_table(std::ostream& out, const std::vector<std::string>& occupation_ids, const FactorSolution& solution);
void write_factor_summary(std::ostream& out, const FactorSolution& solution, const ParallelAnalysisResult* pa);

struct ScoreTable {
    std::vector<std::string> occupation_ids;
    std::vector<std::string> factor_labels;
    Matrix scores;
};
ScoreTable read_scores_table(std::istream& in);

}  // namespace taskrisk
