#pragma once

// Correlation matrix and the factorability checks run before factoring.

#include "taskrisk/corpus.hpp"
#include "taskrisk/linalg.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace taskrisk {

struct CorrelationMatrix {
    std::vector<std::string> ids;
    Matrix values;

    std::size_t size() const { return ids.size(); }
};

/// Pearson correlations of the matrix columns; unit diagonal, exactly symmetric.
CorrelationMatrix correlation(const OccupationMatrix& matrix);

struct BartlettResult {
    double statistic = 0.0;
    long df = 0;
    double p_value = 1.0;
};

/// Bartlett's sphericity test: chi2 = -(n - 1 - (2p + 5)/6) ln det R with p(p-1)/2 df.
BartlettResult bartlett_test(const CorrelationMatrix& r, std::size_t n);

struct KmoResult {
    double overall = 0.0;
    std::map<std::string, double> per_variable;
};

/// Kaiser-Meyer-Olkin sampling adequacy from anti-image partial correlations.
KmoResult kmo(const CorrelationMatrix& r);

/// Upper tail of the chi-square distribution.
double chi_square_upper_tail(double statistic, double df);

struct AdequacyResult {
    BartlettResult bartlett;
    KmoResult kmo;
    std::size_t n = 0;
    double condition_number = 0.0;
    std::vector<std::string> warnings;
};

/// Runs both diagnostics; a condition number above 1e12 adds a warning.
AdequacyResult assess_adequacy(const CorrelationMatrix& r, std::size_t n);

/// Key-value report with advisory (non-gating) guidance lines.
void write_adequacy_report(std::ostream& out, const AdequacyResult& result);

}  // namespace taskrisk
