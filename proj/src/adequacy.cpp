#include "taskrisk/adequacy.hpp"

#include "taskrisk/error.hpp"
#include "taskrisk/table.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace taskrisk {

CorrelationMatrix correlation(const OccupationMatrix& matrix) {
    if (!matrix.standardized) throw ParameterError("correlation expects a standardized matrix");
    const auto n = matrix.values.rows();
    if (n < 3) throw ParameterError("correlation needs at least 3 occupations");

    const Matrix centered = matrix.values.rowwise() - matrix.values.colwise().mean();
    const Vector norms = centered.colwise().norm();
    for (Eigen::Index j = 0; j < norms.size(); ++j) {
        if (norms(j) == 0.0) throw DegenerateColumnError(matrix.attribute_ids[static_cast<std::size_t>(j)]);
    }
    const Matrix unit = centered * norms.cwiseInverse().asDiagonal();

    CorrelationMatrix r{matrix.attribute_ids, unit.transpose() * unit};
    const auto p = r.values.rows();
    for (Eigen::Index i = 0; i < p; ++i) {
        r.values(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < p; ++j) {
            const double v = std::clamp(r.values(i, j), -1.0, 1.0);
            r.values(i, j) = v;
            r.values(j, i) = v;
        }
    }
    return r;
}

double chi_square_upper_tail(double statistic, double df) {
    if (!(df > 0)) throw ParameterError("chi-square degrees of freedom must be positive");
    if (statistic <= 0) return 1.0;
    return boost::math::gamma_q(df / 2.0, statistic / 2.0);
}

BartlettResult bartlett_test(const CorrelationMatrix& r, std::size_t n) {
    const auto p = r.size();
    if (n <= p) throw ParameterError(fmt::format("Bartlett test needs n > p (n = {}, p = {})", n, p));
    const double log_det = log_determinant(r.values);
    BartlettResult out;
    const double scale = static_cast<double>(n) - 1.0 - (2.0 * static_cast<double>(p) + 5.0) / 6.0;
    out.statistic = std::max(0.0, -scale * log_det);
    out.df = static_cast<long>(p * (p - 1) / 2);
    out.p_value = out.df > 0 ? chi_square_upper_tail(out.statistic, static_cast<double>(out.df)) : 1.0;
    return out;
}

KmoResult kmo(const CorrelationMatrix& r) {
    const auto p = r.values.rows();
    if (p < 2) throw ParameterError("KMO needs at least two variables");
    log_determinant(r.values);  // rejects det <= 0
    const Matrix inv = checked_inverse(r.values);

    Vector r2 = Vector::Zero(p);
    Vector u2 = Vector::Zero(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < p; ++j) {
            if (i == j) continue;
            const double partial = -inv(i, j) / std::sqrt(inv(i, i) * inv(j, j));
            r2(i) += r.values(i, j) * r.values(i, j);
            u2(i) += partial * partial;
        }
    }
    const double total_r2 = r2.sum();
    if (total_r2 == 0.0) throw UndefinedKmoError();

    KmoResult out;
    out.overall = total_r2 / (total_r2 + u2.sum());
    for (Eigen::Index i = 0; i < p; ++i) {
        const double denom = r2(i) + u2(i);
        out.per_variable[r.ids[static_cast<std::size_t>(i)]] = denom > 0 ? r2(i) / denom : 0.0;
    }
    return out;
}

AdequacyResult assess_adequacy(const CorrelationMatrix& r, std::size_t n) {
    AdequacyResult out;
    out.n = n;
    out.condition_number = condition_number(r.values);
    if (out.condition_number > 1e12) {
        out.warnings.push_back(fmt::format("correlation matrix is near-singular (condition number {:.3g})",
                                           out.condition_number));
    }
    out.bartlett = bartlett_test(r, n);
    out.kmo = kmo(r);
    return out;
}

void write_adequacy_report(std::ostream& out, const AdequacyResult& result) {
    out << "# factorability diagnostics\n";
    out << "n = " << result.n << '\n';
    out << "p = " << result.kmo.per_variable.size() << '\n';
    out << "condition_number = " << format_number(result.condition_number) << '\n';
    out << "bartlett_statistic = " << format_number(result.bartlett.statistic) << '\n';
    out << "bartlett_df = " << result.bartlett.df << '\n';
    out << "bartlett_p = " << format_number(result.bartlett.p_value) << '\n';
    out << "kmo_overall = " << format_number(result.kmo.overall) << '\n';
    for (const auto& [id, value] : result.kmo.per_variable) {
        out << "kmo[" << id << "] = " << format_number(value) << '\n';
    }
    for (const auto& w : result.warnings) out << "warning = " << w << '\n';
    out << "# advisory: KMO >= 0.6 and Bartlett p < 0.05 are conventional signs of factorability\n";
    out << "# advisory: kmo_overall " << (result.kmo.overall >= 0.6 ? "meets" : "is below") << " 0.6; bartlett_p "
        << (result.bartlett.p_value < 0.05 ? "is below" : "is not below") << " 0.05\n";
}

}  // namespace taskrisk
