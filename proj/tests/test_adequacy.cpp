#include "support.hpp"

#include "taskrisk/adequacy.hpp"
#include "taskrisk/error.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace taskrisk;

namespace {

CorrelationMatrix make_r(const Matrix& values) {
    CorrelationMatrix r;
    for (Eigen::Index i = 0; i < values.rows(); ++i) r.ids.push_back("v" + std::to_string(i + 1));
    r.values = values;
    return r;
}

OccupationMatrix standardized(const Matrix& values) { return standardize(testing::as_occupations(values)); }

}  // namespace

TEST_CASE("correlation of perfectly dependent columns") {
    const Matrix up{{1, 2, 3}, {2, 4, 2}, {3, 6, 1}};
    const auto r = correlation(standardized(up));
    CHECK(r.values(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.values(0, 2) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r.values(0, 1) <= 1.0);
    CHECK(r.values(0, 2) >= -1.0);
    CHECK_THROWS_AS(correlation(testing::as_occupations(up)), ParameterError);
}

TEST_CASE("correlation matches an elementwise covariance-over-sd oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    Matrix x(6, 3);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 3; ++j) x(i, j) = u(rng);
    }
    const auto r = correlation(standardized(x));
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            double ma = 0, mb = 0;
            for (int i = 0; i < 6; ++i) {
                ma += x(i, a) / 6;
                mb += x(i, b) / 6;
            }
            double cov = 0, va = 0, vb = 0;
            for (int i = 0; i < 6; ++i) {
                cov += (x(i, a) - ma) * (x(i, b) - mb);
                va += (x(i, a) - ma) * (x(i, a) - ma);
                vb += (x(i, b) - mb) * (x(i, b) - mb);
            }
            CHECK(std::abs(r.values(a, b) - cov / std::sqrt(va * vb)) < 1e-12);
            CHECK(r.values(a, b) == r.values(b, a));
        }
        CHECK(r.values(a, a) == 1.0);
    }
}

TEST_CASE("bartlett closed form") {
    const auto identity = bartlett_test(make_r(Matrix::Identity(4, 4)), 50);
    CHECK(identity.statistic == 0.0);
    CHECK(identity.p_value == doctest::Approx(1.0));
    CHECK(identity.df == 6);

    const auto r = bartlett_test(make_r(testing::equicorrelated(2, 0.6)), 100);
    const double oracle = -(100.0 - 1.0 - (2.0 * 2 + 5.0) / 6.0) * std::log(1.0 - 0.36);
    CHECK(std::abs(r.statistic - oracle) < 1e-12);
    CHECK(std::abs(r.statistic - 43.513) < 1e-3);
    CHECK(r.df == 1);
    CHECK(r.p_value < 1e-9);

    CHECK_THROWS_AS(bartlett_test(make_r(testing::equicorrelated(2, 1.0)), 100), SingularityError);
    CHECK_THROWS_AS(bartlett_test(make_r(Matrix::Identity(4, 4)), 4), ParameterError);
}

TEST_CASE("chi-square upper tail against known values") {
    // df = 2: survival is exp(-x/2).
    CHECK(chi_square_upper_tail(3.0, 2.0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-14));
    // df = 1: survival is erfc(sqrt(x/2)).
    CHECK(chi_square_upper_tail(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(chi_square_upper_tail(0.0, 5.0) == 1.0);
}

TEST_CASE("KMO closed forms") {
    for (double r : {0.1, -0.4, 0.6, 0.95}) {
        CHECK(std::abs(kmo(make_r(testing::equicorrelated(2, r))).overall - 0.5) < 1e-10);
    }

    // Equicorrelated p = 3, r = 0.5: partials from the closed-form inverse.
    const Matrix inv = testing::equicorrelated_inverse(3, 0.5);
    const double partial = -inv(0, 1) / inv(0, 0);
    CHECK(partial == doctest::Approx(1.0 / 3.0));
    const double oracle = 6 * 0.25 / (6 * 0.25 + 6 * partial * partial);
    const auto k3 = kmo(make_r(testing::equicorrelated(3, 0.5)));
    CHECK(std::abs(k3.overall - oracle) < 1e-12);
    CHECK(std::abs(k3.overall - 0.6923) < 1e-4);
    for (const auto& [id, v] : k3.per_variable) CHECK(v == doctest::Approx(oracle));

    CHECK_THROWS_AS(kmo(make_r(Matrix::Identity(3, 3))), UndefinedKmoError);
}

TEST_CASE("adequacy report bundles both diagnostics") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> z;
    Matrix x(40, 4);
    for (int i = 0; i < 40; ++i) {
        const double f = z(rng);
        for (int j = 0; j < 4; ++j) x(i, j) = f + z(rng);
    }
    const auto r = correlation(standardized(x));
    const auto a = assess_adequacy(r, 40);
    CHECK(a.bartlett.df == 6);
    double lo = 1, hi = 0;
    for (const auto& [id, v] : a.kmo.per_variable) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(a.kmo.overall >= lo);
    CHECK(a.kmo.overall <= hi);
    std::ostringstream out;
    write_adequacy_report(out, a);
    CHECK(out.str().find("bartlett_statistic = ") != std::string::npos);
    CHECK(out.str().find("kmo_overall = ") != std::string::npos);
}
