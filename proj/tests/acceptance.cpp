// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any criterion fails.

#include "support.hpp"

#include "taskrisk/adequacy.hpp"
#include "taskrisk/clustering.hpp"
#include "taskrisk/config.hpp"
#include "taskrisk/factors.hpp"
#include "taskrisk/pipeline.hpp"
#include "taskrisk/synthetic.hpp"
#include "taskrisk/vulnerability.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>

using namespace taskrisk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

CorrelationMatrix make_r(const Matrix& values) {
    CorrelationMatrix r;
    for (Eigen::Index i = 0; i < values.rows(); ++i) r.ids.push_back("v" + std::to_string(i + 1));
    r.values = values;
    return r;
}

Outcome pam_oracle() {
    Outcome o;
    const auto start = Clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> coord(0.0, 10.0);
    constexpr int instances = 60;
    int mismatches = 0;
    std::string first;
    for (int t = 0; t < instances; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 8)(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min<std::size_t>(3, n))(rng);
        Matrix pts(static_cast<Eigen::Index>(n), 2);
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
            pts(i, 0) = coord(rng);
            pts(i, 1) = coord(rng);
        }
        const auto d = dissimilarity_matrix(pts, testing::numbered_ids(n), Metric::Euclidean);
        const double got = pam(d, k).cost_z;
        const double best = testing::brute_force_medoid_cost(d, k);
        if (got != best) {
            ++mismatches;
            if (first.empty()) first = fmt::format("instance {} (n={}, k={}): pam {} vs optimum {}", t, n, k, got, best);
        }
    }
    const double elapsed = seconds_since(start);
    o.require(mismatches == 0, fmt::format("{}/{} instances above the optimum, first {}", mismatches, instances, first));
    o.require(elapsed < 5.0, fmt::format("runtime {:.2f}s", elapsed));
    if (o.pass) o.detail = fmt::format("{} instances exact in {:.3f}s", instances, elapsed);
    return o;
}

Outcome silhouette_hand() {
    Outcome o;
    Matrix pts{{0.0}, {1.0}, {10.0}, {11.0}};
    const auto d = dissimilarity_matrix(pts, testing::numbered_ids(4), Metric::Euclidean);
    const auto s = silhouette(d, {0, 0, 1, 1});
    const double oracle = (9.5 / 10.5 + 8.5 / 9.5) / 2.0;
    o.require(std::abs(s.mean - oracle) < 1e-9, fmt::format("mean {} vs {}", s.mean, oracle));
    o.require(std::abs(s.mean - 0.8997) < 1e-4, fmt::format("mean {} not near 0.8997", s.mean));

    Matrix line{{0.0}, {1.0}, {2.0}};
    const auto d3 = dissimilarity_matrix(line, testing::numbered_ids(3), Metric::Euclidean);
    const auto t = silhouette(d3, {0, 0, 1});
    o.require(t.values[1] == 0.0, fmt::format("a = b case gave {}", t.values[1]));
    o.require(t.values[2] == 0.0, fmt::format("singleton gave {}", t.values[2]));
    if (o.pass) o.detail = fmt::format("mean {:.10f}; a=b -> 0; singleton -> 0", s.mean);
    return o;
}

Outcome paf_fixed_point() {
    Outcome o;
    const auto r = make_r(testing::equicorrelated(2, 0.6));
    const auto s = extract_paf(r, 1, 1e-12);
    const double target = std::sqrt(0.6);
    const double err = std::max(std::abs(s.loadings(0, 0) - target), std::abs(s.loadings(1, 0) - target));
    const auto fit = fit_indices(r, s, 100);
    o.require(err < 1e-6, fmt::format("loading error {}", err));
    o.require(std::abs(fit.rmsr) < 1e-8, fmt::format("rmsr {}", fit.rmsr));
    if (o.pass) o.detail = fmt::format("loading error {:.2e}, rmsr {:.2e}", err, fit.rmsr);
    return o;
}

Outcome bartlett() {
    Outcome o;
    const auto id = bartlett_test(make_r(Matrix::Identity(5, 5)), 50);
    o.require(id.statistic == 0.0, fmt::format("identity statistic {}", id.statistic));
    o.require(std::abs(id.p_value - 1.0) < 1e-12, fmt::format("identity p {}", id.p_value));
    const auto b = bartlett_test(make_r(testing::equicorrelated(2, 0.6)), 100);
    o.require(std::abs(b.statistic - 43.513) < 1e-3, fmt::format("statistic {}", b.statistic));
    o.require(b.df == 1, fmt::format("df {}", b.df));
    if (o.pass) o.detail = fmt::format("identity 0 (p={}); r=0.6 n=100 -> {:.4f}, df 1", id.p_value, b.statistic);
    return o;
}

Outcome kmo_forms() {
    Outcome o;
    const double k2 = kmo(make_r(testing::equicorrelated(2, 0.37))).overall;
    const double k3 = kmo(make_r(testing::equicorrelated(3, 0.5))).overall;
    o.require(std::abs(k2 - 0.5) < 1e-10, fmt::format("p=2 gave {}", k2));
    o.require(std::abs(k3 - 0.6923) < 1e-4, fmt::format("p=3 gave {}", k3));
    if (o.pass) o.detail = fmt::format("p=2 {:.12f}, p=3 {:.6f}", k2, k3);
    return o;
}

Outcome varimax_invariants() {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    double worst_orth = 0, worst_comm = 0, worst_drop = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + trial % 4;
        const int p = m + 3 + trial % 7;
        Matrix l(p, m);
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < m; ++j) l(i, j) = u(rng) / std::sqrt(static_cast<double>(m));
        }
        const auto v = varimax(l);
        worst_orth = std::max(worst_orth, (v.rotation.transpose() * v.rotation - Matrix::Identity(m, m)).cwiseAbs().maxCoeff());
        worst_comm = std::max(worst_comm, (l.rowwise().squaredNorm() - v.loadings.rowwise().squaredNorm()).cwiseAbs().maxCoeff());
        for (std::size_t s = 1; s < v.criterion_history.size(); ++s) {
            worst_drop = std::max(worst_drop, v.criterion_history[s - 1] - v.criterion_history[s]);
        }
    }
    o.require(worst_orth < 1e-10, fmt::format("orthonormality error {}", worst_orth));
    o.require(worst_comm < 1e-8, fmt::format("communality drift {}", worst_comm));
    o.require(worst_drop <= 0.0, fmt::format("criterion decreased by {}", worst_drop));
    if (o.pass) o.detail = fmt::format("100 matrices; orth {:.1e}, communality {:.1e}", worst_orth, worst_comm);
    return o;
}

Outcome parallel() {
    Outcome o;
    const auto noise = testing::as_occupations(synthetic::noise(200, 10, 42));
    const auto a = parallel_analysis(noise, 100, 0.95, 42);
    const auto planted = testing::as_occupations(synthetic::planted_two_factor(300, 10, 1));
    const auto b = parallel_analysis(planted, 100, 0.95, 42);
    const auto again = parallel_analysis(planted, 100, 0.95, 42, 3);
    o.require(a.suggested_factors <= 1, fmt::format("noise suggested {}", a.suggested_factors));
    o.require(b.suggested_factors == 2, fmt::format("planted suggested {}", b.suggested_factors));
    o.require(again.reference_eigenvalues == b.reference_eigenvalues && again.observed_eigenvalues == b.observed_eigenvalues,
              "rerun differs");
    if (o.pass) o.detail = fmt::format("noise {}, planted {}, rerun bitwise equal", a.suggested_factors, b.suggested_factors);
    return o;
}

Outcome end_to_end() {
    Outcome o;
    testing::TempDir work("accept-e2e");
    const auto fx = synthetic::write_composite_fixture(work / "fixture");
    const auto start = Clock::now();
    RunOptions opts;
    opts.out_dir = work / "out";
    const auto r = run_pipeline(load_config(fx.config), opts);
    const double elapsed = seconds_since(start);

    o.require(r.parallel.suggested_factors == 2, fmt::format("PA suggested {}", r.parallel.suggested_factors));
    o.require(r.scan.best_k == 3, fmt::format("select_k chose {}", r.scan.best_k));

    // exactly one flagged cluster whose members are exactly the planted hazard-high occupations
    const std::set<std::string> planted(fx.planted_vulnerable.begin(), fx.planted_vulnerable.end());
    const auto& v = r.vulnerability;
    o.require(v.vulnerable_clusters.size() == 1, fmt::format("{} clusters flagged", v.vulnerable_clusters.size()));
    const std::set<std::string> flagged(v.vulnerable_occupations.begin(), v.vulnerable_occupations.end());
    o.require(flagged == planted, fmt::format("flagged {} occupations, planted {}", flagged.size(), planted.size()));

    const auto ratio = r.trends.ratio_vulnerable_to_nonvulnerable;
    o.require(ratio.has_value() && std::abs(*ratio - 0.5) < 1e-9, ratio ? fmt::format("ratio {}", *ratio) : "ratio undefined");
    o.require(elapsed < 30.0, fmt::format("runtime {:.2f}s", elapsed));
    if (o.pass) o.detail = fmt::format("PA 2, k 3, {} planted flagged, ratio {:.12f}, {:.2f}s", planted.size(), *ratio, elapsed);
    return o;
}

Outcome quantile_rule() {
    Outcome o;
    std::mt19937_64 rng(31);
    std::normal_distribution<double> z;
    for (std::size_t n : {5u, 10u, 37u, 966u}) {
        Matrix s(static_cast<Eigen::Index>(n), 1);
        for (Eigen::Index i = 0; i < s.rows(); ++i) s(i, 0) = z(rng);
        const auto f = score_criteria(s, {{0, Direction::Top, 0.20, "top"}});
        std::size_t count = 0;
        for (const auto& sat : f.satisfied) count += sat.size();
        const std::size_t expected = (n + 4) / 5;
        o.require(count == expected, fmt::format("n={} flagged {} expected {}", n, count, expected));
    }
    std::uniform_real_distribution<double> scale(0.01, 50.0);
    const auto criteria = default_criteria(0, 1, 2);
    int broken = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Matrix s(60, 3);
        for (Eigen::Index i = 0; i < 60; ++i) {
            for (Eigen::Index j = 0; j < 3; ++j) s(i, j) = z(rng);
        }
        const double c = scale(rng);
        const auto a = score_criteria(s, criteria);
        const auto b = score_criteria(s * c, criteria);
        ClusterSolution sol;
        sol.k = 3;
        sol.medoids = {0, 20, 40};
        for (std::size_t i = 0; i < 60; ++i) sol.assignment.push_back(i / 20);
        const bool same = a.satisfied == b.satisfied && a.types == b.types &&
                          label_clusters(sol, s, {0, 2}, {1}, 0.5) == label_clusters(sol, s * c, {0, 2}, {1}, 0.5 * c);
        broken += !same;
    }
    o.require(broken == 0, fmt::format("{} of 20 scaled matrices changed flags", broken));
    if (o.pass) o.detail = "counts 1, 2, 8, 194; 20 scaled matrices unchanged";
    return o;
}

Outcome determinism() {
    Outcome o;
    testing::TempDir work("accept-det");
    const auto fx = synthetic::write_composite_fixture(work / "fixture");
    const auto config = load_config(fx.config);
    RunOptions a, b;
    a.out_dir = work / "a";
    b.out_dir = work / "b";
    b.threads = 3;
    const auto ra = run_pipeline(config, a);
    const auto rb = run_pipeline(config, b);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(work / "a")) {
        ++files;
        const auto other = work / "b" / e.path().filename();
        o.require(fs::exists(other) && testing::slurp(e.path()) == testing::slurp(other),
                  "differs: " + e.path().filename().string());
    }
    const auto da = ra.manifest.at("bundle_sha256").get<std::string>();
    const auto db = rb.manifest.at("bundle_sha256").get<std::string>();
    o.require(da == db, "manifest digests differ");
    if (o.pass) o.detail = fmt::format("{} files identical, bundle {}", files, da.substr(0, 16));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"pam equals exhaustive optimum (n<=8, k<=3)", pam_oracle},
        {"silhouette hand cases", silhouette_hand},
        {"principal-axis fixed point", paf_fixed_point},
        {"bartlett closed form", bartlett},
        {"kmo closed forms", kmo_forms},
        {"varimax invariants", varimax_invariants},
        {"parallel analysis", parallel},
        {"end-to-end synthetic pipeline", end_to_end},
        {"quantile rule exactness", quantile_rule},
        {"bundle determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail << '\n';
    }
    std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
