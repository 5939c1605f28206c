#include "taskrisk/clustering.hpp"

#include "taskrisk/error.hpp"
#include "taskrisk/table.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <thread>

namespace taskrisk {

std::string_view to_string(Metric metric) { return metric == Metric::Euclidean ? "euclidean" : "manhattan"; }

Metric parse_metric(std::string_view text) {
    if (text == "euclidean") return Metric::Euclidean;
    if (text == "manhattan") return Metric::Manhattan;
    throw ParameterError(fmt::format("unknown metric '{}'", text));
}

DissimilarityMatrix dissimilarity_matrix(const Matrix& points, std::vector<std::string> ids, Metric metric) {
    const auto n = points.rows();
    if (n < 2) throw ParameterError("dissimilarity matrix needs at least two points");
    if (static_cast<Eigen::Index>(ids.size()) != n) throw ParameterError("id count does not match point count");
    DissimilarityMatrix d{std::move(ids), Matrix::Zero(n, n), metric};
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto diff = points.row(i) - points.row(j);
            const double v = metric == Metric::Euclidean ? diff.norm() : diff.cwiseAbs().sum();
            d.values(i, j) = v;
            d.values(j, i) = v;
        }
    }
    return d;
}

namespace {

struct Nearest {
    std::vector<double> first;         // distance to nearest medoid
    std::vector<std::size_t> owner;    // position in the medoid list
    std::vector<double> second;        // distance to second-nearest medoid
};

Nearest nearest_medoids(const DissimilarityMatrix& d, const std::vector<std::size_t>& medoids) {
    const auto n = d.size();
    Nearest nr{std::vector<double>(n), std::vector<std::size_t>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        double next = std::numeric_limits<double>::infinity();
        std::size_t owner = 0;
        for (std::size_t c = 0; c < medoids.size(); ++c) {
            const double v = d(i, medoids[c]);
            if (v < best) {
                next = best;
                best = v;
                owner = c;
            } else if (v < next) {
                next = v;
            }
        }
        nr.first[i] = best;
        nr.owner[i] = owner;
        nr.second[i] = next;
    }
    return nr;
}

std::vector<std::size_t> build_init(const DissimilarityMatrix& d, std::size_t k) {
    const auto n = d.size();
    std::vector<std::size_t> medoids;
    std::vector<bool> chosen(n, false);

    std::size_t first = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) total += d(i, j);
        if (total < best) {
            best = total;
            first = i;
        }
    }
    medoids.push_back(first);
    chosen[first] = true;
    std::vector<double> nearest(n);
    for (std::size_t j = 0; j < n; ++j) nearest[j] = d(j, first);

    while (medoids.size() < k) {
        std::size_t pick = n;
        double best_gain = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (chosen[i]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) gain += std::max(0.0, nearest[j] - d(j, i));
            if (gain > best_gain) {
                best_gain = gain;
                pick = i;
            }
        }
        medoids.push_back(pick);
        chosen[pick] = true;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], d(j, pick));
    }
    return medoids;
}

std::vector<std::size_t> random_init(std::size_t n, std::size_t k, std::uint64_t seed) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::mt19937_64 engine(seed);
    // Partial Fisher-Yates with an explicit draw so the sequence does not depend on the library's shuffle.
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(engine() % (n - i));
        std::swap(all[i], all[j]);
    }
    all.resize(k);
    return all;
}

double total_cost(const DissimilarityMatrix& d, const std::vector<std::size_t>& medoids) {
    const auto nr = nearest_medoids(d, medoids);
    double cost = 0.0;
    for (double v : nr.first) cost += v;
    return cost;
}

}  // namespace

ClusterSolution pam(const DissimilarityMatrix& d, std::size_t k, std::uint64_t seed, PamInit init) {
    const auto n = d.size();
    if (k == 0) throw ParameterError("k must be positive");
    if (k > n) throw ParameterError(fmt::format("k = {} exceeds the number of points ({})", k, n));

    std::vector<std::size_t> medoids = init == PamInit::Build ? build_init(d, k) : random_init(n, k, seed);
    std::vector<bool> is_medoid(n, false);
    for (auto m : medoids) is_medoid[m] = true;

    ClusterSolution sol;
    double cost = total_cost(d, medoids);
    sol.swap_costs.push_back(cost);

    for (;;) {
        const auto nr = nearest_medoids(d, medoids);
        double best_delta = 0.0;
        std::size_t best_slot = k;
        std::size_t best_candidate = n;
        for (std::size_t slot = 0; slot < k; ++slot) {
            for (std::size_t h = 0; h < n; ++h) {
                if (is_medoid[h]) continue;
                double delta = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double dh = d(j, h);
                    const double updated = nr.owner[j] == slot ? std::min(nr.second[j], dh) : std::min(nr.first[j], dh);
                    delta += updated - nr.first[j];
                }
                if (delta < best_delta) {
                    best_delta = delta;
                    best_slot = slot;
                    best_candidate = h;
                }
            }
        }
        if (best_slot == k) break;

        std::vector<std::size_t> trial = medoids;
        trial[best_slot] = best_candidate;
        const double trial_cost = total_cost(d, trial);
        // Delta bookkeeping can report a gain that is only rounding noise.
        if (!(trial_cost < cost)) break;
        is_medoid[medoids[best_slot]] = false;
        is_medoid[best_candidate] = true;
        medoids = std::move(trial);
        cost = trial_cost;
        sol.swap_costs.push_back(cost);
    }

    std::sort(medoids.begin(), medoids.end());
    sol.k = k;
    sol.medoids = medoids;
    sol.assignment.assign(n, 0);
    std::vector<std::size_t> own(n, k);
    for (std::size_t c = 0; c < k; ++c) own[medoids[c]] = c;
    const auto nr = nearest_medoids(d, medoids);
    sol.cost_z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sol.assignment[i] = own[i] < k ? own[i] : nr.owner[i];
        sol.cost_z += d(i, medoids[sol.assignment[i]]);
    }

    std::vector<bool> used(k, false);
    for (auto a : sol.assignment) used[a] = true;
    if (std::count(used.begin(), used.end(), true) >= 2) {
        auto s = silhouette(d, sol.assignment);
        sol.silhouettes = std::move(s.values);
        sol.mean_silhouette = s.mean;
    }
    return sol;
}

SilhouetteResult silhouette(const DissimilarityMatrix& d, const std::vector<std::size_t>& assignment) {
    const auto n = d.size();
    if (assignment.size() != n) throw ParameterError("assignment length does not match the dissimilarity matrix");
    const std::size_t k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
    std::vector<std::size_t> sizes(k, 0);
    for (auto a : assignment) ++sizes[a];
    if (std::count_if(sizes.begin(), sizes.end(), [](auto s) { return s > 0; }) < 2) throw UndefinedSilhouetteError();

    SilhouetteResult out;
    out.values.assign(n, 0.0);
    std::vector<double> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = assignment[i];
        if (sizes[own] == 1) continue;  // singleton: s = 0
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) sums[assignment[j]] += d(i, j);
        }
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own && sizes[c] > 0) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        }
        double s = 0.0;
        if (a < b) s = 1.0 - a / b;
        else if (a > b) s = b / a - 1.0;
        out.values[i] = s;
    }
    out.mean = std::accumulate(out.values.begin(), out.values.end(), 0.0) / static_cast<double>(n);
    return out;
}

KSelection select_k(const DissimilarityMatrix& d, std::size_t k_min, std::size_t k_max, std::uint64_t seed,
                    PamInit init, unsigned threads) {
    const auto n = d.size();
    if (k_min < 2 || k_min > k_max || k_max >= n) {
        throw ParameterError(fmt::format("k range must satisfy 2 <= k_min <= k_max < n (got {}..{}, n = {})", k_min, k_max, n));
    }
    const std::size_t count = k_max - k_min + 1;
    KSelection out;
    out.solutions.resize(count);
    std::vector<std::exception_ptr> errors(count);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < count; i += threads) {
                    try {
                        out.solutions[i] = pam(d, k_min + i, seed, init);
                        if (out.solutions[i].silhouettes.empty()) throw UndefinedSilhouetteError();
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : out.solutions) {
        out.table.push_back({s.k, s.mean_silhouette, s.cost_z});
        if (s.mean_silhouette > best) {
            best = s.mean_silhouette;
            out.best_k = s.k;
        }
    }
    return out;
}

void write_cluster_report(std::ostream& out, const DissimilarityMatrix& d, const ClusterSolution& solution) {
    TableWriter w(out);
    w.row({"soc_code", "cluster", "distance_to_medoid", "silhouette"});
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto c = solution.assignment[i];
        const double s = solution.silhouettes.empty() ? 0.0 : solution.silhouettes[i];
        w.row({d.ids[i], std::to_string(c + 1), format_number(d(i, solution.medoids[c])), format_number(s)});
    }
}

void write_medoid_table(std::ostream& out, const DissimilarityMatrix& d, const ClusterSolution& solution) {
    TableWriter w(out);
    w.row({"cluster", "medoid_soc_code"});
    for (std::size_t c = 0; c < solution.medoids.size(); ++c) w.row({std::to_string(c + 1), d.ids[solution.medoids[c]]});
}

void write_kscan_table(std::ostream& out, const std::vector<KScanRow>& table) {
    TableWriter w(out);
    w.row({"k", "mean_silhouette", "cost_z"});
    for (const auto& r : table) w.row({std::to_string(r.k), format_number(r.mean_silhouette), format_number(r.cost_z)});
}

ClusterSolution read_cluster_tables(std::istream& clusters, std::istream& medoids, const std::vector<std::string>& ids) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
    auto locate = [&](const std::string& code, std::size_t line) {
        const auto it = index.find(code);
        if (it == index.end()) throw ValidationError({{line, fmt::format("unknown occupation '{}'", code)}});
        return it->second;
    };
    auto cluster_id = [](const std::string& text, std::size_t line) {
        const auto v = parse_integer(text);
        if (!v || *v < 1) throw ValidationError({{line, fmt::format("bad cluster id '{}'", text)}});
        return static_cast<std::size_t>(*v - 1);
    };

    ClusterSolution sol;
    const Table mt = read_table(medoids);
    const auto mc = mt.require_column("cluster");
    const auto mm = mt.require_column("medoid_soc_code");
    sol.k = mt.rows.size();
    sol.medoids.assign(sol.k, 0);
    for (const auto& row : mt.rows) {
        const auto c = cluster_id(row.fields[mc], row.line);
        if (c >= sol.k) throw ValidationError({{row.line, "cluster id out of range"}});
        sol.medoids[c] = locate(row.fields[mm], row.line);
    }

    const Table ct = read_table(clusters);
    const auto cc = ct.require_column("soc_code");
    const auto ck = ct.require_column("cluster");
    const auto cd = ct.require_column("distance_to_medoid");
    const auto cs = ct.require_column("silhouette");
    if (ct.rows.size() != ids.size()) throw ValidationError("cluster report does not cover every occupation");
    sol.assignment.assign(ids.size(), 0);
    sol.silhouettes.assign(ids.size(), 0.0);
    for (const auto& row : ct.rows) {
        const auto i = locate(row.fields[cc], row.line);
        const auto c = cluster_id(row.fields[ck], row.line);
        if (c >= sol.k) throw ValidationError({{row.line, "cluster id out of range"}});
        sol.assignment[i] = c;
        sol.cost_z += parse_number(row.fields[cd]).value_or(0.0);
        sol.silhouettes[i] = parse_number(row.fields[cs]).value_or(0.0);
    }
    sol.mean_silhouette = std::accumulate(sol.silhouettes.begin(), sol.silhouettes.end(), 0.0) /
                          static_cast<double>(std::max<std::size_t>(1, ids.size()));
    return sol;
}

}  // namespace taskrisk
