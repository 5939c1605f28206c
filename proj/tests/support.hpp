#pragma once

// Shared helpers for the test binaries: scratch directories and independent oracles.

#include "taskrisk/clustering.hpp"
#include "taskrisk/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace testing {

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("taskrisk-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Exhaustive k-medoid optimum: min over all k-subsets of sum_i min_{m in subset} d(i, m).
inline double brute_force_medoid_cost(const taskrisk::DissimilarityMatrix& d, std::size_t k) {
    const std::size_t n = d.size();
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < n; ++m) {
                if (pick[m]) nearest = std::min(nearest, d(i, m));
            }
            cost += nearest;
        }
        best = std::min(best, cost);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

// Lowest cost reachable from `medoids` by replacing one medoid with one non-medoid (or staying put).
inline double best_single_swap_cost(const taskrisk::DissimilarityMatrix& d, const std::vector<std::size_t>& medoids) {
    auto cost = [&](const std::vector<std::size_t>& set) {
        double total = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (auto m : set) nearest = std::min(nearest, d(i, m));
            total += nearest;
        }
        return total;
    };
    double best = cost(medoids);
    for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
        for (std::size_t h = 0; h < d.size(); ++h) {
            if (std::find(medoids.begin(), medoids.end(), h) != medoids.end()) continue;
            auto trial = medoids;
            trial[slot] = h;
            best = std::min(best, cost(trial));
        }
    }
    return best;
}

// Direct silhouette definition: s = (b - a) / max(a, b), singleton -> 0.
inline std::vector<double> silhouette_oracle(const taskrisk::DissimilarityMatrix& d, const std::vector<std::size_t>& label) {
    const std::size_t n = d.size();
    const std::size_t k = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> sum(k, 0.0);
        std::vector<std::size_t> cnt(k, 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sum[label[j]] += d(i, j);
            ++cnt[label[j]];
        }
        if (cnt[label[i]] == 0) continue;
        const double a = sum[label[i]] / static_cast<double>(cnt[label[i]]);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != label[i] && cnt[c] > 0) b = std::min(b, sum[c] / static_cast<double>(cnt[c]));
        }
        s[i] = (b - a) / std::max(a, b);
    }
    return s;
}

// Closed-form inverse of an equicorrelated matrix (1 on the diagonal, r elsewhere).
inline taskrisk::Matrix equicorrelated_inverse(std::size_t p, double r) {
    const double pd = static_cast<double>(p);
    const double diag = (1.0 + (pd - 2.0) * r) / ((1.0 - r) * (1.0 + (pd - 1.0) * r));
    const double off = -r / ((1.0 - r) * (1.0 + (pd - 1.0) * r));
    taskrisk::Matrix m = taskrisk::Matrix::Constant(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p), off);
    m.diagonal().setConstant(diag);
    return m;
}

inline taskrisk::Matrix equicorrelated(std::size_t p, double r) {
    taskrisk::Matrix m = taskrisk::Matrix::Constant(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p), r);
    m.diagonal().setOnes();
    return m;
}

inline taskrisk::OccupationMatrix as_occupations(const taskrisk::Matrix& values) {
    taskrisk::OccupationMatrix m;
    for (Eigen::Index i = 0; i < values.rows(); ++i) m.occupation_ids.push_back("11-" + std::to_string(1000 + i));
    for (Eigen::Index j = 0; j < values.cols(); ++j) m.attribute_ids.push_back("A" + std::to_string(j + 1));
    m.values = values;
    return m;
}

inline std::vector<std::string> numbered_ids(std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    return ids;
}

}  // namespace testing
