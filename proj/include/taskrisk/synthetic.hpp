#pragma once

// Synthetic data with planted structure, used by the test suites and the fixture tool.

#include "taskrisk/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace taskrisk::synthetic {

/// n x p matrix with exactly two planted factors: the first half of the columns load
/// 0.8 on factor one, the rest 0.8 on factor two; factors are independent N(0,1).
Matrix planted_two_factor(std::size_t n, std::size_t p, std::uint64_t seed);

/// n x p standard-normal noise.
Matrix noise(std::size_t n, std::size_t p, std::uint64_t seed);

/// Well-separated Gaussian blobs (sd `spread`) around the given centers, `per_blob`
/// points each, blob b occupying rows [b * per_blob, (b + 1) * per_blob).
Matrix blobs(const std::vector<std::vector<double>>& centers, std::size_t per_blob, double spread, std::uint64_t seed);

struct CompositeFixture {
    std::filesystem::path dir;
    std::filesystem::path config;
    std::vector<std::string> planted_vulnerable;  // soc codes of the hazard-high cluster
    std::vector<std::string> dropped;             // codes missing an attribute
    std::vector<std::string> trend_excluded;      // codes missing an employment year
    std::size_t occupations = 0;                  // complete occupations
    double vulnerable_growth = 0.01;
    double other_growth = 0.02;
};

/// Writes attributes.csv, catalog.csv, employment.csv, titles.csv and config.json into `dir`:
/// 180 occupations in 3 planted clusters over 2 planted factors (hazard, bottleneck), where
/// the hazard-high cluster grows 1% a year and the others 2% a year over 2010-2018.
CompositeFixture write_composite_fixture(const std::filesystem::path& dir, std::uint64_t seed = 20240601);

/// Large synthetic corpus over the 45-attribute default catalog: 7 planted factors,
/// 8 occupation blobs, 2010-2018 employment. Writes attributes.csv, employment.csv, titles.csv
/// and config.json (m = 7, k = 7, three 20% criteria); the catalog is the built-in default.
std::filesystem::path write_large_fixture(const std::filesystem::path& dir, std::uint64_t seed = 7);

}  // namespace taskrisk::synthetic
