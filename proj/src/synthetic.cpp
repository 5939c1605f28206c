#include "taskrisk/synthetic.hpp"

#include "taskrisk/corpus.hpp"
#include "taskrisk/error.hpp"
#include "taskrisk/table.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>

namespace taskrisk::synthetic {

namespace fs = std::filesystem;

namespace {

struct Normal {
    explicit Normal(std::uint64_t seed) : engine(seed) {}
    double operator()() { return dist(engine); }
    std::mt19937_64 engine;
    std::normal_distribution<double> dist{0.0, 1.0};
};

std::ofstream create(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PathError(path.string(), "cannot write");
    return out;
}

}  // namespace

Matrix noise(std::size_t n, std::size_t p, std::uint64_t seed) {
    Normal z(seed);
    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = z();
    }
    return x;
}

Matrix planted_two_factor(std::size_t n, std::size_t p, std::uint64_t seed) {
    Normal z(seed);
    constexpr double loading = 0.8;
    const double unique = std::sqrt(1.0 - loading * loading);
    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double f1 = z();
        const double f2 = z();
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            const double f = static_cast<std::size_t>(j) < p / 2 ? f1 : f2;
            x(i, j) = loading * f + unique * z();
        }
    }
    return x;
}

Matrix blobs(const std::vector<std::vector<double>>& centers, std::size_t per_blob, double spread, std::uint64_t seed) {
    Normal z(seed);
    const auto dim = static_cast<Eigen::Index>(centers.front().size());
    Matrix x(static_cast<Eigen::Index>(centers.size() * per_blob), dim);
    Eigen::Index row = 0;
    for (const auto& c : centers) {
        for (std::size_t k = 0; k < per_blob; ++k, ++row) {
            for (Eigen::Index j = 0; j < dim; ++j) x(row, j) = c[static_cast<std::size_t>(j)] + spread * z();
        }
    }
    return x;
}

CompositeFixture write_composite_fixture(const fs::path& dir, std::uint64_t seed) {
    fs::create_directories(dir);
    CompositeFixture fx;
    fx.dir = dir;

    // Latent (hazard, bottleneck) cluster centers; the first cluster is the hazard-high one.
    const std::array<std::array<double, 2>, 3> centers{{{2.4, -1.2}, {-0.2, 1.6}, {-2.2, 0.8}}};
    const std::array<int, 3> major_group{47, 29, 43};
    const std::array<const char*, 3> family{"Hazard crew", "Care specialist", "Office analyst"};
    constexpr std::size_t per_cluster = 60;
    constexpr double within = 0.35;
    constexpr std::size_t items = 8;
    constexpr double hazard_loading = 0.9;
    constexpr double bottleneck_loading = 0.85;

    Normal z(seed);
    struct Occupation {
        std::string code;
        std::size_t cluster;
        std::array<double, 2> latent;
    };
    std::vector<Occupation> occupations;
    for (std::size_t c = 0; c < centers.size(); ++c) {
        for (std::size_t k = 0; k < per_cluster; ++k) {
            const auto code = fmt::format("{:02d}-{:04d}.00", major_group[c], 1000 + 10 * k);
            occupations.push_back({code, c, {centers[c][0] + within * z(), centers[c][1] + within * z()}});
        }
    }
    // Standardize the latent scores so the loadings describe correlations.
    for (std::size_t f = 0; f < 2; ++f) {
        double mean = 0, sq = 0;
        for (const auto& o : occupations) mean += o.latent[f];
        mean /= static_cast<double>(occupations.size());
        for (const auto& o : occupations) sq += (o.latent[f] - mean) * (o.latent[f] - mean);
        const double sd = std::sqrt(sq / static_cast<double>(occupations.size() - 1));
        for (auto& o : occupations) o.latent[f] = (o.latent[f] - mean) / sd;
    }

    {
        auto out = create(dir / "catalog.csv");
        TableWriter w(out);
        w.row({"attribute_id", "category", "label"});
        for (std::size_t j = 0; j < items; ++j) w.row({fmt::format("HZ.{}", j + 1), "hazard", fmt::format("Hazard item {}", j + 1)});
        for (std::size_t j = 0; j < items; ++j) w.row({fmt::format("BN.{}", j + 1), "bottleneck", fmt::format("Bottleneck item {}", j + 1)});
    }

    {
        auto out = create(dir / "attributes.csv");
        TableWriter w(out);
        w.row({"soc_code", "attribute_id", "importance"});
        auto emit = [&](const std::string& code, const std::string& attr, double value) {
            w.row({code, attr, fmt::format("{:.2f}", std::clamp(value, 0.0, 100.0))});
        };
        for (const auto& o : occupations) {
            for (std::size_t f = 0; f < 2; ++f) {
                const double loading = f == 0 ? hazard_loading : bottleneck_loading;
                const double unique = std::sqrt(1.0 - loading * loading);
                for (std::size_t j = 0; j < items; ++j) {
                    const auto attr = fmt::format("{}.{}", f == 0 ? "HZ" : "BN", j + 1);
                    emit(o.code, attr, 50.0 + 12.0 * (loading * o.latent[f] + unique * z()));
                }
            }
            if (o.cluster == 0) fx.planted_vulnerable.push_back(o.code);
        }
        // Incomplete occupations: listwise deletion drops them at ingest.
        for (const char* code : {"51-9999.00", "53-9999.00"}) {
            for (std::size_t j = 0; j + 1 < items; ++j) emit(code, fmt::format("HZ.{}", j + 1), 40.0 + 3.0 * static_cast<double>(j));
            fx.dropped.emplace_back(code);
        }
        // Attributes outside the catalog are ignored.
        emit(occupations.front().code, "XX.unused", 12.0);
    }
    fx.occupations = occupations.size();

    {
        auto out = create(dir / "employment.csv");
        TableWriter w(out);
        w.row({"soc_code", "year", "employment"});
        for (std::size_t i = 0; i < occupations.size(); ++i) {
            const auto& o = occupations[i];
            const double rate = o.cluster == 0 ? fx.vulnerable_growth : fx.other_growth;
            // One occupation per cluster misses a year and is excluded from the trend comparison.
            const bool gap = i % per_cluster == per_cluster - 1;
            if (gap) fx.trend_excluded.push_back(o.code);
            double level = 1000.0 + 25.0 * static_cast<double>(i);
            for (int year = 2010; year <= 2018; ++year) {
                if (!(gap && year == 2014)) w.row({o.code.substr(0, 7), std::to_string(year), format_number(level)});
                level *= 1.0 + rate;
            }
        }
    }

    {
        auto out = create(dir / "titles.csv");
        TableWriter w(out);
        w.row({"soc_code", "title"});
        for (std::size_t i = 0; i < occupations.size(); ++i) {
            w.row({occupations[i].code, fmt::format("{} {}", family[occupations[i].cluster], i % per_cluster + 1)});
        }
    }

    fx.config = dir / "config.json";
    {
        auto out = create(fx.config);
        out << R"({
  "schema_version": 1,
  "inputs": {
    "attributes": ["attributes.csv"],
    "employment": "employment.csv",
    "catalog": "catalog.csv",
    "titles": "titles.csv"
  },
  "standardize": true,
  "parallel_analysis": { "replicates": 100, "quantile": 0.95, "seed": 42 },
  "factors": { "count": "auto", "rotate": true, "labels": ["Hazard", "Bottleneck"] },
  "clustering": { "metric": "euclidean", "k": "auto", "k_min": 2, "k_max": 6 },
  "criteria": [
    { "factor": "Hazard", "direction": "top", "fraction": 0.2, "label": "hazard-top-20%" },
    { "factor": "Bottleneck", "direction": "bottom", "fraction": 0.2, "label": "bottleneck-bottom-20%" }
  ],
  "cluster_labeling": {
    "susceptible_factors": ["Hazard"],
    "bottleneck_factors": ["Bottleneck"],
    "threshold_sd": 0.5
  },
  "trends": { "start_year": 2010, "end_year": 2018 },
  "output_dir": "out"
}
)";
    }
    return fx;
}

fs::path write_large_fixture(const fs::path& dir, std::uint64_t seed) {
    fs::create_directories(dir);
    constexpr std::size_t factors = 7;
    constexpr std::size_t blobs_count = 8;
    constexpr std::size_t per_blob = 50;
    constexpr double loading = 0.75;
    const std::array<int, blobs_count> major_group{11, 13, 15, 29, 33, 45, 47, 51};

    Normal z(seed);
    std::vector<std::array<double, factors>> centers(blobs_count);
    for (auto& c : centers) {
        for (auto& v : c) v = 1.2 * z();
    }
    std::vector<double> growth(blobs_count);
    for (std::size_t b = 0; b < blobs_count; ++b) growth[b] = 0.005 + 0.025 * static_cast<double>(b) / (blobs_count - 1);

    const auto catalog = default_catalog();
    const auto attributes = catalog.attribute_ids();
    const double unique = std::sqrt(1.0 - loading * loading);
    {
        auto attr_out = create(dir / "attributes.csv");
        auto emp_out = create(dir / "employment.csv");
        auto title_out = create(dir / "titles.csv");
        TableWriter attr(attr_out), emp(emp_out), title(title_out);
        attr.row({"soc_code", "attribute_id", "importance"});
        emp.row({"soc_code", "year", "employment"});
        title.row({"soc_code", "title"});
        for (std::size_t b = 0; b < blobs_count; ++b) {
            for (std::size_t k = 0; k < per_blob; ++k) {
                const auto code = fmt::format("{:02d}-{:04d}.00", major_group[b], 2000 + 13 * k);
                std::array<double, factors> latent{};
                for (std::size_t f = 0; f < factors; ++f) latent[f] = centers[b][f] + 0.6 * z();
                for (std::size_t j = 0; j < attributes.size(); ++j) {
                    const double v = 50.0 + 10.0 * (loading * latent[j % factors] + unique * z());
                    attr.row({code, attributes[j], fmt::format("{:.2f}", std::clamp(v, 0.0, 100.0))});
                }
                double level = 500.0 + 40.0 * static_cast<double>(k);
                for (int year = 2010; year <= 2018; ++year) {
                    emp.row({code.substr(0, 7), std::to_string(year), format_number(std::round(level))});
                    level *= 1.0 + growth[b];
                }
                title.row({code, fmt::format("Synthetic occupation {}-{}", b + 1, k + 1)});
            }
        }
    }

    const auto config = dir / "config.json";
    auto out = create(config);
    out << R"({
  "schema_version": 1,
  "inputs": {
    "attributes": "attributes.csv",
    "employment": "employment.csv",
    "titles": "titles.csv"
  },
  "standardize": true,
  "parallel_analysis": { "replicates": 100, "quantile": 0.95, "seed": 2018 },
  "factors": {
    "count": 7,
    "rotate": true,
    "labels": ["Problem-solving", "Negotiation", "Hazard", "Empathy", "Artistic", "Coordination", "Dexterity"]
  },
  "clustering": { "metric": "euclidean", "k": 7, "k_min": 2, "k_max": 12 },
  "criteria": [
    { "factor": "Hazard", "direction": "top", "fraction": 0.2, "label": "hazard-top-20%" },
    { "factor": "Problem-solving", "direction": "bottom", "fraction": 0.2, "label": "problem-solving-bottom-20%" },
    { "factor": "Dexterity", "direction": "top", "fraction": 0.2, "label": "dexterity-top-20%" }
  ],
  "cluster_labeling": {
    "susceptible_factors": ["Hazard", "Dexterity"],
    "bottleneck_factors": ["Problem-solving", "Negotiation", "Empathy", "Artistic", "Coordination"],
    "threshold_sd": 0.5
  },
  "trends": { "start_year": 2010, "end_year": 2018 },
  "output_dir": "out"
}
)";
    return config;
}

}  // namespace taskrisk::synthetic
