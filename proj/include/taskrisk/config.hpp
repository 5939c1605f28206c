#pragma once

// Pipeline configuration: a JSON document with a versioned schema. Unknown keys are errors.

#include "taskrisk/clustering.hpp"
#include "taskrisk/trends.hpp"
#include "taskrisk/vulnerability.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace taskrisk {

inline constexpr int kConfigSchemaVersion = 1;

/// A factor named by 1-based position or by label.
using FactorRef = std::variant<std::size_t, std::string>;

struct CriterionConfig {
    FactorRef factor;
    Direction direction = Direction::Top;
    double fraction = 0.20;
    std::string label;
};

struct PipelineConfig {
    // inputs; relative paths resolve against base_dir
    std::vector<std::filesystem::path> attribute_files;
    char attribute_delimiter = ',';
    std::filesystem::path employment_file;
    char employment_delimiter = ',';
    std::optional<std::filesystem::path> catalog_file;  // default catalog when absent
    std::optional<std::filesystem::path> titles_file;   // soc_code,title for vulnerable_list.csv
    std::filesystem::path base_dir;

    bool standardize = true;

    int pa_replicates = 100;
    double pa_quantile = 0.95;
    std::optional<std::uint64_t> pa_seed;

    std::optional<std::size_t> factor_count;  // nullopt = parallel-analysis suggestion
    bool rotate = true;
    bool kaiser_normalize = false;
    double paf_tol = 1e-6;
    int paf_max_iter = 200;
    std::vector<std::string> factor_labels;  // empty = defaults
    std::string score_method = "regression";

    Metric metric = Metric::Euclidean;
    std::optional<std::size_t> k;  // nullopt = silhouette scan
    std::size_t k_min = 2;
    std::size_t k_max = 12;
    PamInit init = PamInit::Build;
    std::optional<std::uint64_t> cluster_seed;

    std::vector<CriterionConfig> criteria;

    std::vector<FactorRef> susceptible_factors;
    std::vector<FactorRef> bottleneck_factors;
    double threshold_sd = 0.5;

    YearRange years{2010, 2018};
    std::vector<Subgroup> subgroups;

    std::filesystem::path output_dir = "out";

    std::filesystem::path resolve(const std::filesystem::path& p) const { return p.is_absolute() ? p : base_dir / p; }
};

/// Parses and validates a config document; `base_dir` anchors relative paths.
PipelineConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

/// Normalized snapshot of the config (defaults filled in, output directory omitted).
nlohmann::json config_snapshot(const PipelineConfig& config);

/// Resolves a factor reference against factor labels; throws ConfigError when unknown.
std::size_t resolve_factor(const FactorRef& ref, const std::vector<std::string>& labels);

}  // namespace taskrisk
