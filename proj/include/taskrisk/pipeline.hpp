#pragma once

// Stage orchestration: ingest -> adequacy -> factors -> cluster -> classify -> trends -> plot,
// each stage writing its tables into the output directory.

#include "taskrisk/adequacy.hpp"
#include "taskrisk/clustering.hpp"
#include "taskrisk/config.hpp"
#include "taskrisk/corpus.hpp"
#include "taskrisk/error.hpp"
#include "taskrisk/factors.hpp"
#include "taskrisk/trends.hpp"
#include "taskrisk/vulnerability.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taskrisk {

inline constexpr const char* kVersion = "0.1.0";

enum class Stage { Ingest, Adequacy, Factors, Cluster, Classify, Trends, Plot };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view name);

/// Wraps a stage failure; keeps the underlying error class for exit-code mapping.
class StageError : public Error {
public:
    StageError(Stage stage, const Error& cause);
    Stage stage() const noexcept { return stage_; }

private:
    Stage stage_;
};

struct RunOptions {
    std::optional<std::filesystem::path> out_dir;  // overrides config.output_dir
    std::optional<std::uint64_t> seed;             // overrides every configured seed
    bool record_timings = false;                   // timings make the manifest run-dependent
    unsigned threads = 0;
};

struct RunResult {
    std::filesystem::path out_dir;
    BuildResult corpus;
    OccupationMatrix analysis_matrix;
    CorrelationMatrix correlation;
    AdequacyResult adequacy;
    ParallelAnalysisResult parallel;
    FactorSolution factors;
    DissimilarityMatrix dissimilarity;
    KSelection scan;
    ClusterSolution clusters;
    CriteriaFlags flags;
    VulnerabilityReport vulnerability;
    TrendReport trends;
    nlohmann::json manifest;
    std::vector<std::string> warnings;
};

/// Full pipeline with fail-fast semantics. Inputs are checked before anything is written.
/// On a stage failure the manifest is still written, marked partial, and StageError is thrown.
RunResult run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

/// Runs a single stage, reading earlier stages' tables from the output directory.
void run_stage(const PipelineConfig& config, Stage stage, const RunOptions& options = {});

}  // namespace taskrisk
