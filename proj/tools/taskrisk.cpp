// taskrisk: command-line front end for the occupational task-risk pipeline.

#include "taskrisk/config.hpp"
#include "taskrisk/error.hpp"
#include "taskrisk/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kNumeric = 3;

int exit_code(const taskrisk::Error& e) {
    return e.error_class() == taskrisk::ErrorClass::Numeric ? kNumeric : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Occupational task-risk pipeline"};
    app.set_version_flag("--version", std::string(taskrisk::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    bool timings = false;

    const char* subcommands[][2] = {
        {"ingest", "parse attribute and employment files into the occupation matrix"},
        {"adequacy", "Bartlett sphericity and KMO sampling adequacy"},
        {"factors", "parallel analysis, principal-axis extraction, varimax, factor scores"},
        {"cluster", "PAM k-medoids over factor scores with silhouette k selection"},
        {"classify", "quantile susceptibility flags and vulnerable cluster labeling"},
        {"trends", "employment growth comparison between vulnerable and other occupations"},
        {"run", "full pipeline with manifest"},
        {"plot", "render scree and k-scan plots from emitted tables"},
    };
    for (const auto& [name, help] : subcommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "pipeline config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        sub->add_option("--seed", seed, "seed overriding every configured seed");
        sub->add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
        if (std::string(name) == "run") sub->add_flag("--timings", timings, "record stage timings in the manifest");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    const auto* chosen = app.get_subcommands().front();
    taskrisk::RunOptions options;
    if (!out_dir.empty()) options.out_dir = out_dir;
    options.seed = seed;
    options.threads = threads;
    options.record_timings = timings;

    try {
        const auto config = taskrisk::load_config(config_path);
        if (chosen->get_name() == "run") {
            const auto result = taskrisk::run_pipeline(config, options);
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << fmt::format("wrote bundle to {} (bundle sha256 {})\n", result.out_dir.string(),
                                     result.manifest.value("bundle_sha256", std::string()));
        } else {
            taskrisk::run_stage(config, taskrisk::parse_stage(chosen->get_name()), options);
        }
    } catch (const taskrisk::Error& e) {
        std::cerr << "taskrisk: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "taskrisk: " << e.what() << '\n';
        return kValidation;
    }
    return kOk;
}
