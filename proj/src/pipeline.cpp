#include "taskrisk/pipeline.hpp"

#include "taskrisk/digest.hpp"
#include "taskrisk/plot.hpp"
#include "taskrisk/table.hpp"

#include <Eigen/Core>
#include <fmt/format.h>

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace taskrisk {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr std::array kStages{Stage::Ingest, Stage::Adequacy, Stage::Factors, Stage::Cluster,
                             Stage::Classify, Stage::Trends, Stage::Plot};

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PathError(path.string());
    return in;
}

class Runner {
public:
    Runner(const PipelineConfig& config, const RunOptions& options) : config_(config), options_(options) {
        if (options.seed) {
            config_.pa_seed = *options.seed;
            config_.cluster_seed = *options.seed;
        }
        result_.out_dir = options.out_dir ? *options.out_dir : config_.resolve(config_.output_dir);
    }

    void check_inputs() const {
        for (const auto& p : input_paths()) {
            const auto full = config_.resolve(p.second);
            if (!fs::is_regular_file(full)) throw PathError(full.string(), "input file not found");
        }
    }

    void prepare_output() {
        std::error_code ec;
        fs::create_directories(result_.out_dir, ec);
        if (ec) throw PathError(result_.out_dir.string(), "cannot create output directory");
    }

    void run(Stage stage) {
        switch (stage) {
            case Stage::Ingest: ingest(); break;
            case Stage::Adequacy: adequacy(); break;
            case Stage::Factors: factors(); break;
            case Stage::Cluster: cluster(); break;
            case Stage::Classify: classify(); break;
            case Stage::Trends: trends(); break;
            case Stage::Plot: plot(); break;
        }
    }

    void run_all() {
        for (auto stage : kStages) {
            const auto start = std::chrono::steady_clock::now();
            try {
                run(stage);
            } catch (const Error& e) {
                stages_.push_back({{"name", to_string(stage)}, {"status", "failed"}, {"error", e.what()}});
                write_manifest(false, stage);
                throw StageError(stage, e);
            }
            const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            json entry{{"name", to_string(stage)}, {"status", "ok"}};
            if (options_.record_timings) entry["elapsed_ms"] = ms;
            stages_.push_back(std::move(entry));
        }
        write_manifest(true, std::nullopt);
    }

    RunResult& result() { return result_; }

private:
    std::vector<std::pair<std::string, fs::path>> input_paths() const {
        std::vector<std::pair<std::string, fs::path>> out;
        for (const auto& a : config_.attribute_files) out.emplace_back("attributes", a);
        out.emplace_back("employment", config_.employment_file);
        if (config_.catalog_file) out.emplace_back("catalog", *config_.catalog_file);
        if (config_.titles_file) out.emplace_back("titles", *config_.titles_file);
        return out;
    }

    fs::path out(const std::string& name) const { return result_.out_dir / name; }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        std::ofstream f(out(name), std::ios::binary);
        if (!f) throw PathError(out(name).string(), "cannot write");
        body(f);
        f.flush();
        if (!f) throw PathError(out(name).string(), "write failed");
        written_.insert(name);
    }

    void warn(std::string message) {
        result_.warnings.push_back(std::move(message));
    }

    // -- stages -------------------------------------------------------------------------------

    void ingest() {
        auto& r = result_;
        std::vector<AttributeObservation> observations;
        const TableFormat attr_format{config_.attribute_delimiter};
        for (const auto& file : config_.attribute_files) {
            auto in = open_input(config_.resolve(file));
            auto part = parse_attribute_file(in, attr_format);
            observations.insert(observations.end(), part.begin(), part.end());
        }
        AttributeCatalog catalog = default_catalog();
        if (config_.catalog_file) {
            auto in = open_input(config_.resolve(*config_.catalog_file));
            catalog = parse_catalog_file(in);
        }
        employment_ = load_employment();

        r.corpus = build_matrix(observations, catalog);
        if (!r.corpus.dropped.empty()) {
            warn(fmt::format("{} occupations dropped for missing attributes", r.corpus.dropped.size()));
        }
        if (config_.standardize) {
            r.analysis_matrix = standardize(r.corpus.matrix);
        } else {
            r.analysis_matrix = r.corpus.matrix;
            r.analysis_matrix.standardized = true;
        }
        write("matrix.csv", [&](auto& o) { write_matrix(o, r.analysis_matrix); });
        write("drop_report.csv", [&](auto& o) { write_drop_report(o, r.corpus.dropped); });
        write("catalog.csv", [&](auto& o) { write_catalog(o, catalog); });
    }

    EmploymentSeries load_employment() const {
        auto in = open_input(config_.resolve(config_.employment_file));
        return parse_employment_file(in, TableFormat{config_.employment_delimiter});
    }

    void need_matrix() {
        if (result_.analysis_matrix.values.size() > 0) return;
        auto in = open_input(out("matrix.csv"));
        result_.analysis_matrix = read_matrix(in, true);
    }

    void need_correlation() {
        need_matrix();
        if (result_.correlation.size() == 0) result_.correlation = correlation(result_.analysis_matrix);
    }

    void adequacy() {
        need_correlation();
        auto& r = result_;
        r.adequacy = assess_adequacy(r.correlation, r.analysis_matrix.rows());
        for (const auto& w : r.adequacy.warnings) warn(w);
        write("adequacy.txt", [&](auto& o) { write_adequacy_report(o, r.adequacy); });
    }

    void factors() {
        need_correlation();
        auto& r = result_;
        const auto p = r.analysis_matrix.cols();
        r.parallel = parallel_analysis(r.analysis_matrix, config_.pa_replicates, config_.pa_quantile, *config_.pa_seed,
                                       options_.threads);
        std::size_t m = config_.factor_count.value_or(r.parallel.suggested_factors);
        if (m < 1 || m >= p) {
            const std::size_t adjusted = std::clamp<std::size_t>(m, 1, p - 1);
            warn(fmt::format("factor count {} adjusted to {}", m, adjusted));
            m = adjusted;
        }
        r.factors = extract_paf(r.correlation, m, config_.paf_tol, config_.paf_max_iter);
        if (config_.rotate) r.factors = rotate_varimax(r.factors, 1e-10, 1000, config_.kaiser_normalize);
        r.factors.fit = fit_indices(r.correlation, r.factors, r.analysis_matrix.rows());
        r.factors.scores = factor_scores(r.analysis_matrix, r.correlation, r.factors);
        auto labels = config_.factor_labels.empty() ? default_factor_labels(m) : config_.factor_labels;
        if (labels.size() != m) {
            warn(fmt::format("{} factor labels configured for {} factors", labels.size(), m));
            labels.resize(std::min(labels.size(), m));
            while (labels.size() < m) labels.push_back(fmt::format("unnamed-{}", labels.size() + 1));
        }
        r.factors.factor_labels = labels;
        for (const auto& w : r.factors.warnings) warn(w);

        write("scree.csv", [&](auto& o) { write_scree_table(o, r.parallel); });
        write("loadings.csv", [&](auto& o) { write_loadings_table(o, r.factors); });
        write("scores.csv", [&](auto& o) { write_scores_table(o, r.analysis_matrix.occupation_ids, r.factors); });
        write("factors.txt", [&](auto& o) { write_factor_summary(o, r.factors, &r.parallel); });
    }

    void need_scores() {
        auto& r = result_;
        if (r.factors.scores.size() > 0) return;
        auto in = open_input(out("scores.csv"));
        auto table = read_scores_table(in);
        r.analysis_matrix.occupation_ids = table.occupation_ids;
        r.factors.factor_labels = table.factor_labels;
        r.factors.scores = std::move(table.scores);
    }

    void cluster() {
        need_scores();
        auto& r = result_;
        const auto n = r.analysis_matrix.occupation_ids.size();
        r.dissimilarity = dissimilarity_matrix(r.factors.scores, r.analysis_matrix.occupation_ids, config_.metric);
        const std::uint64_t seed = config_.cluster_seed.value_or(0);
        const std::size_t k_max = std::min(config_.k_max, n - 1);
        if (k_max < config_.k_min) throw ParameterError(fmt::format("too few occupations ({}) for the k range", n));
        if (k_max < config_.k_max) warn(fmt::format("k_max reduced to {}", k_max));
        r.scan = select_k(r.dissimilarity, config_.k_min, k_max, seed, config_.init, options_.threads);
        if (config_.k) {
            if (*config_.k >= n) throw ParameterError(fmt::format("k = {} needs more than {} occupations", *config_.k, n));
            r.clusters = pam(r.dissimilarity, *config_.k, seed, config_.init);
        } else {
            const auto idx = r.scan.best_k - config_.k_min;
            r.clusters = r.scan.solutions[idx];
        }
        write("kscan.csv", [&](auto& o) { write_kscan_table(o, r.scan.table); });
        write("clusters.csv", [&](auto& o) { write_cluster_report(o, r.dissimilarity, r.clusters); });
        write("medoids.csv", [&](auto& o) { write_medoid_table(o, r.dissimilarity, r.clusters); });
    }

    void need_clusters() {
        auto& r = result_;
        if (!r.clusters.assignment.empty()) return;
        auto c = open_input(out("clusters.csv"));
        auto m = open_input(out("medoids.csv"));
        r.clusters = read_cluster_tables(c, m, r.analysis_matrix.occupation_ids);
    }

    void classify() {
        need_scores();
        need_clusters();
        auto& r = result_;
        const auto& labels = r.factors.factor_labels;
        std::vector<SusceptibilityCriterion> criteria;
        for (const auto& c : config_.criteria) {
            criteria.push_back({resolve_factor(c.factor, labels), c.direction, c.fraction, c.label});
        }
        r.flags = score_criteria(r.factors.scores, criteria);
        for (const auto& t : r.flags.ties) warn(fmt::format("tie at the quantile cutoff for '{}'", t));
        std::set<std::size_t> susceptible, bottleneck;
        for (const auto& f : config_.susceptible_factors) susceptible.insert(resolve_factor(f, labels));
        for (const auto& f : config_.bottleneck_factors) bottleneck.insert(resolve_factor(f, labels));
        const auto vulnerable = label_clusters(r.clusters, r.factors.scores, susceptible, bottleneck, config_.threshold_sd);
        r.vulnerability = vulnerable_list(r.analysis_matrix.occupation_ids, r.clusters, criteria, r.flags, vulnerable,
                                          config_.threshold_sd);

        std::map<std::string, std::string> titles;
        if (config_.titles_file) {
            auto in = open_input(config_.resolve(*config_.titles_file));
            const auto t = read_table(in);
            const auto cc = t.require_column("soc_code");
            const auto ct = t.require_column("title");
            for (const auto& row : t.rows) titles[row.fields[cc]] = row.fields[ct];
        }
        write("vulnerability.csv", [&](auto& o) { write_vulnerability_table(o, r.vulnerability); });
        write("vulnerability_summary.txt", [&](auto& o) { write_vulnerability_summary(o, r.vulnerability); });
        write("vulnerable_list.csv", [&](auto& o) { write_vulnerable_list(o, r.vulnerability, titles); });
    }

    void trends() {
        auto& r = result_;
        if (r.vulnerability.occupation_ids.empty()) {
            auto in = open_input(out("vulnerability.csv"));
            r.vulnerability = read_vulnerability_table(in);
        }
        if (!employment_) employment_ = load_employment();
        r.trends = compare_groups(*employment_, r.vulnerability, config_.years, config_.subgroups);
        for (const auto& e : r.trends.excluded) warn(fmt::format("trend exclusion {}: {}", e.soc_code, e.reason));
        write("trends.csv", [&](auto& o) { write_trend_table(o, r.trends); });
        write("trend_groups.csv", [&](auto& o) { write_trend_groups(o, r.trends); });
        write("trends.txt", [&](auto& o) { write_trend_summary(o, r.trends); });
    }

    void plot() {
        const auto scree = read_plot_table(out("scree.csv"));
        emit_plot(scree, PlotKind::Scree, out("scree.svg"));
        written_.insert("scree.svg");
        const auto kscan = read_plot_table(out("kscan.csv"));
        emit_plot(kscan, PlotKind::SilhouetteScan, out("kscan.svg"));
        written_.insert("kscan.svg");
    }

    void write_manifest(bool complete, std::optional<Stage> failed) {
        json inputs = json::array();
        for (const auto& [role, path] : input_paths()) {
            const auto full = config_.resolve(path);
            inputs.push_back({{"role", role}, {"path", path.generic_string()}, {"sha256", sha256_file(full)}});
        }
        json outputs = json::object();
        std::string combined;
        for (const auto& name : written_) {
            const auto digest = sha256_file(out(name));
            outputs[name] = digest;
            combined += name + ':' + digest + '\n';
        }
        json manifest{
            {"schema_version", 1},
            {"versions",
             {{"taskrisk", kVersion},
              {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)}}},
            {"status", complete ? "complete" : "failed"},
            {"partial", !complete},
            {"config", config_snapshot(config_)},
            {"inputs", inputs},
            {"stages", stages_},
            {"outputs", outputs},
            {"bundle_sha256", sha256_hex(combined)},
            {"warnings", result_.warnings},
        };
        if (failed) manifest["failed_stage"] = to_string(*failed);
        result_.manifest = manifest;
        std::ofstream f(out("manifest.json"), std::ios::binary);
        if (!f) throw PathError(out("manifest.json").string(), "cannot write");
        f << manifest.dump(2) << '\n';
    }

    PipelineConfig config_;
    RunOptions options_;
    RunResult result_;
    std::optional<EmploymentSeries> employment_;
    std::set<std::string> written_;
    json stages_ = json::array();
};

}  // namespace

std::string_view to_string(Stage stage) {
    switch (stage) {
        case Stage::Ingest: return "ingest";
        case Stage::Adequacy: return "adequacy";
        case Stage::Factors: return "factors";
        case Stage::Cluster: return "cluster";
        case Stage::Classify: return "classify";
        case Stage::Trends: return "trends";
        case Stage::Plot: return "plot";
    }
    return "unknown";
}

Stage parse_stage(std::string_view name) {
    for (auto s : kStages) {
        if (to_string(s) == name) return s;
    }
    throw ParameterError(fmt::format("unknown stage '{}'", name));
}

StageError::StageError(Stage stage, const Error& cause)
    : Error(cause.error_class(), fmt::format("stage '{}' failed: {}", to_string(stage), cause.what())), stage_(stage) {}

RunResult run_pipeline(const PipelineConfig& config, const RunOptions& options) {
    Runner runner(config, options);
    runner.check_inputs();
    runner.prepare_output();
    runner.run_all();
    return std::move(runner.result());
}

void run_stage(const PipelineConfig& config, Stage stage, const RunOptions& options) {
    Runner runner(config, options);
    if (stage == Stage::Ingest || stage == Stage::Trends) runner.check_inputs();
    runner.prepare_output();
    try {
        runner.run(stage);
    } catch (const Error& e) {
        throw StageError(stage, e);
    }
}

}  // namespace taskrisk
