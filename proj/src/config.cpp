#include "taskrisk/config.hpp"

#include "taskrisk/error.hpp"

#include <fmt/format.h>

#include <fstream>
#include <set>

namespace taskrisk {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(fmt::format("'{}' must be an object", where));
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.count(key)) throw ConfigError(fmt::format("unknown key '{}{}'", where.empty() ? "" : where + ".", key));
    }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(fmt::format("'{}.{}' has the wrong type", where, key));
    }
}

char delimiter(const json& obj, const char* key, const std::string& where) {
    const auto text = get<std::string>(obj, key, where, "comma");
    try {
        return TableFormat::parse(text).delimiter;
    } catch (const FormatError&) {
        throw ConfigError(fmt::format("'{}.{}' must be comma or tab", where, key));
    }
}

std::uint64_t seed_value(const json& v, const std::string& where) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
        throw ConfigError(fmt::format("'{}' must be a non-negative integer", where));
    }
    return v.get<std::uint64_t>();
}

FactorRef factor_ref(const json& v, const std::string& where) {
    if (v.is_number_integer()) {
        const auto n = v.get<long long>();
        if (n < 1) throw ConfigError(fmt::format("'{}' factor numbers are 1-based", where));
        return static_cast<std::size_t>(n);
    }
    if (v.is_string()) return v.get<std::string>();
    throw ConfigError(fmt::format("'{}' must be a factor number or label", where));
}

json factor_json(const FactorRef& r) {
    if (std::holds_alternative<std::size_t>(r)) return std::get<std::size_t>(r);
    return std::get<std::string>(r);
}

std::vector<FactorRef> factor_list(const json& obj, const char* key, const std::string& where) {
    std::vector<FactorRef> out;
    if (!obj.contains(key)) return out;
    const auto& arr = obj.at(key);
    if (!arr.is_array()) throw ConfigError(fmt::format("'{}.{}' must be an array", where, key));
    for (const auto& v : arr) out.push_back(factor_ref(v, where + "." + key));
    return out;
}

}  // namespace

std::size_t resolve_factor(const FactorRef& ref, const std::vector<std::string>& labels) {
    if (std::holds_alternative<std::size_t>(ref)) {
        const auto n = std::get<std::size_t>(ref);
        if (n < 1 || n > labels.size()) {
            throw ConfigError(fmt::format("factor {} does not exist (solution has {})", n, labels.size()));
        }
        return n - 1;
    }
    const auto& name = std::get<std::string>(ref);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == name) return i;
    }
    throw ConfigError(fmt::format("no factor labelled '{}'", name));
}

PipelineConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    check_keys(doc, "", {"schema_version", "inputs", "standardize", "parallel_analysis", "factors", "scores",
                         "clustering", "criteria", "cluster_labeling", "trends", "output_dir"});
    if (!doc.contains("schema_version")) throw ConfigError("missing schema_version");
    if (get<int>(doc, "schema_version", "", 0) != kConfigSchemaVersion) {
        throw ConfigError(fmt::format("unsupported schema_version (expected {})", kConfigSchemaVersion));
    }

    PipelineConfig c;
    c.base_dir = base_dir;

    if (!doc.contains("inputs")) throw ConfigError("missing 'inputs'");
    const auto& in = doc.at("inputs");
    check_keys(in, "inputs", {"attributes", "attributes_delimiter", "employment", "employment_delimiter", "catalog", "titles"});
    if (!in.contains("attributes")) throw ConfigError("missing 'inputs.attributes'");
    const auto& attrs = in.at("attributes");
    if (attrs.is_string()) {
        c.attribute_files.emplace_back(attrs.get<std::string>());
    } else if (attrs.is_array() && !attrs.empty()) {
        for (const auto& a : attrs) {
            if (!a.is_string()) throw ConfigError("'inputs.attributes' entries must be paths");
            c.attribute_files.emplace_back(a.get<std::string>());
        }
    } else {
        throw ConfigError("'inputs.attributes' must be a path or a non-empty list of paths");
    }
    c.attribute_delimiter = delimiter(in, "attributes_delimiter", "inputs");
    if (!in.contains("employment")) throw ConfigError("missing 'inputs.employment'");
    c.employment_file = get<std::string>(in, "employment", "inputs", "");
    c.employment_delimiter = delimiter(in, "employment_delimiter", "inputs");
    if (in.contains("catalog") && !in.at("catalog").is_null()) c.catalog_file = get<std::string>(in, "catalog", "inputs", "");
    if (in.contains("titles") && !in.at("titles").is_null()) c.titles_file = get<std::string>(in, "titles", "inputs", "");

    c.standardize = get<bool>(doc, "standardize", "", true);

    if (doc.contains("parallel_analysis")) {
        const auto& pa = doc.at("parallel_analysis");
        check_keys(pa, "parallel_analysis", {"replicates", "quantile", "seed"});
        c.pa_replicates = get<int>(pa, "replicates", "parallel_analysis", c.pa_replicates);
        c.pa_quantile = get<double>(pa, "quantile", "parallel_analysis", c.pa_quantile);
        if (pa.contains("seed")) c.pa_seed = seed_value(pa.at("seed"), "parallel_analysis.seed");
    }
    if (c.pa_replicates < 1) throw ConfigError("'parallel_analysis.replicates' must be >= 1");
    if (!(c.pa_quantile > 0 && c.pa_quantile < 1)) throw ConfigError("'parallel_analysis.quantile' must lie in (0, 1)");

    if (doc.contains("factors")) {
        const auto& f = doc.at("factors");
        check_keys(f, "factors", {"count", "rotate", "kaiser_normalize", "tol", "max_iter", "labels"});
        if (f.contains("count")) {
            const auto& v = f.at("count");
            if (v.is_string() && v.get<std::string>() == "auto") {
                c.factor_count.reset();
            } else if (v.is_number_integer() && v.get<long long>() >= 1) {
                c.factor_count = v.get<std::size_t>();
            } else {
                throw ConfigError("'factors.count' must be \"auto\" or a positive integer");
            }
        }
        c.rotate = get<bool>(f, "rotate", "factors", c.rotate);
        c.kaiser_normalize = get<bool>(f, "kaiser_normalize", "factors", c.kaiser_normalize);
        c.paf_tol = get<double>(f, "tol", "factors", c.paf_tol);
        c.paf_max_iter = get<int>(f, "max_iter", "factors", c.paf_max_iter);
        c.factor_labels = get<std::vector<std::string>>(f, "labels", "factors", {});
    }
    if (!(c.paf_tol > 0) || c.paf_max_iter < 1) throw ConfigError("'factors.tol' and 'factors.max_iter' must be positive");

    if (doc.contains("scores")) {
        const auto& s = doc.at("scores");
        check_keys(s, "scores", {"method"});
        c.score_method = get<std::string>(s, "method", "scores", c.score_method);
        if (c.score_method != "regression") throw ConfigError("'scores.method' supports only \"regression\"");
    }

    if (doc.contains("clustering")) {
        const auto& k = doc.at("clustering");
        check_keys(k, "clustering", {"metric", "k", "k_min", "k_max", "seed", "init"});
        try {
            c.metric = parse_metric(get<std::string>(k, "metric", "clustering", "euclidean"));
        } catch (const ParameterError& e) {
            throw ConfigError(e.what());
        }
        if (k.contains("k")) {
            const auto& v = k.at("k");
            if (v.is_string() && v.get<std::string>() == "auto") c.k.reset();
            else if (v.is_number_integer() && v.get<long long>() >= 2) c.k = v.get<std::size_t>();
            else throw ConfigError("'clustering.k' must be \"auto\" or an integer >= 2");
        }
        c.k_min = get<std::size_t>(k, "k_min", "clustering", c.k_min);
        c.k_max = get<std::size_t>(k, "k_max", "clustering", c.k_max);
        const auto init = get<std::string>(k, "init", "clustering", "build");
        if (init == "build") c.init = PamInit::Build;
        else if (init == "random") c.init = PamInit::Random;
        else throw ConfigError("'clustering.init' must be build or random");
        if (k.contains("seed")) c.cluster_seed = seed_value(k.at("seed"), "clustering.seed");
    }
    if (c.k_min < 2 || c.k_max < c.k_min) throw ConfigError("clustering range must satisfy 2 <= k_min <= k_max");
    if (c.init == PamInit::Random && !c.cluster_seed) throw ConfigError("'clustering.seed' is required with random init");

    if (!doc.contains("criteria")) throw ConfigError("missing 'criteria'");
    const auto& crit = doc.at("criteria");
    if (!crit.is_array() || crit.empty()) throw ConfigError("'criteria' must be a non-empty array");
    for (std::size_t i = 0; i < crit.size(); ++i) {
        const auto where = fmt::format("criteria[{}]", i);
        const auto& e = crit[i];
        check_keys(e, where, {"factor", "direction", "fraction", "label"});
        if (!e.contains("factor") || !e.contains("label")) throw ConfigError(where + " needs 'factor' and 'label'");
        CriterionConfig cc;
        cc.factor = factor_ref(e.at("factor"), where + ".factor");
        const auto dir = get<std::string>(e, "direction", where, "top");
        if (dir != "top" && dir != "bottom") throw ConfigError(where + ".direction must be top or bottom");
        cc.direction = parse_direction(dir);
        cc.fraction = get<double>(e, "fraction", where, 0.20);
        if (!(cc.fraction > 0 && cc.fraction < 1)) throw ConfigError(where + ".fraction must lie in (0, 1)");
        cc.label = get<std::string>(e, "label", where, "");
        if (cc.label.empty()) throw ConfigError(where + ".label must be non-empty");
        c.criteria.push_back(std::move(cc));
    }

    if (!doc.contains("cluster_labeling")) throw ConfigError("missing 'cluster_labeling'");
    {
        const auto& l = doc.at("cluster_labeling");
        check_keys(l, "cluster_labeling", {"susceptible_factors", "bottleneck_factors", "threshold_sd"});
        c.susceptible_factors = factor_list(l, "susceptible_factors", "cluster_labeling");
        c.bottleneck_factors = factor_list(l, "bottleneck_factors", "cluster_labeling");
        c.threshold_sd = get<double>(l, "threshold_sd", "cluster_labeling", c.threshold_sd);
        if (c.susceptible_factors.empty() && c.bottleneck_factors.empty()) {
            throw ConfigError("'cluster_labeling' needs susceptible_factors or bottleneck_factors");
        }
        if (!(c.threshold_sd >= 0)) throw ConfigError("'cluster_labeling.threshold_sd' must be non-negative");
    }

    if (doc.contains("trends")) {
        const auto& t = doc.at("trends");
        check_keys(t, "trends", {"start_year", "end_year", "subgroups"});
        c.years.start = get<int>(t, "start_year", "trends", c.years.start);
        c.years.end = get<int>(t, "end_year", "trends", c.years.end);
        if (t.contains("subgroups")) {
            const auto& subs = t.at("subgroups");
            if (!subs.is_array()) throw ConfigError("'trends.subgroups' must be an array");
            for (std::size_t i = 0; i < subs.size(); ++i) {
                const auto where = fmt::format("trends.subgroups[{}]", i);
                check_keys(subs[i], where, {"label", "soc_codes"});
                Subgroup sg;
                sg.label = get<std::string>(subs[i], "label", where, "");
                const auto codes = get<std::vector<std::string>>(subs[i], "soc_codes", where, {});
                sg.soc_codes.insert(codes.begin(), codes.end());
                if (sg.label.empty() || sg.soc_codes.empty()) throw ConfigError(where + " needs a label and soc_codes");
                c.subgroups.push_back(std::move(sg));
            }
        }
    }
    if (c.years.end <= c.years.start) throw ConfigError("'trends.end_year' must be after 'trends.start_year'");

    c.output_dir = get<std::string>(doc, "output_dir", "", "out");
    if (!c.pa_seed) throw ConfigError("'parallel_analysis.seed' is required (parallel analysis is stochastic)");
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PathError(path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
    return parse_config(doc, path.parent_path());
}

json config_snapshot(const PipelineConfig& c) {
    auto delim = [](char d) { return d == '\t' ? "tab" : "comma"; };
    json inputs;
    json attrs = json::array();
    for (const auto& a : c.attribute_files) attrs.push_back(a.generic_string());
    inputs["attributes"] = attrs;
    inputs["attributes_delimiter"] = delim(c.attribute_delimiter);
    inputs["employment"] = c.employment_file.generic_string();
    inputs["employment_delimiter"] = delim(c.employment_delimiter);
    inputs["catalog"] = c.catalog_file ? json(c.catalog_file->generic_string()) : json(nullptr);
    inputs["titles"] = c.titles_file ? json(c.titles_file->generic_string()) : json(nullptr);

    json criteria = json::array();
    for (const auto& cc : c.criteria) {
        criteria.push_back({{"factor", factor_json(cc.factor)},
                            {"direction", std::string(to_string(cc.direction))},
                            {"fraction", cc.fraction},
                            {"label", cc.label}});
    }
    auto refs = [](const std::vector<FactorRef>& v) {
        json a = json::array();
        for (const auto& r : v) a.push_back(factor_json(r));
        return a;
    };
    json subgroups = json::array();
    for (const auto& s : c.subgroups) subgroups.push_back({{"label", s.label}, {"soc_codes", s.soc_codes}});

    return {
        {"schema_version", kConfigSchemaVersion},
        {"inputs", inputs},
        {"standardize", c.standardize},
        {"parallel_analysis", {{"replicates", c.pa_replicates}, {"quantile", c.pa_quantile}, {"seed", *c.pa_seed}}},
        {"factors",
         {{"count", c.factor_count ? json(*c.factor_count) : json("auto")},
          {"rotate", c.rotate},
          {"kaiser_normalize", c.kaiser_normalize},
          {"tol", c.paf_tol},
          {"max_iter", c.paf_max_iter},
          {"labels", c.factor_labels}}},
        {"scores", {{"method", c.score_method}}},
        {"clustering",
         {{"metric", std::string(to_string(c.metric))},
          {"k", c.k ? json(*c.k) : json("auto")},
          {"k_min", c.k_min},
          {"k_max", c.k_max},
          {"init", c.init == PamInit::Build ? "build" : "random"},
          {"seed", c.cluster_seed ? json(*c.cluster_seed) : json(nullptr)}}},
        {"criteria", criteria},
        {"cluster_labeling",
         {{"susceptible_factors", refs(c.susceptible_factors)},
          {"bottleneck_factors", refs(c.bottleneck_factors)},
          {"threshold_sd", c.threshold_sd}}},
        {"trends", {{"start_year", c.years.start}, {"end_year", c.years.end}, {"subgroups", subgroups}}},
    };
}

}  // namespace taskrisk
