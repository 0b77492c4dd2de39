#pragma once

// Self-describing experiment configuration: one JSON file per run, no flag
// soup. load_config validates everything it can and reports the complete list
// of problems, not just the first. Seeds are mandatory; nothing falls back to
// wall-clock state.

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sublaw/distribution.hpp"
#include "sublaw/errors.hpp"
#include "sublaw/functional.hpp"
#include "sublaw/report.hpp"
#include "sublaw/sequence_model.hpp"
#include "sublaw/sequences.hpp"
#include "sublaw/slln.hpp"

namespace sublaw {

enum class ExperimentKind {
    axioms,
    capacity,
    choquet,
    maximal,
    rademacher_mensov,
    thm41,
    thm42,
    thm43,
    cor41,
    seq_lemma,
};

inline const std::vector<std::pair<std::string, ExperimentKind>>& experiment_names() {
    static const std::vector<std::pair<std::string, ExperimentKind>> names = {
        {"axioms", ExperimentKind::axioms},
        {"capacity", ExperimentKind::capacity},
        {"choquet", ExperimentKind::choquet},
        {"maximal", ExperimentKind::maximal},
        {"rademacher_mensov", ExperimentKind::rademacher_mensov},
        {"thm41", ExperimentKind::thm41},
        {"thm42", ExperimentKind::thm42},
        {"thm43", ExperimentKind::thm43},
        {"cor41", ExperimentKind::cor41},
        {"seq_lemma", ExperimentKind::seq_lemma},
    };
    return names;
}

struct ModelSpec {
    std::string driver = "signs";                         // named or inline atoms
    std::vector<std::vector<std::pair<double, double>>> driver_atoms;
    std::string window_fn = "identity";
    int m = 0;
    int horizon = 1024;
    std::optional<std::string> blocks_kind;               // dyadic | unit | list
    std::vector<int> block_cut_points;
    std::string scheme = "symmetric_signs";
    std::string glue = "fresh";                           // fresh | shared
};

struct PlanSpec {
    int replications = 0;
    std::vector<int> checkpoints;
    int selector_pool_size = 32;
    std::optional<std::uint64_t> seed; // mandatory, checked at validation
};

struct NormalizerConfig {
    std::string kind = "linear"; // linear | custom_a_n | power_phi
    std::string formula = "n";   // custom_a_n: n | n_log2n | sqrt_n_log2n
    std::vector<double> values;  // custom_a_n: explicit list alternative
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::axioms;
    std::string experiment_name = "axioms";
    ModelSpec model;
    NormalizerConfig normalizer;
    double r = 1.0;
    ModelSpec z_spec;           // dominating variable (thm42)
    double C = 1.0;
    std::vector<double> quasi_f;
    PlanSpec plan;
    double band = 0.05;
    std::vector<double> t_grid;
    std::vector<double> x_grid;
    std::vector<double> c_grid;
    int instances = 100;        // axioms / choquet randomized instance count
    int coefficient_vectors = 20;
    std::string output_path = "report.csv";
    ReportFormat output_format = ReportFormat::csv;
};

// ---------------------------------------------------------------------------
// named building blocks

inline ScenarioSet resolve_driver(const ModelSpec& spec, std::vector<std::string>* errors = nullptr) {
    if (!spec.driver_atoms.empty()) {
        std::vector<DiscreteDistribution> laws;
        for (const auto& atoms : spec.driver_atoms) {
            std::vector<Atom> as;
            for (const auto& [v, p] : atoms) as.push_back({v, p});
            laws.emplace_back(std::move(as));
        }
        return ScenarioSet(std::move(laws));
    }
    if (spec.driver == "signs") return ScenarioSet{uniform_signs()};
    if (spec.driver == "signs_two_scale")
        return ScenarioSet{uniform_signs(1.0), uniform_signs(0.5)};
    if (spec.driver == "two_point_masses")
        return ScenarioSet{point_mass(1.0), point_mass(-1.0)};
    if (spec.driver == "signs_and_zero") return ScenarioSet{uniform_signs(), point_mass(0.0)};
    if (errors) {
        errors->push_back("model.driver: unknown driver id '" + spec.driver + "'");
        return ScenarioSet{uniform_signs()};
    }
    throw ValidationError("unknown driver id '" + spec.driver + "'");
}

inline std::optional<RandomFunctional> resolve_window_fn(const std::string& id, int m) {
    if (id == "identity" && m == 0) return coordinate(1);
    if (id == "avg2" && m == 1)
        return RandomFunctional{{1, 2},
                                [](std::span<const double> x) { return 0.5 * (x[0] + x[1]); }};
    if (id == "diff2" && m == 1)
        return RandomFunctional{{1, 2}, [](std::span<const double> x) { return x[1] - x[0]; }};
    if (id == "prod2" && m == 1)
        return RandomFunctional{{1, 2}, [](std::span<const double> x) { return x[0] * x[1]; }};
    if (id == "avg3" && m == 2)
        return RandomFunctional{
            {1, 3}, [](std::span<const double> x) { return (x[0] + x[1] + x[2]) / 3.0; }};
    return std::nullopt;
}

inline std::optional<BlockStructure> resolve_blocks(const ModelSpec& spec,
                                                    std::vector<std::string>* errors) {
    if (!spec.blocks_kind) return std::nullopt;
    try {
        if (*spec.blocks_kind == "dyadic") return BlockStructure::dyadic(spec.horizon);
        if (*spec.blocks_kind == "unit") return BlockStructure::unit(spec.horizon);
        if (*spec.blocks_kind == "list")
            return BlockStructure(spec.block_cut_points, spec.horizon);
    } catch (const std::exception& e) {
        if (errors) errors->push_back(std::string("model.blocks: ") + e.what());
        return std::nullopt;
    }
    if (errors) errors->push_back("model.blocks.kind: unknown kind '" + *spec.blocks_kind + "'");
    return std::nullopt;
}

inline std::function<double(int)> resolve_normalizer_formula(const std::string& formula,
                                                             std::vector<std::string>* errors) {
    if (formula == "n") return [](int n) { return static_cast<double>(n); };
    if (formula == "n_log2n")
        return [](int n) { return n <= 1 ? 1.0 : n * std::log2(static_cast<double>(n)); };
    if (formula == "sqrt_n_log2n")
        return [](int n) {
            return n <= 1 ? 1.0
                          : std::sqrt(static_cast<double>(n)) *
                                std::max(1.0, std::log2(static_cast<double>(n)));
        };
    if (errors) errors->push_back("normalizer.formula: unknown formula '" + formula + "'");
    return [](int n) { return static_cast<double>(n); };
}

// ---------------------------------------------------------------------------
// loading

namespace detail {

template <typename T>
bool read_field(const nlohmann::json& j, const std::string& key, T& out,
                std::vector<std::string>& errors, const std::string& context) {
    if (!j.contains(key)) return false;
    try {
        out = j.at(key).get<T>();
        return true;
    } catch (const nlohmann::json::exception& e) {
        errors.push_back(context + "." + key + ": " + e.what());
        return false;
    }
}

inline void read_model(const nlohmann::json& j, ModelSpec& spec,
                       std::vector<std::string>& errors, const std::string& context) {
    if (j.contains("driver") && j.at("driver").is_array()) {
        try {
            spec.driver_atoms =
                j.at("driver").get<std::vector<std::vector<std::pair<double, double>>>>();
            spec.driver = "inline";
        } catch (const nlohmann::json::exception& e) {
            errors.push_back(context + ".driver: " + e.what());
        }
    } else {
        read_field(j, "driver", spec.driver, errors, context);
    }
    read_field(j, "window_fn", spec.window_fn, errors, context);
    read_field(j, "m", spec.m, errors, context);
    read_field(j, "horizon", spec.horizon, errors, context);
    read_field(j, "scheme", spec.scheme, errors, context);
    read_field(j, "glue", spec.glue, errors, context);
    if (j.contains("blocks")) {
        const auto& b = j.at("blocks");
        std::string kind;
        if (read_field(b, "kind", kind, errors, context + ".blocks")) spec.blocks_kind = kind;
        read_field(b, "cut_points", spec.block_cut_points, errors, context + ".blocks");
    }
}

} // namespace detail

/// Parses and validates a config file. Throws ParseError (position-annotated)
/// for malformed JSON and ValidationError carrying every detected problem.
inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("config parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }

    std::vector<std::string> errors;
    ExperimentConfig config;

    std::string experiment;
    if (!detail::read_field(j, "experiment", experiment, errors, "config"))
        errors.push_back("config.experiment: required field missing");
    bool found = false;
    for (const auto& [name, kind] : experiment_names())
        if (name == experiment) {
            config.experiment = kind;
            config.experiment_name = name;
            found = true;
        }
    if (!found && !experiment.empty())
        errors.push_back("config.experiment: unknown experiment '" + experiment + "'");

    if (j.contains("model")) detail::read_model(j.at("model"), config.model, errors, "model");
    if (j.contains("Z")) detail::read_model(j.at("Z"), config.z_spec, errors, "Z");
    if (j.contains("normalizer")) {
        const auto& n = j.at("normalizer");
        detail::read_field(n, "kind", config.normalizer.kind, errors, "normalizer");
        detail::read_field(n, "formula", config.normalizer.formula, errors, "normalizer");
        detail::read_field(n, "values", config.normalizer.values, errors, "normalizer");
    }
    detail::read_field(j, "r", config.r, errors, "config");
    detail::read_field(j, "C", config.C, errors, "config");
    detail::read_field(j, "quasi_f", config.quasi_f, errors, "config");
    detail::read_field(j, "t_grid", config.t_grid, errors, "config");
    detail::read_field(j, "x_grid", config.x_grid, errors, "config");
    detail::read_field(j, "c_grid", config.c_grid, errors, "config");
    detail::read_field(j, "instances", config.instances, errors, "config");
    detail::read_field(j, "coefficient_vectors", config.coefficient_vectors, errors, "config");

    if (j.contains("plan")) {
        const auto& p = j.at("plan");
        detail::read_field(p, "replications", config.plan.replications, errors, "plan");
        detail::read_field(p, "checkpoints", config.plan.checkpoints, errors, "plan");
        detail::read_field(p, "selector_pool_size", config.plan.selector_pool_size, errors,
                           "plan");
        std::uint64_t seed = 0;
        if (detail::read_field(p, "seed", seed, errors, "plan")) config.plan.seed = seed;
    } else {
        errors.push_back("config.plan: required section missing");
    }

    if (j.contains("bands")) {
        detail::read_field(j.at("bands"), "final_worst_ratio", config.band, errors, "bands");
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        detail::read_field(o, "path", config.output_path, errors, "output");
        std::string format = "csv";
        detail::read_field(o, "format", format, errors, "output");
        if (format == "csv") config.output_format = ReportFormat::csv;
        else if (format == "json") config.output_format = ReportFormat::json;
        else errors.push_back("output.format: must be 'csv' or 'json'");
    }

    // semantic validation, all collected
    if (!config.plan.seed) errors.push_back("plan.seed: required (no wall-clock defaults)");
    if (config.plan.replications < 1)
        errors.push_back("plan.replications: must be at least 1");
    if (config.plan.selector_pool_size < 1)
        errors.push_back("plan.selector_pool_size: must be at least 1");
    for (std::size_t i = 1; i < config.plan.checkpoints.size(); ++i)
        if (config.plan.checkpoints[i] <= config.plan.checkpoints[i - 1]) {
            errors.push_back("plan.checkpoints: must be strictly increasing");
            break;
        }
    if (!config.plan.checkpoints.empty() &&
        config.plan.checkpoints.back() > config.model.horizon)
        errors.push_back("plan.checkpoints: last checkpoint exceeds model.horizon");
    if (!(config.r >= 1.0 && config.r < 2.0)) errors.push_back("r must lie in [1,2)");
    if (config.model.horizon < 1) errors.push_back("model.horizon: must be positive");
    if (config.model.m < 0) errors.push_back("model.m: must be nonnegative");
    if (!resolve_window_fn(config.model.window_fn, config.model.m))
        errors.push_back("model.window_fn: no window function '" + config.model.window_fn +
                         "' of length m+1 = " + std::to_string(config.model.m + 1));
    resolve_driver(config.model, &errors);
    resolve_blocks(config.model, &errors);
    if (config.normalizer.kind != "linear" && config.normalizer.kind != "custom_a_n" &&
        config.normalizer.kind != "power_phi")
        errors.push_back("normalizer.kind: unknown kind '" + config.normalizer.kind + "'");
    if (config.normalizer.kind == "custom_a_n" && config.normalizer.values.empty())
        resolve_normalizer_formula(config.normalizer.formula, &errors);
    if (config.experiment == ExperimentKind::thm42 && !config.model.blocks_kind)
        errors.push_back("model.blocks: required for thm42");

    if (!errors.empty()) {
        std::ostringstream msg;
        msg << errors.size() << " validation error(s):";
        for (const auto& e : errors) msg << "\n  - " << e;
        throw ValidationError(msg.str());
    }
    return config;
}

} // namespace sublaw
