// Command-line front end: `run` executes a configured experiment and writes a
// report, `verify` runs the built-in fixture suite, `oracle` prints exact
// reference values for test authoring. Exit codes: 0 all pass, 1 usage or
// config error, 2 hypothesis unmet, 3 violation, 4 I/O failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sublaw/config.hpp"
#include "sublaw/experiments.hpp"
#include "sublaw/report.hpp"

namespace {

using namespace sublaw;

int cmd_run(const std::string& config_path, const std::string& seed_override,
            const std::string& out_override, const std::string& format_override) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    if (!seed_override.empty()) cfg.plan.seed = std::stoull(seed_override);
    if (!out_override.empty()) cfg.output_path = out_override;
    if (!format_override.empty())
        cfg.output_format = format_override == "json" ? ReportFormat::json : ReportFormat::csv;

    const int code = run(cfg);
    std::cout << "experiment " << cfg.experiment_name << " -> " << cfg.output_path
              << " (exit " << code << ")\n";
    return code;
}

ExperimentConfig builtin_config(ExperimentKind kind, const std::string& name,
                                std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.experiment = kind;
    cfg.experiment_name = name;
    cfg.model.driver = "two_point_masses";
    cfg.instances = 40;
    cfg.plan.replications = 200;
    cfg.plan.seed = seed;
    cfg.plan.selector_pool_size = 4;
    return cfg;
}

int cmd_verify(const std::string& out_path, const std::string& format) {
    const std::uint64_t seed = 20240808;
    std::vector<ReportRow> all;
    int worst = 0;
    for (const auto kind :
         {ExperimentKind::axioms, ExperimentKind::capacity, ExperimentKind::choquet,
          ExperimentKind::seq_lemma}) {
        std::string name;
        for (const auto& [n, k] : experiment_names())
            if (k == kind) name = n;
        try {
            const auto rows = run_experiment(builtin_config(kind, name, seed));
            for (const auto& r : rows) {
                if (!r.pass) worst = std::max(worst, 3);
                all.push_back(r);
            }
        } catch (const HypothesisUnmet& e) {
            std::cerr << name << ": hypothesis unmet: " << e.what() << "\n";
            worst = std::max(worst, 2);
        }
    }
    if (!out_path.empty()) {
        try {
            emit(all, format == "json" ? ReportFormat::json : ReportFormat::csv, out_path);
        } catch (const std::exception& e) {
            std::cerr << e.what() << "\n";
            return 4;
        }
    } else {
        emit_csv(all, std::cout);
    }
    std::cerr << (worst == 0 ? "verify: all rows pass\n" : "verify: violations found\n");
    return worst;
}

RandomFunctional oracle_functional(const std::string& id) {
    if (id == "x1") return coordinate(1);
    if (id == "x2") return coordinate(2);
    if (id == "x1*x2") return multiply(coordinate(1), coordinate(2));
    if (id == "x1^2") return multiply(coordinate(1), coordinate(1));
    if (id == "abs_x1") return abs_functional(coordinate(1));
    if (id == "sum2") return sum_of_coordinates(1, 2);
    if (id == "sum3") return sum_of_coordinates(1, 3);
    throw ValidationError("oracle: unknown functional id '" + id + "'");
}

int cmd_oracle(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "cannot open " << config_path << "\n";
        return 1;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "parse error at byte " << e.byte << ": " << e.what() << "\n";
        return 1;
    }
    try {
        const std::string op = j.at("op").get<std::string>();
        ModelSpec spec;
        if (j.contains("driver") && j.at("driver").is_array())
            spec.driver_atoms =
                j.at("driver").get<std::vector<std::vector<std::pair<double, double>>>>();
        else if (j.contains("driver"))
            spec.driver = j.at("driver").get<std::string>();
        const ScenarioSet driver = resolve_driver(spec);
        const RandomFunctional f = oracle_functional(j.value("functional", "x1"));
        const int horizon = j.value("horizon", f.window().last);

        double value = 0.0;
        if (op == "upper_expectation") value = upper_expectation_exact(driver, f, horizon);
        else if (op == "lower_expectation") value = lower_expectation(driver, f, horizon);
        else if (op == "choquet_integral")
            value = choquet_integral(exact_survival(driver, f, horizon));
        else if (op == "choquet_moment")
            value = choquet_moment(driver, f, j.value("r", 1.0), horizon).value;
        else {
            std::cerr << "unknown op '" << op << "'\n";
            return 1;
        }
        std::cout << detail::format_double(value) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sublaw: scenario-envelope sublinear expectations, capacities, and strong-law experiments"};
    app.require_subcommand(1);

    std::string config_path, seed_override, out_path, format;

    auto* run_cmd = app.add_subcommand("run", "run a configured experiment");
    run_cmd->add_option("--config", config_path, "experiment config file (json)")->required();
    run_cmd->add_option("--seed", seed_override, "override plan.seed");
    run_cmd->add_option("--out", out_path, "override output path");
    run_cmd->add_option("--format", format, "override output format (csv|json)")
        ->check(CLI::IsMember({"csv", "json", ""}));

    auto* verify_cmd = app.add_subcommand("verify", "run the built-in fixture suite");
    verify_cmd->add_option("--out", out_path, "write rows to a file instead of stdout");
    verify_cmd->add_option("--format", format, "output format (csv|json)")
        ->check(CLI::IsMember({"csv", "json", ""}));

    auto* oracle_cmd = app.add_subcommand("oracle", "print an exact reference value");
    oracle_cmd->add_option("--config", config_path, "oracle request file (json)")->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) return cmd_run(config_path, seed_override, out_path, format);
    if (verify_cmd->parsed()) return cmd_verify(out_path, format);
    return cmd_oracle(config_path);
}
