#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "sublaw/config.hpp"
#include "sublaw/experiments.hpp"
#include "sublaw/report.hpp"

using namespace sublaw;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
    const std::string path = std::string("/tmp/sublaw_test_") + name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config loading") {
    SUBCASE("minimal thm43 config loads with defaults") {
        const std::string path = write_temp("min.json", R"({
            "experiment": "thm43",
            "model": {"driver": "signs", "scheme": "symmetric_signs", "horizon": 64},
            "plan": {"replications": 4, "checkpoints": [16, 32, 64], "seed": 7}
        })");
        const ExperimentConfig cfg = load_config(path);
        CHECK(cfg.experiment == ExperimentKind::thm43);
        CHECK(cfg.plan.seed == 7);
        CHECK(cfg.plan.selector_pool_size == 32); // default
        CHECK(cfg.output_format == ReportFormat::csv);
        std::remove(path.c_str());
    }

    SUBCASE("r outside [1,2) is rejected with the contract message") {
        const std::string path = write_temp("bad_r.json", R"({
            "experiment": "thm42",
            "model": {"driver": "signs", "horizon": 64, "blocks": {"kind": "dyadic"}},
            "r": 2.0,
            "plan": {"replications": 4, "checkpoints": [16, 64], "seed": 7}
        })");
        try {
            load_config(path);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("r must lie in [1,2)") != std::string::npos);
        }
        std::remove(path.c_str());
    }

    SUBCASE("all validation errors are collected, not just the first") {
        const std::string path = write_temp("multi.json", R"({
            "experiment": "nope",
            "model": {"driver": "mystery", "horizon": -3},
            "r": 5.0,
            "plan": {"replications": 0, "checkpoints": [64, 16]}
        })");
        try {
            load_config(path);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("unknown experiment") != std::string::npos);
            CHECK(msg.find("unknown driver") != std::string::npos);
            CHECK(msg.find("r must lie in [1,2)") != std::string::npos);
            CHECK(msg.find("seed") != std::string::npos);
            CHECK(msg.find("strictly increasing") != std::string::npos);
            CHECK(msg.find("horizon") != std::string::npos);
        }
        std::remove(path.c_str());
    }

    SUBCASE("malformed json reports the byte position") {
        const std::string path = write_temp("broken.json", "{\"experiment\": ");
        try {
            load_config(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("byte") != std::string::npos);
        }
        std::remove(path.c_str());
    }

    SUBCASE("inline driver atoms are parsed") {
        const std::string path = write_temp("inline.json", R"({
            "experiment": "axioms",
            "model": {"driver": [[[-1.0, 0.5], [1.0, 0.5]], [[0.0, 1.0]]]},
            "instances": 3,
            "plan": {"replications": 1, "checkpoints": [], "seed": 5}
        })");
        const ExperimentConfig cfg = load_config(path);
        const ScenarioSet driver = resolve_driver(cfg.model);
        REQUIRE(driver.size() == 2);
        CHECK(driver[0].support_size() == 2);
        CHECK(driver[1].support_size() == 1);
        std::remove(path.c_str());
    }
}

TEST_CASE("report emission") {
    std::vector<ReportRow> rows;
    ReportRow r;
    r.experiment = "demo";
    r.n = 4;
    r.statistic = "value, with comma";
    r.value = 0.1;
    r.ci_low = 0.05;
    r.ci_high = 0.15;
    r.bound = 0.2;
    r.pass = true;
    r.seed = 42;
    r.selector_id = "const0";
    rows.push_back(r);

    SUBCASE("csv columns, quoting, and 17-digit values") {
        std::ostringstream out;
        emit_csv(rows, out);
        const std::string text = out.str();
        CHECK(text.find("experiment,n,statistic,value,ci_low,ci_high,bound,pass,seed,"
                        "selector_id") == 0);
        CHECK(text.find("\"value, with comma\"") != std::string::npos);
        CHECK(text.find("0.10000000000000001") != std::string::npos); // 0.1 at 17 digits
    }

    SUBCASE("csv round-trip preserves every field") {
        std::ostringstream out;
        emit_csv(rows, out);
        std::istringstream in(out.str());
        const auto parsed = parse_csv(in);
        REQUIRE(parsed.size() == 1);
        CHECK(parsed[0].experiment == r.experiment);
        CHECK(parsed[0].n == r.n);
        CHECK(parsed[0].statistic == r.statistic);
        CHECK(parsed[0].value == r.value);
        CHECK(parsed[0].ci_low == r.ci_low);
        CHECK(parsed[0].ci_high == r.ci_high);
        CHECK(parsed[0].bound == r.bound);
        CHECK(parsed[0].pass == r.pass);
        CHECK(parsed[0].seed == r.seed);
        CHECK(parsed[0].selector_id == r.selector_id);
    }

    SUBCASE("json rows carry identical keys") {
        std::ostringstream out;
        emit_json(rows, out);
        const std::string text = out.str();
        for (const char* key : {"\"experiment\"", "\"n\"", "\"statistic\"", "\"value\"",
                                "\"ci_low\"", "\"ci_high\"", "\"bound\"", "\"pass\"", "\"seed\"",
                                "\"selector_id\""})
            CHECK(text.find(key) != std::string::npos);
    }

    SUBCASE("empty row sets are rejected") {
        CHECK_THROWS_AS(emit({}, ReportFormat::csv, "/tmp/sublaw_empty.csv"),
                        std::invalid_argument);
    }
}

TEST_CASE("experiment runs are reproducible byte for byte") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::axioms;
    cfg.experiment_name = "axioms";
    cfg.model.driver = "two_point_masses";
    cfg.instances = 10;
    cfg.plan.replications = 1;
    cfg.plan.seed = 31337;
    cfg.plan.selector_pool_size = 1;
    cfg.output_path = "/tmp/sublaw_repro_a.csv";
    REQUIRE(run(cfg) == 0);
    cfg.output_path = "/tmp/sublaw_repro_b.csv";
    REQUIRE(run(cfg) == 0);
    CHECK(slurp("/tmp/sublaw_repro_a.csv") == slurp("/tmp/sublaw_repro_b.csv"));
    std::remove("/tmp/sublaw_repro_a.csv");
    std::remove("/tmp/sublaw_repro_b.csv");
}

TEST_CASE("pass flags are recomputable from value and bound") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::seq_lemma;
    cfg.experiment_name = "seq_lemma";
    cfg.plan.replications = 1;
    cfg.plan.seed = 11;
    const auto rows = run_experiment(cfg);
    REQUIRE(!rows.empty());
    for (const auto& r : rows) {
        CHECK(r.pass == (r.value <= r.bound));
        CHECK(std::isfinite(r.value));
        CHECK(std::isfinite(r.bound));
    }

    ExperimentConfig thm;
    thm.experiment = ExperimentKind::thm41;
    thm.experiment_name = "thm41";
    thm.model.driver = "signs";
    thm.model.window_fn = "avg2";
    thm.model.m = 1;
    thm.model.horizon = 512;
    thm.normalizer.kind = "linear";
    thm.band = 0.5;
    thm.plan.replications = 4;
    thm.plan.checkpoints = {64, 128, 256, 512};
    thm.plan.seed = 17;
    thm.plan.selector_pool_size = 2;
    const auto conv_rows = run_experiment(thm);
    REQUIRE(!conv_rows.empty());
    for (const auto& r : conv_rows) {
        CHECK(r.pass == (r.value <= r.bound));
        CHECK(std::isfinite(r.value));
        CHECK(std::isfinite(r.bound));
    }
}

TEST_CASE("exit code contract") {
    SUBCASE("violated certificate yields exit 3") {
        ExperimentConfig cfg;
        cfg.experiment = ExperimentKind::rademacher_mensov;
        cfg.experiment_name = "rademacher_mensov";
        cfg.model.driver = "signs";
        cfg.model.window_fn = "avg2";
        cfg.model.m = 1;
        cfg.model.horizon = 16;
        cfg.quasi_f = {1.0}; // zero off-diagonal allowance: violated
        cfg.coefficient_vectors = 2;
        cfg.plan.replications = 50;
        cfg.plan.seed = 3;
        cfg.plan.selector_pool_size = 2;
        cfg.output_path = "/tmp/sublaw_exit3.csv";
        CHECK(run(cfg) == 3);
        std::remove("/tmp/sublaw_exit3.csv");
    }

    SUBCASE("unmet hypothesis yields exit 2") {
        ExperimentConfig cfg;
        cfg.experiment = ExperimentKind::thm41;
        cfg.experiment_name = "thm41";
        cfg.model.driver = "two_point_masses"; // means +/-1, not centered
        cfg.model.window_fn = "identity";
        cfg.model.m = 0;
        cfg.model.horizon = 64;
        cfg.plan.replications = 2;
        cfg.plan.checkpoints = {16, 32, 64};
        cfg.plan.seed = 3;
        cfg.plan.selector_pool_size = 2;
        cfg.output_path = "/tmp/sublaw_exit2.csv";
        CHECK(run(cfg) == 2);
        std::remove("/tmp/sublaw_exit2.csv");
    }

    SUBCASE("unwritable output yields exit 4") {
        ExperimentConfig cfg;
        cfg.experiment = ExperimentKind::seq_lemma;
        cfg.experiment_name = "seq_lemma";
        cfg.plan.replications = 1;
        cfg.plan.seed = 11;
        cfg.output_path = "/nonexistent_dir/report.csv";
        CHECK(run(cfg) == 4);
    }
}
