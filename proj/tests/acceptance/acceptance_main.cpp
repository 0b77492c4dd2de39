// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Tolerances are pinned here, not configurable; bands for the convergence
// runs come from the committed reference configs, which were frozen from
// pilot runs of this same code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sublaw/capacity.hpp"
#include "sublaw/choquet.hpp"
#include "sublaw/config.hpp"
#include "sublaw/distribution.hpp"
#include "sublaw/expectation.hpp"
#include "sublaw/experiments.hpp"
#include "sublaw/inequalities.hpp"
#include "sublaw/instances.hpp"
#include "sublaw/seq_analysis.hpp"
#include "sublaw/sequences.hpp"
#include "sublaw/slln.hpp"

using namespace sublaw;

namespace {

int failures = 0;

void report(int criterion, const std::string& label, bool pass, const std::string& detail = {}) {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------- 1, 2
void criteria_axioms_and_additivity() {
    InstanceGenerator gen(0xAC5EED01);
    const int horizon = 4;
    double worst_axiom = 0.0, worst_additivity = 0.0;
    for (int i = 0; i < 100; ++i) {
        const ScenarioSet driver = gen.scenarios(3, 4);
        const RandomFunctional f = gen.functional(4);
        const RandomFunctional g = gen.functional(4);
        const double ef = upper_expectation_exact(driver, f, horizon);
        const double eg = upper_expectation_exact(driver, g, horizon);

        // monotonicity: f <= f + g^2 pointwise
        worst_axiom = std::max(
            worst_axiom, ef - upper_expectation_exact(driver, add(f, multiply(g, g)), horizon));
        const double c = gen.uniform(-2.0, 2.0);
        worst_axiom = std::max(
            worst_axiom,
            std::fabs(upper_expectation_exact(driver, constant_functional(c), horizon) - c));
        worst_axiom = std::max(
            worst_axiom, upper_expectation_exact(driver, add(f, g), horizon) - ef - eg);
        const double lambda = gen.uniform(0.0, 3.0);
        worst_axiom = std::max(
            worst_axiom,
            std::fabs(upper_expectation_exact(driver, scale(f, lambda), horizon) - lambda * ef));
        worst_axiom = std::max(
            worst_axiom,
            std::fabs(upper_expectation_exact(driver, add_constant(f, c), horizon) - (ef + c)));
        worst_axiom = std::max(worst_axiom, lower_expectation(driver, f, horizon) - ef);

        RandomFunctional total = coordinate(1);
        double sum = upper_expectation_exact(driver, coordinate(1), horizon);
        for (int k = 2; k <= horizon; ++k) {
            total = add(total, coordinate(k));
            sum += upper_expectation_exact(driver, coordinate(k), horizon);
        }
        worst_additivity = std::max(
            worst_additivity, std::fabs(upper_expectation_exact(driver, total, horizon) - sum));
    }
    report(1, "sublinear expectation axioms on 100 randomized instances",
           worst_axiom <= 1e-12, "worst deviation " + fmt(worst_axiom));
    report(2, "independence additivity on the same instance set",
           worst_additivity <= 1e-12, "worst deviation " + fmt(worst_additivity));
}

// ------------------------------------------------------------------------- 3
void criterion_counterexample() {
    const ContinuousTwoMeasureModel model = two_segment_model();
    const double v01 =
        upper_capacity(model, MeasurableEvent::intervals(IntervalUnion::interval(0, 1)));
    const double v12 =
        upper_capacity(model, MeasurableEvent::intervals(IntervalUnion::interval(1, 2)));
    const double vpt = upper_capacity(model, MeasurableEvent::intervals(IntervalUnion::point(1)));
    report(3, "two-restriction counterexample regression",
           v01 == 1.0 && v12 == 1.0 && vpt == 0.0,
           "V[0,1]=" + fmt(v01) + " V[1,2]=" + fmt(v12) + " V{1}=" + fmt(vpt));
}

// ------------------------------------------------------------------------- 4
void criterion_choquet_equivalence() {
    InstanceGenerator gen(0xC0FFEE04);
    double worst_quad = 0.0, worst_classical = 0.0;
    for (int i = 0; i < 50; ++i) {
        const ScenarioSet driver = gen.scenarios(3, 4);
        const RandomFunctional f = gen.functional(2);
        const StepSurvival s = exact_survival(driver, f, 2);
        const double exact = choquet_integral(s);
        const GridSurvival grid = sample_survival_grid(s, 1 << 12);
        worst_quad = std::max(worst_quad, std::fabs(choquet_integral(grid).value - exact));

        const DiscreteDistribution law = gen.distribution(4);
        const RandomFunctional g = gen.functional(2);
        double mean = 0.0;
        for (const Atom& a1 : law.atoms())
            for (const Atom& a2 : law.atoms()) {
                const double path[2] = {a1.value, a2.value};
                mean += a1.probability * a2.probability *
                        g.eval_on_path(std::span<const double>(path, 2));
            }
        worst_classical = std::max(
            worst_classical,
            std::fabs(choquet_integral(exact_survival(ScenarioSet{law}, g, 2)) - mean));
    }
    report(4, "choquet step sum vs 4096-point quadrature and classical reduction",
           worst_quad <= 1e-6 && worst_classical <= 1e-12,
           "quad " + fmt(worst_quad) + ", classical " + fmt(worst_classical));
}

// ------------------------------------------------------------------------- 5
void criterion_truncation_bound() {
    InstanceGenerator gen(0x7C5);
    const std::vector<double> c_grid{0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 8.0};
    double worst_slack = -1.0;
    bool all_pass = true;
    for (int i = 0; i < 100; ++i) {
        const ScenarioSet driver = gen.scenarios(3, 4);
        const RandomFunctional f = gen.functional(2);
        const InequalityReport rep = verify_truncation_bound(driver, f, 2, c_grid);
        all_pass = all_pass && rep.all_pass();
        for (std::size_t j = 0; j < rep.lhs.size(); ++j)
            worst_slack = std::max(worst_slack, rep.lhs[j] - rep.rhs[j]);
    }
    report(5, "truncation bound exact mode, 100 instances x 8 levels",
           all_pass && worst_slack <= 1e-12, "worst lhs-rhs " + fmt(worst_slack));
}

// ------------------------------------------------------------------------- 6
void criterion_rademacher_mensov() {
    const auto started = std::chrono::steady_clock::now();
    InstanceGenerator gen(0x2A6D06);
    const std::vector<int> sizes{4, 16, 64, 256, 1024};

    const DiscreteDistribution half_weight(
        {{-1.0, 0.25}, {0.0, 0.5}, {1.0, 0.25}});
    struct Scheme {
        std::string name;
        OrthogonalScheme kind;
        ScenarioSet driver;
    };
    const std::vector<Scheme> schemes = {
        {"signs", OrthogonalScheme::symmetric_signs, ScenarioSet{uniform_signs()}},
        {"two_scenario", OrthogonalScheme::symmetric_signs,
         ScenarioSet{uniform_signs(), half_weight}},
        {"haar", OrthogonalScheme::haar_like, ScenarioSet{uniform_signs()}},
    };

    bool all_pass = true;
    std::string first_fail;
    for (const Scheme& scheme : schemes) {
        for (int n : sizes) {
            const SequenceModel model = make_orthogonal(n, scheme.kind, scheme.driver);
            for (int v = 0; v < 20; ++v) {
                std::vector<double> c(static_cast<std::size_t>(n));
                for (auto& x : c) x = v == 0 ? 1.0 : gen.uniform_int(-8, 8) * 0.25;
                const SimulationPlan plan{10000, 0xBEA7 + static_cast<std::uint64_t>(v), 4};
                const auto rep = verify_rademacher_mensov(model, c, plan);
                if (!rep.all_pass()) {
                    all_pass = false;
                    if (first_fail.empty())
                        first_fail = scheme.name + " n=" + std::to_string(n) +
                                     " v=" + std::to_string(v);
                }
            }
        }
    }

    // quasi-orthogonal m=1 window-average model against the inflated bound
    const std::vector<double> f{1.0, 1.0};
    for (int n : sizes) {
        SequenceModel model =
            make_m_dependent(ScenarioSet{uniform_signs()},
                             RandomFunctional({1, 2}, [](std::span<const double> x) {
                                 return 0.5 * (x[0] + x[1]);
                             }),
                             1, n);
        model.certificate = quasi_orthogonal_certificate(model, f, 32);
        for (int v = 0; v < 20; ++v) {
            std::vector<double> c(static_cast<std::size_t>(n));
            for (auto& x : c) x = v == 0 ? 1.0 : gen.uniform_int(-8, 8) * 0.25;
            const SimulationPlan plan{10000, 0x9A57 + static_cast<std::uint64_t>(v), 4};
            const auto rep = verify_rademacher_mensov(model, c, plan, f);
            if (!rep.all_pass()) {
                all_pass = false;
                if (first_fail.empty()) first_fail = "quasi n=" + std::to_string(n);
            }
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report(6, "rademacher-mensov bound over schemes, sizes, and the quasi variant",
           all_pass && seconds < 300.0,
           (first_fail.empty() ? "no exceedance" : "first fail " + first_fail) + ", " +
               fmt(seconds) + "s");
}

// ------------------------------------------------------------------------- 7
void criterion_maximal_stability() {
    struct Case {
        int m;
        RandomFunctional g;
    };
    const std::vector<Case> cases = {
        {0, coordinate(1)},
        {1, RandomFunctional({1, 2},
                             [](std::span<const double> x) { return 0.5 * (x[0] + x[1]); })},
        {2, RandomFunctional({1, 3}, [](std::span<const double> x) {
             return (x[0] + x[1] + x[2]) / 3.0;
         })},
    };
    bool all_stable = true;
    std::string detail;
    for (const Case& c : cases) {
        std::vector<double> ratios;
        for (int n : {32, 64, 128}) {
            const SequenceModel model =
                make_m_dependent(ScenarioSet{uniform_signs()}, c.g, c.m, n);
            double sum_sq = 0.0;
            for (int k = 1; k <= n; ++k) sum_sq += model.upper_moment(k, 2);
            std::vector<double> x_grid;
            for (double rho : {1.0, 1.5, 2.0}) x_grid.push_back(rho * std::sqrt(sum_sq));
            const SimulationPlan plan{10000, 0x57AB + static_cast<std::uint64_t>(c.m), 2};
            const auto rep = verify_kolmogorov_maximal(model, x_grid, plan);
            double ratio = 0.0;
            for (std::size_t i = 0; i < rep.x_grid.size(); ++i)
                ratio = std::max(ratio, rep.lhs[i] * rep.x_grid[i] * rep.x_grid[i] / sum_sq);
            ratios.push_back(ratio);
        }
        const double hi = *std::max_element(ratios.begin(), ratios.end());
        const double lo = *std::min_element(ratios.begin(), ratios.end());
        const bool stable = lo > 0.0 && hi / lo < 2.0;
        all_stable = all_stable && stable;
        detail += "m=" + std::to_string(c.m) + ":" + fmt(lo > 0 ? hi / lo : -1.0) + "x ";
    }
    report(7, "maximal-inequality ratio stability across n in {32,64,128}", all_stable, detail);
}

// ------------------------------------------------------------------------- 8
void criterion_slln_runs(const std::string& config_dir) {
    const auto started = std::chrono::steady_clock::now();
    struct Expectation {
        std::string config;
        bool wants_truncation_zero;
    };
    const std::vector<Expectation> runs = {
        {"thm41.json", false},
        {"thm42.json", true},
        {"thm43.json", false},
        {"cor41.json", false},
    };
    bool all_pass = true;
    std::string detail;
    for (const auto& r : runs) {
        try {
            ExperimentConfig cfg = load_config(config_dir + "/" + r.config);
            cfg.output_path = "/tmp/sublaw_acceptance_" + r.config + ".csv";
            const auto rows = run_experiment(cfg);
            bool ok = true;
            double final_ratio = -1.0;
            for (const auto& row : rows) {
                ok = ok && row.pass;
                if (row.statistic == "worst_abs_ratio" &&
                    row.n == cfg.plan.checkpoints.back())
                    final_ratio = row.value;
                if (r.wants_truncation_zero &&
                    row.statistic == "truncation_events_beyond_k_star")
                    ok = ok && row.value == 0.0;
            }
            std::remove(cfg.output_path.c_str());
            all_pass = all_pass && ok;
            detail += r.config + ":" + fmt(final_ratio) + " ";
        } catch (const std::exception& e) {
            all_pass = false;
            detail += r.config + ":threw ";
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report(8, "strong-law reference runs inside committed bands", all_pass && seconds < 600.0,
           detail + fmt(seconds) + "s");
}

// ------------------------------------------------------------------------- 9
void criterion_seq_analysis() {
    bool ok = true;
    std::string detail;

    for (const auto& [name, terms] : std::vector<std::pair<std::string, std::vector<double>>>{
             {"geometric",
              [] {
                  std::vector<double> t;
                  for (int i = 1; i <= 64; ++i) t.push_back(std::pow(4.0, -i));
                  return t;
              }()},
             {"polynomial", [] {
                  std::vector<double> t;
                  for (int i = 1; i <= 1024; ++i) t.push_back(1.0 / (double(i) * i));
                  return t;
              }()}}) {
        const EpsilonSequence e = epsilon_sequence(terms);
        double partial = 0.0, err = 0.0;
        for (std::size_t i = 0; i < e.b.size(); ++i) {
            partial += e.b[i];
            err = std::max(err, std::fabs(partial - (std::sqrt(e.tails[0]) -
                                                     std::sqrt(e.tails[i + 1]))));
            if (i > 0 && e.ratios[i] > e.ratios[i - 1]) ok = false;
        }
        if (err > 1e-12) ok = false;
        detail += name + ":" + fmt(err) + " ";
    }

    const std::vector<std::pair<std::string, std::vector<double>>> sequences = {
        {"linear",
         [] {
             std::vector<double> a;
             for (int i = 1; i <= 4096; ++i) a.push_back(double(i));
             return a;
         }()},
        {"quadratic",
         [] {
             std::vector<double> a;
             for (int i = 1; i <= 4096; ++i) a.push_back(double(i) * i);
             return a;
         }()},
        {"geometric", [] {
             std::vector<double> a;
             for (int i = 1; i <= 64; ++i) a.push_back(std::pow(2.0, i));
             return a;
         }()}};
    for (const auto& [name, a] : sequences) {
        for (double M : {1.5, 2.0, 4.0}) {
            const Subsequence s = wittmann_subsequence(a, M);
            for (std::size_t k = 0; k + 1 < s.indices.size(); ++k) {
                const double a_nk = a[s.indices[k] - 1];
                const double a_succ = a[s.indices[k]];
                const double a_next = a[s.indices[k + 1] - 1];
                if (!(M * a_nk <= a_next && a_next <= M * M * M * a_succ)) ok = false;
            }
            if (s.indices.size() < 2) ok = false;
        }
    }
    report(9, "epsilon telescoping exactness and zero-tolerance subsequence witnesses", ok,
           detail);
}

// ------------------------------------------------------------------------ 10
void criterion_determinism(const std::string& config_dir) {
    bool ok = true;
    std::string detail;
    try {
        ExperimentConfig cfg = load_config(config_dir + "/thm43.json");
        cfg.output_path = "/tmp/sublaw_det_a.csv";
        run(cfg);
        cfg.output_path = "/tmp/sublaw_det_b.csv";
        run(cfg);
        const std::string a = slurp("/tmp/sublaw_det_a.csv");
        const std::string b = slurp("/tmp/sublaw_det_b.csv");
        ok = !a.empty() && a == b;
        detail = std::to_string(a.size()) + " bytes compared";
        std::remove("/tmp/sublaw_det_a.csv");
        std::remove("/tmp/sublaw_det_b.csv");
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(10, "identical config and seed produce byte-identical csv", ok, detail);
}

} // namespace

int main(int argc, char** argv) {
    const std::string config_dir = argc > 1 ? argv[1] : "configs";
    const auto started = std::chrono::steady_clock::now();

    criteria_axioms_and_additivity();
    criterion_counterexample();
    criterion_choquet_equivalence();
    criterion_truncation_bound();
    criterion_rademacher_mensov();
    criterion_maximal_stability();
    criterion_slln_runs(config_dir);
    criterion_seq_analysis();
    criterion_determinism(config_dir);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("%d criterion(s) failed, total %.1fs\n", failures, seconds);
    return failures == 0 ? 0 : 1;
}
