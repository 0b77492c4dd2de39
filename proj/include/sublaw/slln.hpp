#pragma once

// Finite-horizon convergence experiments for the strong laws: condition
// checkers for each theorem's hypotheses, adversarial worst-case ratio
// trajectories at dyadic checkpoints, and the proof-side diagnostics
// (truncation events, centering drift, dyadic block increments). A finite run
// cannot verify a limit; "consistent" means the worst-case envelope is inside
// the calibrated band at the final checkpoint and still shrinking.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublaw/choquet.hpp"
#include "sublaw/errors.hpp"
#include "sublaw/expectation.hpp"
#include "sublaw/inequalities.hpp"
#include "sublaw/seq_analysis.hpp"
#include "sublaw/sequence_model.hpp"
#include "sublaw/sequences.hpp"

namespace sublaw {

// ---------------------------------------------------------------------------
// summability

enum class SummabilityVerdict { converged, unknown };

struct SummabilityReport {
    SummabilityVerdict verdict = SummabilityVerdict::unknown;
    double partial_sum = 0.0;
    double estimate = 0.0;                 // partial sum plus tail bound when present
    std::optional<double> tail_bound;
    std::vector<double> octave_sums;       // partial sums at prefix lengths 1,2,4,...
    std::string note;
};

/// Partial sums of terms[i] * weights[i]. A closed-form tail bound makes the
/// verdict rigorous; otherwise the octave increments must be shrinking with a
/// ratio bounded away from 1 on the observed prefix (a harmonic-like tail is
/// reported as not-converged-on-prefix, i.e. unknown).
inline SummabilityReport check_summability(std::span<const double> terms,
                                           std::span<const double> weights,
                                           std::optional<double> tail_bound = std::nullopt) {
    if (terms.size() != weights.size())
        throw std::invalid_argument("check_summability: terms/weights size mismatch");
    SummabilityReport report;
    report.tail_bound = tail_bound;

    double sum = 0.0;
    std::size_t next_octave = 1;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double term = terms[i] * weights[i];
        if (term < 0.0) throw std::invalid_argument("check_summability: negative summand");
        sum += term;
        if (i + 1 == next_octave) {
            report.octave_sums.push_back(sum);
            next_octave *= 2;
        }
    }
    report.partial_sum = sum;
    report.estimate = sum + (tail_bound ? *tail_bound : 0.0);

    if (tail_bound) {
        report.verdict = SummabilityVerdict::converged;
        report.note = "closed-form tail bound supplied";
        return report;
    }
    const auto& oct = report.octave_sums;
    if (oct.size() >= 4) {
        const double d1 = oct[oct.size() - 1] - oct[oct.size() - 2];
        const double d2 = oct[oct.size() - 2] - oct[oct.size() - 3];
        const double d3 = oct[oct.size() - 3] - oct[oct.size() - 4];
        if (d1 == 0.0 && d2 == 0.0) {
            report.verdict = SummabilityVerdict::converged;
            report.note = "prefix sum is exactly flat";
        } else if (d1 <= 0.95 * d2 && d2 <= 0.95 * d3) {
            report.verdict = SummabilityVerdict::converged;
            report.note = "octave increments decay geometrically on the prefix";
        } else {
            report.note = "octave increments do not decay on the prefix";
        }
    } else {
        report.note = "prefix too short to judge";
    }
    return report;
}

// ---------------------------------------------------------------------------
// domination

/// A reference variable with its own scenario family.
struct ReferenceVariable {
    ScenarioSet family;
    RandomFunctional f = coordinate(1);
    int horizon = 1;

    double upper_tail_capacity(double t) const {
        ScenarioModel model{family, horizon};
        const RandomFunctional g = f;
        return upper_capacity(model,
                              MeasurableEvent::path(g.window(), [g, t](std::span<const double> x) {
                                  return std::fabs(g(x)) > t;
                              }));
    }
};

struct DominationCheck {
    int n = 0;
    std::vector<double> t_grid;
    std::vector<double> lhs; // (1/n) sum_k V(|X_k| > t)
    std::vector<double> rhs; // C * V(|Z| > t)
    double C = 1.0;
    std::vector<bool> pass;

    bool all_pass() const {
        for (bool p : pass)
            if (!p) return false;
        return true;
    }
};

struct DominationResult {
    std::vector<DominationCheck> checks;    // one per checkpoint
    double choquet_moment_r = 0.0;          // C_V[|Z|^r]
    double tail_integral = 0.0;
    bool all_pass = true;
};

/// Condition (i)/(ii) checker: averaged per-coordinate tail capacities against
/// the dominating variable on a t grid, at each checkpoint, plus C_V[|Z|^r].
inline DominationResult check_domination(const SequenceModel& model, const ReferenceVariable& z,
                                         double C, double r, std::span<const double> t_grid,
                                         std::span<const int> checkpoints) {
    DominationResult result;
    const ChoquetMoment zm = choquet_moment(z.family, z.f, r, z.horizon);
    result.choquet_moment_r = zm.value;
    result.tail_integral = zm.tail_integral;

    std::vector<double> rhs;
    for (double t : t_grid) {
        if (t <= 0.0) throw std::invalid_argument("check_domination: t grid must be positive");
        rhs.push_back(C * z.upper_tail_capacity(t));
    }

    // prefix sums of per-coordinate tail capacities
    std::vector<std::vector<double>> prefix(t_grid.size());
    for (auto& p : prefix) p.reserve(static_cast<std::size_t>(model.horizon));
    std::vector<double> running(t_grid.size(), 0.0);
    for (int k = 1; k <= model.horizon; ++k) {
        const RandomFunctional xk = model.output(k);
        const StepSurvival surv =
            exact_survival(model.driver, abs_functional(xk), model.driver_horizon);
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
            running[ti] += surv.at_gt(t_grid[ti]);
            prefix[ti].push_back(running[ti]);
        }
    }

    for (int n : checkpoints) {
        if (n < 1 || n > model.horizon)
            throw std::invalid_argument("check_domination: checkpoint outside horizon");
        DominationCheck check;
        check.n = n;
        check.C = C;
        check.t_grid.assign(t_grid.begin(), t_grid.end());
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
            const double lhs = prefix[ti][static_cast<std::size_t>(n - 1)] / n;
            check.lhs.push_back(lhs);
            check.rhs.push_back(rhs[ti]);
            check.pass.push_back(lhs <= rhs[ti] + 1e-12);
        }
        result.all_pass = result.all_pass && check.all_pass();
        result.checks.push_back(std::move(check));
    }
    return result;
}

// ---------------------------------------------------------------------------
// normalizers

struct NormalizerSpec {
    enum class Kind { custom, power_phi, linear };

    Kind kind = Kind::linear;
    std::function<double(int)> custom;          // kind == custom
    double r = 1.0;                             // kind == power_phi
    std::optional<BlockStructure> blocks;       // kind == power_phi

    static NormalizerSpec linear() { return {}; }

    static NormalizerSpec custom_a_n(std::function<double(int)> a) {
        NormalizerSpec s;
        s.kind = Kind::custom;
        s.custom = std::move(a);
        return s;
    }

    static NormalizerSpec power_phi(double r, BlockStructure blocks) {
        if (!(r >= 1.0 && r < 2.0)) throw std::invalid_argument("r must lie in [1,2)");
        NormalizerSpec s;
        s.kind = Kind::power_phi;
        s.r = r;
        s.blocks = std::move(blocks);
        return s;
    }

    double value(int n) const {
        switch (kind) {
        case Kind::linear: return static_cast<double>(n);
        case Kind::custom: return custom(n);
        case Kind::power_phi:
            return std::pow(static_cast<double>(n), 1.0 / r) *
                   static_cast<double>(phi(*blocks, n));
        }
        throw std::logic_error("unreachable");
    }

    // custom normalizers must satisfy 1 <= a_n nondecreasing; the built-in
    // kinds satisfy it by construction.
    void validate(std::span<const int> sample_points) const {
        if (kind != Kind::custom) return;
        double prev = 1.0;
        for (int n : sample_points) {
            const double a = custom(n);
            if (a < 1.0) throw std::invalid_argument("normalizer must satisfy a_n >= 1");
            if (a < prev) throw std::invalid_argument("normalizer must be nondecreasing");
            prev = a;
        }
    }
};

// ---------------------------------------------------------------------------
// convergence reports

enum class Verdict { consistent, inconclusive, violated };

struct ConditionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CheckpointRow {
    int n = 0;
    double worst_upper = 0.0; // max over pool x reps of (S_n - sum E_bar[X_k]) / a_n
    double worst_lower = 0.0; // min over pool x reps of (S_n - sum e_bar[X_k]) / a_n
    double worst_abs = 0.0;   // max(worst_upper, -worst_lower)
};

struct BlockIncrementRow {
    int k = 0;            // dyadic level: increments over (2^k, 2^{k+1}]
    double worst = 0.0;   // max over pool x reps of max |S_n - S_{2^k}|
    double bound = 0.0;   // epsilon_{2^k} * 2^{k+1} (inflated for the quasi case)
    bool pass = false;
};

struct TruncationDiagnostics {
    long long total_events = 0;      // occurrences of X_k != X_k^(k^{1/r}) across all paths
    long long events_beyond_k_star = 0;
    int k_star = 0;                  // smallest k with k^{1/r} >= sup |X|
    std::vector<double> drift;       // per checkpoint: sum_k (E_bar[X_k]-E_bar[Xbar_k]) / n^{1/r}
};

struct ConvergenceReport {
    std::vector<int> checkpoints;
    std::vector<CheckpointRow> rows;
    std::vector<ConditionResult> condition_results;
    Verdict verdict = Verdict::inconclusive;
    double band = 0.0;
    std::vector<BlockIncrementRow> block_increments; // orthogonal runs
    std::optional<TruncationDiagnostics> truncation; // blockwise runs
};

namespace detail {

inline void check_checkpoints(std::span<const int> checkpoints, int horizon) {
    if (checkpoints.empty()) throw std::invalid_argument("need at least one checkpoint");
    int prev = 0;
    for (int n : checkpoints) {
        if (n <= prev) throw std::invalid_argument("checkpoints must be increasing");
        if (n > horizon) throw std::invalid_argument("checkpoint beyond horizon");
        prev = n;
    }
}

inline Verdict judge(const std::vector<CheckpointRow>& rows, double band) {
    const double final_abs = rows.back().worst_abs;
    bool decreasing = true;
    bool increasing = true;
    const std::size_t R = rows.size();
    if (R >= 3) {
        for (std::size_t i = R - 2; i < R; ++i) {
            // an exactly flat zero trajectory is as decayed as it gets
            decreasing = decreasing && (rows[i].worst_abs < rows[i - 1].worst_abs ||
                                        rows[i].worst_abs == 0.0);
            increasing = increasing && rows[i].worst_abs >= rows[i - 1].worst_abs &&
                         rows[i].worst_abs > 0.0;
        }
    } else {
        decreasing = false;
        increasing = false;
    }
    if (final_abs <= band && decreasing) return Verdict::consistent;
    if (final_abs > band && increasing) return Verdict::violated;
    return Verdict::inconclusive;
}

// Shared simulation sweep: streams every (selector, replication) path once,
// collecting checkpoint ratios and any per-path extras via callback.
template <typename PerPath>
std::vector<CheckpointRow> sweep(const SequenceModel& model, const SimulationPlan& plan,
                                 std::span<const int> checkpoints,
                                 const std::vector<double>& upper_centers,
                                 const std::vector<double>& lower_centers,
                                 const NormalizerSpec& normalizer, PerPath&& per_path) {
    const auto pool = pool_for_model(model, plan.selector_pool_size, plan.seed);
    std::vector<CheckpointRow> rows;
    for (int n : checkpoints)
        rows.push_back({n, -std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity(), 0.0});
    std::vector<double> norms;
    for (int n : checkpoints) norms.push_back(normalizer.value(n));

    for (std::size_t s = 0; s < pool.size(); ++s) {
        for (int rep = 0; rep < plan.replications; ++rep) {
            const auto outputs = model.simulate_outputs(
                pool[s], derive_key(plan.seed, s, static_cast<std::uint64_t>(rep)));
            double running = 0.0;
            std::size_t ci = 0;
            for (int k = 1; k <= model.horizon && ci < rows.size(); ++k) {
                running += outputs[static_cast<std::size_t>(k - 1)];
                if (k == rows[ci].n) {
                    const double up =
                        (running - upper_centers[static_cast<std::size_t>(k - 1)]) / norms[ci];
                    const double low =
                        (running - lower_centers[static_cast<std::size_t>(k - 1)]) / norms[ci];
                    rows[ci].worst_upper = std::max(rows[ci].worst_upper, up);
                    rows[ci].worst_lower = std::min(rows[ci].worst_lower, low);
                    ++ci;
                }
            }
            per_path(outputs);
        }
    }
    for (auto& row : rows) row.worst_abs = std::max(row.worst_upper, -row.worst_lower);
    return rows;
}

inline std::vector<int> sample_coordinates(int horizon, int max_samples = 64) {
    std::vector<int> coords;
    if (horizon <= max_samples) {
        for (int k = 1; k <= horizon; ++k) coords.push_back(k);
        return coords;
    }
    for (int k = 1; k <= max_samples / 2; ++k) coords.push_back(k);
    const int stride = horizon / (max_samples / 2);
    for (int k = stride; k <= horizon; k += stride) coords.push_back(k);
    coords.push_back(horizon);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    return coords;
}

} // namespace detail

// ---------------------------------------------------------------------------
// theorem runners

/// Centered m-dependent model, normalizer a_n: worst |S_n / a_n| trajectory.
/// Preconditions verified exactly: E_up[X_k] = e_low[X_k] = 0 on sampled
/// coordinates, and sum E_up[X_n^2] / a_n^2 summable on the prefix.
inline ConvergenceReport run_theorem41(const SequenceModel& model,
                                       const NormalizerSpec& normalizer,
                                       std::span<const int> checkpoints,
                                       const SimulationPlan& plan, double band) {
    detail::check_checkpoints(checkpoints, model.horizon);
    normalizer.validate(checkpoints);

    ConvergenceReport report;
    report.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    report.band = band;

    const auto coords = detail::sample_coordinates(model.horizon);
    const bool centered = model.zero_mean_certified(coords);
    report.condition_results.push_back(
        {"zero_mean_certificate", centered,
         centered ? "E_up = e_low = 0 on sampled coordinates" : "nonzero mean coordinate found"});
    if (!centered) throw HypothesisUnmet("theorem 4.1: coordinates are not exactly centered");

    std::vector<double> terms, weights;
    for (int k = 1; k <= model.horizon; ++k) {
        terms.push_back(model.upper_moment(k, 2));
        const double a = normalizer.value(k);
        weights.push_back(1.0 / (a * a));
    }
    const SummabilityReport sum_report = check_summability(terms, weights);
    const bool summable = sum_report.verdict == SummabilityVerdict::converged;
    report.condition_results.push_back({"summability", summable, sum_report.note});
    if (!summable) throw HypothesisUnmet("theorem 4.1: sum E[X_n^2]/a_n^2 not summable on prefix");

    const std::vector<double> zeros(static_cast<std::size_t>(model.horizon), 0.0);
    report.rows = detail::sweep(model, plan, checkpoints, zeros, zeros, normalizer,
                                [](std::span<const double>) {});
    report.verdict = detail::judge(report.rows, band);
    return report;
}

/// Blockwise m-dependent model with a dominating variable: worst centered
/// ratios against n^{1/r} Phi(n), plus the proof-side truncation diagnostics.
inline ConvergenceReport run_theorem42(const SequenceModel& model, const ReferenceVariable& z,
                                       double r, const BlockStructure& blocks, double C,
                                       std::span<const double> t_grid,
                                       std::span<const int> checkpoints,
                                       const SimulationPlan& plan, double band) {
    if (!(r >= 1.0 && r < 2.0)) throw std::invalid_argument("r must lie in [1,2)");
    detail::check_checkpoints(checkpoints, model.horizon);

    ConvergenceReport report;
    report.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    report.band = band;

    const DominationResult dom = check_domination(model, z, C, r, t_grid, checkpoints);
    report.condition_results.push_back(
        {"domination", dom.all_pass,
         "averaged tail capacities vs C * V(|Z| > t) on the t grid"});
    report.condition_results.push_back(
        {"choquet_moment_finite", std::isfinite(dom.choquet_moment_r),
         "C_V[|Z|^r] = " + std::to_string(dom.choquet_moment_r)});
    if (!dom.all_pass) throw HypothesisUnmet("theorem 4.2: domination condition fails");
    if (!std::isfinite(dom.choquet_moment_r))
        throw HypothesisUnmet("theorem 4.2: C_V[|Z|^r] not finite");

    // extended expectations under the proof's truncation schedule c = 2^j k^{1/r}
    std::vector<double> upper_centers, lower_centers, upper_trunc;
    std::vector<double> trunc_levels;
    double sup_abs = 0.0;
    for (int k = 1; k <= model.horizon; ++k) {
        const double level = std::pow(static_cast<double>(k), 1.0 / r);
        trunc_levels.push_back(level);
        std::vector<double> schedule;
        for (int j = 0; j <= 6; ++j) schedule.push_back(std::ldexp(level, j));
        const RandomFunctional xk = model.output(k);
        const auto up = extended_expectation(model.driver, xk, schedule, 1e-6,
                                             model.driver_horizon);
        const auto low = extended_lower_expectation(model.driver, xk, schedule, 1e-6,
                                                    model.driver_horizon);
        if (!up.converged || !low.converged)
            throw HypothesisUnmet("theorem 4.2: extended expectation diverges for coordinate " +
                                  std::to_string(k));
        upper_centers.push_back((k == 1 ? 0.0 : upper_centers.back()) + up.value);
        lower_centers.push_back((k == 1 ? 0.0 : lower_centers.back()) + low.value);
        upper_trunc.push_back(upper_expectation_exact(model.driver, truncate(xk, level),
                                                      model.driver_horizon));
        for (double v : achievable_values(model.driver, abs_functional(xk)))
            sup_abs = std::max(sup_abs, v);
    }

    TruncationDiagnostics trunc;
    trunc.k_star = 1;
    while (trunc.k_star <= model.horizon &&
           trunc_levels[static_cast<std::size_t>(trunc.k_star - 1)] < sup_abs)
        ++trunc.k_star;
    for (std::size_t ci = 0; ci < checkpoints.size(); ++ci) {
        const int n = checkpoints[ci];
        double drift = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double ebar = upper_centers[static_cast<std::size_t>(k - 1)] -
                                (k == 1 ? 0.0 : upper_centers[static_cast<std::size_t>(k - 2)]);
            drift += ebar - upper_trunc[static_cast<std::size_t>(k - 1)];
        }
        trunc.drift.push_back(drift / std::pow(static_cast<double>(n), 1.0 / r));
    }

    NormalizerSpec normalizer = NormalizerSpec::power_phi(r, blocks);
    report.rows = detail::sweep(
        model, plan, checkpoints, upper_centers, lower_centers, normalizer,
        [&](std::span<const double> outputs) {
            for (int k = 1; k <= model.horizon; ++k) {
                const double v = outputs[static_cast<std::size_t>(k - 1)];
                const double level = trunc_levels[static_cast<std::size_t>(k - 1)];
                if (std::fabs(v) > level) {
                    ++trunc.total_events;
                    if (k >= trunc.k_star) ++trunc.events_beyond_k_star;
                }
            }
        });
    report.truncation = std::move(trunc);
    report.verdict = detail::judge(report.rows, band);
    return report;
}

/// Orthogonal model with E_up[X_n] = 0: worst |S_n / n| at dyadic checkpoints
/// plus the proof's dyadic block increments against the epsilon sequence.
inline ConvergenceReport run_theorem43(const SequenceModel& model,
                                       std::span<const int> checkpoints,
                                       const SimulationPlan& plan, double band,
                                       double rm_inflation = 1.0) {
    detail::check_checkpoints(checkpoints, model.horizon);

    ConvergenceReport report;
    report.checkpoints.assign(checkpoints.begin(), checkpoints.end());
    report.band = band;

    if (!model.certificate)
        throw MissingCertificate("theorem 4.3 needs an orthogonality certificate");
    const bool orthogonal = model.certificate->max_violation <= 1e-12;
    report.condition_results.push_back(
        {"orthogonality_certificate", orthogonal,
         "max violation " + std::to_string(model.certificate->max_violation)});
    if (!orthogonal) throw HypothesisUnmet("theorem 4.3: orthogonality certificate fails");

    bool centered = true;
    for (int k : detail::sample_coordinates(model.horizon))
        centered = centered && model.upper_moment(k, 1) == 0.0;
    report.condition_results.push_back(
        {"zero_upper_mean", centered, "E_up[X_n] = 0 on sampled coordinates"});
    if (!centered) throw HypothesisUnmet("theorem 4.3: E_up[X_n] != 0");

    std::vector<double> terms, weights;
    for (int k = 1; k <= model.horizon; ++k) {
        terms.push_back(model.upper_moment(k, 2));
        const double lg = std::log2(static_cast<double>(k));
        weights.push_back(lg * lg / (static_cast<double>(k) * k));
    }
    const SummabilityReport sum_report = check_summability(terms, weights);
    const bool summable = sum_report.verdict == SummabilityVerdict::converged;
    report.condition_results.push_back({"summability", summable, sum_report.note});
    if (!summable)
        throw HypothesisUnmet("theorem 4.3: sum sigma_k^2 (log2 k)^2 / k^2 not summable");

    // epsilon sequence from the summability terms; dyadic increments compare
    // against epsilon_{2^k} * 2^{k+1}, scaled by sqrt(inflation) in the
    // quasi-orthogonal variant where the maximal bound carries (1 + 2 sum f)
    std::vector<double> summands;
    for (std::size_t i = 0; i < terms.size(); ++i) summands.push_back(terms[i] * weights[i]);
    const EpsilonSequence eps = epsilon_sequence(summands);

    std::vector<int> levels; // dyadic k with 2^{k+1} <= horizon
    for (int k = 0; (2 << k) <= model.horizon; ++k) levels.push_back(k);
    std::vector<double> level_worst(levels.size(), 0.0);

    const std::vector<double> zeros(static_cast<std::size_t>(model.horizon), 0.0);
    report.rows = detail::sweep(
        model, plan, checkpoints, zeros, zeros, NormalizerSpec::linear(),
        [&](std::span<const double> outputs) {
            double running = 0.0;
            std::vector<double> prefix(outputs.size() + 1, 0.0);
            for (std::size_t i = 0; i < outputs.size(); ++i) {
                running += outputs[i];
                prefix[i + 1] = running;
            }
            for (std::size_t li = 0; li < levels.size(); ++li) {
                const int base = 1 << levels[li];
                double worst = 0.0;
                for (int n = base + 1; n <= 2 * base; ++n)
                    worst = std::max(worst, std::fabs(prefix[static_cast<std::size_t>(n)] -
                                                      prefix[static_cast<std::size_t>(base)]));
                level_worst[li] = std::max(level_worst[li], worst);
            }
        });

    const double scale = std::sqrt(rm_inflation);
    for (std::size_t li = 0; li < levels.size(); ++li) {
        BlockIncrementRow row;
        row.k = levels[li];
        row.worst = level_worst[li];
        const int base = 1 << levels[li];
        const double epsilon = std::sqrt(eps.ratios[static_cast<std::size_t>(base - 1)]);
        row.bound = scale * epsilon * 2.0 * base;
        row.pass = row.worst <= row.bound;
        report.block_increments.push_back(row);
    }
    report.verdict = detail::judge(report.rows, band);
    return report;
}

/// Quasi-orthogonal variant: certificate against the supplied f, and the
/// dyadic increment bounds inflated by 1 + 2 sum_{j>=1} f(j).
inline ConvergenceReport run_corollary41(const SequenceModel& model, std::span<const double> f,
                                         std::span<const int> checkpoints,
                                         const SimulationPlan& plan, double band) {
    const OrthogonalityCertificate cert = quasi_orthogonal_certificate(model, f, 64);
    if (cert.max_violation > 1e-12)
        throw HypothesisUnmet("corollary 4.1: quasi-orthogonality certificate fails");

    SequenceModel certified = model;
    certified.certificate = cert;
    double inflation = 1.0;
    for (std::size_t j = 1; j < f.size(); ++j) inflation += 2.0 * f[j];

    ConvergenceReport report = run_theorem43(certified, checkpoints, plan, band, inflation);
    report.condition_results.insert(
        report.condition_results.begin(),
        {"quasi_orthogonality_certificate", true,
         "max violation " + std::to_string(cert.max_violation) + ", inflation " +
             std::to_string(inflation)});
    return report;
}

// ---------------------------------------------------------------------------
// kronecker

struct KroneckerReport {
    bool cauchy_on_prefix = false;
    std::size_t k0 = 0;           // 1-based start of the settled tail
    double tail_oscillation = 0.0;
    double weighted_average = 0.0; // (1/a_N) sum_{k<=N} x_k
    double bound = 0.0;
    bool pass = false;            // |weighted_average| <= bound when cauchy
};

/// Numerical Kronecker lemma check: when the partial sums T_k of x_k / a_k
/// settle (tail oscillation below tol), the Abel-summation bound
/// |(1/a_N) sum x_k| <= (a_1/a_N)|T_N| + (a_{k0}/a_N) 2 max|T| + osc
/// must hold; without a settled tail the check reports no conclusion.
inline KroneckerReport kronecker_check(std::span<const double> x, std::span<const double> a,
                                       double tol = 1e-3) {
    if (x.size() != a.size() || x.empty())
        throw std::invalid_argument("kronecker_check: x and a must be nonempty and matched");
    for (std::size_t i = 1; i < a.size(); ++i)
        if (!(a[i] >= a[i - 1]) || a[i] <= 0.0)
            throw std::invalid_argument("kronecker_check: a must be positive nondecreasing");

    const std::size_t n = x.size();
    std::vector<double> T(n);
    double run = 0.0, xsum = 0.0, max_abs_T = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        run += x[i] / a[i];
        T[i] = run;
        xsum += x[i];
        max_abs_T = std::max(max_abs_T, std::fabs(run));
    }

    KroneckerReport report;
    report.weighted_average = xsum / a[n - 1];

    // smallest k0 whose suffix oscillation is below tol; the settled window
    // must cover at least the last half of the prefix, otherwise the trailing
    // points alone would vacuously qualify
    double suffix_max = T[n - 1], suffix_min = T[n - 1];
    std::size_t k0 = n; // sentinel: not found
    std::vector<double> osc_at(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        suffix_max = std::max(suffix_max, T[i]);
        suffix_min = std::min(suffix_min, T[i]);
        osc_at[i] = suffix_max - suffix_min;
        if (osc_at[i] <= tol && i <= n / 2) k0 = i;
    }
    if (k0 == n) {
        report.cauchy_on_prefix = false;
        return report;
    }
    report.cauchy_on_prefix = true;
    report.k0 = k0 + 1;
    report.tail_oscillation = osc_at[k0];
    report.bound = (a[0] / a[n - 1]) * std::fabs(T[n - 1]) +
                   (a[k0] / a[n - 1]) * 2.0 * max_abs_T + osc_at[k0];
    report.pass = std::fabs(report.weighted_average) <= report.bound + 1e-12;
    return report;
}

} // namespace sublaw
