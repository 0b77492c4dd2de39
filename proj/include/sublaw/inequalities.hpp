#pragma once

// Numerical verification harness for the truncation and maximal inequalities.
// Capacity exceedance probabilities are estimated as a max over a finite
// selector pool, a lower bound of the capacity, so every reported violation
// of an upper bound is a true violation while a pass is evidence, not proof.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sublaw/choquet.hpp"
#include "sublaw/distribution.hpp"
#include "sublaw/errors.hpp"
#include "sublaw/expectation.hpp"
#include "sublaw/selector.hpp"
#include "sublaw/sequence_model.hpp"
#include "sublaw/sequences.hpp"

namespace sublaw {

enum class Centering { upper, lower, none };

/// Per-replication running-max statistics for one selector.
struct MaximalStatistic {
    std::vector<double> values; // one per replication
    int n = 0;
    Centering centering = Centering::none;
    std::string selector_id;
};

/// Grid-indexed inequality check: pass[i] holds exactly when lhs[i] <= rhs[i].
struct InequalityReport {
    std::vector<double> x_grid;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> ratio; // lhs / rhs, 0 when rhs = 0
    std::vector<bool> pass;
    double constant_used = 1.0;

    void push(double x, double l, double r, double slack = 0.0) {
        x_grid.push_back(x);
        lhs.push_back(l);
        rhs.push_back(r);
        ratio.push_back(r == 0.0 ? (l == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                                 : l / r);
        pass.push_back(l <= r + slack);
    }

    bool all_pass() const {
        for (bool p : pass)
            if (!p) return false;
        return true;
    }
};

namespace detail {

inline std::vector<Selector> pool_for_model(const SequenceModel& model, int pool_size,
                                            std::uint64_t seed) {
    return make_selector_pool(model.driver, sum_of_coordinates(1, model.driver_horizon),
                              static_cast<std::size_t>(pool_size), seed);
}

} // namespace detail

/// E_up[S_k] for k = 1..n, computed exactly. Routes: zero-mean certified
/// coordinates give 0; pairwise-disjoint windows give the running sum of
/// per-coordinate expectations (independence additivity); small joint windows
/// fall back to direct backward induction. Otherwise CenteringUnavailable.
inline std::vector<double> partial_sum_expectations(const SequenceModel& model, int n,
                                                    bool upper = true,
                                                    std::uint64_t cap = kDefaultEnumerationCap) {
    std::vector<double> uppers, lowers;
    for (int k = 1; k <= n; ++k) {
        uppers.push_back(model.upper_moment(k, 1, cap));
        lowers.push_back(model.lower_moment(k, 1, cap));
    }
    bool all_zero = true;
    for (int k = 0; k < n; ++k)
        all_zero = all_zero && uppers[static_cast<std::size_t>(k)] == 0.0 &&
                   lowers[static_cast<std::size_t>(k)] == 0.0;
    if (all_zero) return std::vector<double>(static_cast<std::size_t>(n), 0.0);

    bool disjoint = true;
    for (int k = 1; k < n; ++k)
        disjoint = disjoint && model.output(k + 1).window().first > model.output(k).window().last;
    if (disjoint) {
        std::vector<double> centers(static_cast<std::size_t>(n), 0.0);
        double run = 0.0;
        for (int k = 0; k < n; ++k) {
            run += upper ? uppers[static_cast<std::size_t>(k)] : lowers[static_cast<std::size_t>(k)];
            centers[static_cast<std::size_t>(k)] = run;
        }
        return centers;
    }

    // joint enumeration when the combined window is small enough
    try {
        std::vector<double> centers;
        for (int k = 1; k <= n; ++k) {
            RandomFunctional sum = model.output(1);
            for (int i = 2; i <= k; ++i) sum = add(sum, model.output(i));
            centers.push_back(upper
                                  ? upper_expectation_exact(model.driver, sum,
                                                            model.driver_horizon, cap)
                                  : lower_expectation(model.driver, sum, model.driver_horizon, cap));
        }
        return centers;
    } catch (const EnumerationCapExceeded&) {
        throw CenteringUnavailable(
            "E[S_k] is not exactly computable for this model and no fallback applies");
    }
}

/// Simulates max_{k<=n}(S_k - center_k) per replication for every selector in
/// the pool; center_k is E_up[S_k], e_low[S_k], or 0 by centering mode.
inline std::vector<MaximalStatistic> max_partial_sum_stats(const SequenceModel& model,
                                                           const SimulationPlan& plan,
                                                           Centering centering) {
    const int n = model.horizon;
    std::vector<double> centers(static_cast<std::size_t>(n), 0.0);
    if (centering == Centering::upper) centers = partial_sum_expectations(model, n, true);
    if (centering == Centering::lower) centers = partial_sum_expectations(model, n, false);

    const auto pool = detail::pool_for_model(model, plan.selector_pool_size, plan.seed);
    std::vector<MaximalStatistic> stats;
    for (std::size_t s = 0; s < pool.size(); ++s) {
        MaximalStatistic ms;
        ms.n = n;
        ms.centering = centering;
        ms.selector_id = pool[s].id();
        ms.values.reserve(static_cast<std::size_t>(plan.replications));
        for (int rep = 0; rep < plan.replications; ++rep) {
            const auto outputs = model.simulate_outputs(
                pool[s], derive_key(plan.seed, s, static_cast<std::uint64_t>(rep)));
            double running = 0.0, best = -std::numeric_limits<double>::infinity();
            for (int k = 1; k <= n; ++k) {
                running += outputs[static_cast<std::size_t>(k - 1)];
                best = std::max(best, running - centers[static_cast<std::size_t>(k - 1)]);
            }
            ms.values.push_back(best);
        }
        stats.push_back(std::move(ms));
    }
    return stats;
}

/// Exact two-sided check of E_up[|f| ^ c] <= int_0^c V(|f| > x) dx on an
/// enumerable instance, over a grid of truncation levels.
inline InequalityReport verify_truncation_bound(const ScenarioSet& driver,
                                                const RandomFunctional& f, int horizon,
                                                std::span<const double> c_grid,
                                                std::uint64_t cap = kDefaultEnumerationCap) {
    const RandomFunctional magnitude = abs_functional(f);
    const StepSurvival survival = exact_survival(driver, magnitude, horizon, cap);
    InequalityReport report;
    for (double c : c_grid) {
        if (c < 0.0) throw std::invalid_argument("truncation grid must be nonnegative");
        const double lhs =
            c == 0.0 ? 0.0
                     : upper_expectation_exact(driver, truncate(magnitude, c), horizon, cap);
        const double rhs = integral_survival_gt(survival, c);
        report.push(c, lhs, rhs, 1e-12);
    }
    return report;
}

/// Monte Carlo variant: per selector, one batch of |f| samples feeds both the
/// clamped means (left side) and the exceedance frequencies whose integral
/// forms the right side. Both sides are pool maxima, hence lower bounds of
/// their exact counterparts; rows carry a 3-sigma allowance on the left.
inline InequalityReport verify_truncation_bound_mc(const ScenarioSet& driver,
                                                   const RandomFunctional& f, int horizon,
                                                   std::span<const double> c_grid,
                                                   const McPlan& plan) {
    if (f.window().last > horizon) throw InvalidWindow("functional window exceeds horizon");
    const RandomFunctional magnitude = abs_functional(f);
    const int length = magnitude.window().last;

    std::vector<std::vector<double>> samples(plan.selector_pool.size());
    for (std::size_t s = 0; s < plan.selector_pool.size(); ++s) {
        samples[s].reserve(static_cast<std::size_t>(plan.replications));
        for (int rep = 0; rep < plan.replications; ++rep) {
            const auto path = simulate_driver_path(
                driver, plan.selector_pool[s], length,
                derive_key(plan.seed, s, static_cast<std::uint64_t>(rep)));
            samples[s].push_back(magnitude.eval_on_path(path));
        }
    }

    InequalityReport report;
    const int cells = 64;
    for (double c : c_grid) {
        if (c < 0.0) throw std::invalid_argument("truncation grid must be nonnegative");
        double lhs = 0.0, lhs_sd = 0.0, rhs = 0.0;
        for (const auto& batch : samples) {
            double sum = 0.0, sum_sq = 0.0;
            for (double v : batch) {
                const double clamped = std::min(v, c);
                sum += clamped;
                sum_sq += clamped * clamped;
            }
            const double nrep = static_cast<double>(batch.size());
            const double mean = sum / nrep;
            if (mean > lhs) {
                lhs = mean;
                const double var = std::max(0.0, (sum_sq - nrep * mean * mean) / (nrep - 1.0));
                lhs_sd = std::sqrt(var / nrep);
            }
            // left-endpoint sum over x in [0, c] of this batch's strict
            // exceedance; the integrand is nonincreasing, so this never
            // undershoots the batch's own layer-cake integral
            double integral = 0.0;
            for (int i = 0; i < cells; ++i) {
                const double x = c * static_cast<double>(i) / cells;
                int count = 0;
                for (double v : batch)
                    if (v > x) ++count;
                integral += (static_cast<double>(count) / nrep) * (c / cells);
            }
            rhs = std::max(rhs, integral);
        }
        report.push(c, lhs, rhs, 3.0 * lhs_sd + 1e-12);
    }
    return report;
}

/// Capacity form of the Kolmogorov maximal inequality for the m-dependent
/// construction: empirical exceedance of max_k sum_{i<=k}(X_i - E_up[X_i])
/// against constant * x^{-2} * sum E_up[X_i^2]. The default constant follows
/// the split into m+1 independent subsequences: (m+1)^2 for n >= m+1 and the
/// sum-of-squares form (m+1)(m+2)(2m+3)/6 for shorter runs.
inline InequalityReport verify_kolmogorov_maximal(const SequenceModel& model,
                                                  std::span<const double> x_grid,
                                                  const SimulationPlan& plan,
                                                  double constant_override = 0.0) {
    const int n = model.horizon;
    const int m = model.m;
    double constant = constant_override;
    if (constant <= 0.0)
        constant = n < m + 1
                       ? static_cast<double>((m + 1) * (m + 2) * (2 * m + 3)) / 6.0
                       : static_cast<double>((m + 1) * (m + 1));

    std::vector<double> term_centers, second_moments;
    double sum_sq = 0.0;
    for (int k = 1; k <= n; ++k) {
        term_centers.push_back(model.upper_moment(k, 1));
        sum_sq += model.upper_moment(k, 2);
    }

    // one simulation batch per selector; every grid point reuses the maxima
    const auto pool = detail::pool_for_model(model, plan.selector_pool_size, plan.seed);
    std::vector<std::vector<double>> maxima(pool.size());
    for (std::size_t s = 0; s < pool.size(); ++s) {
        maxima[s].reserve(static_cast<std::size_t>(plan.replications));
        for (int rep = 0; rep < plan.replications; ++rep) {
            const auto outputs = model.simulate_outputs(
                pool[s], derive_key(plan.seed, s, static_cast<std::uint64_t>(rep)));
            double running = 0.0, best = -std::numeric_limits<double>::infinity();
            for (int k = 1; k <= n; ++k) {
                running += outputs[static_cast<std::size_t>(k - 1)] -
                           term_centers[static_cast<std::size_t>(k - 1)];
                best = std::max(best, running);
            }
            maxima[s].push_back(best);
        }
    }

    InequalityReport report;
    report.constant_used = constant;
    for (double x : x_grid) {
        if (x <= 0.0) throw std::invalid_argument("x grid must be positive");
        double worst_freq = 0.0;
        for (const auto& batch : maxima) {
            int exceed = 0;
            for (double best : batch)
                if (best >= x) ++exceed;
            worst_freq =
                std::max(worst_freq, static_cast<double>(exceed) / plan.replications);
        }
        report.push(x, worst_freq, constant * sum_sq / (x * x));
    }
    return report;
}

/// Rademacher-Mensov bound: estimate of E_up[max_k (sum_{j<=k} c_j X_j)^2]
/// against (log2 4n)^2 sum c_j^2, inflated by 1 + 2 sum f(j) for the
/// quasi-orthogonal variant. Requires the model to carry a certificate whose
/// violations are zero (orthogonal) or within the f-bound (quasi). Uses the
/// exact backward induction when the driver window is small enough.
inline InequalityReport verify_rademacher_mensov(const SequenceModel& model,
                                                 std::span<const double> coefficients,
                                                 const SimulationPlan& plan,
                                                 std::span<const double> quasi_f = {}) {
    if (!model.certificate)
        throw MissingCertificate("rademacher-mensov needs an orthogonality certificate");
    const int n = model.horizon;
    if (static_cast<int>(coefficients.size()) != n)
        throw std::invalid_argument("coefficient count must equal the horizon");

    double sum_c2 = 0.0;
    for (double c : coefficients) sum_c2 += c * c;
    const double log_term = std::log2(4.0 * n);
    double inflation = 1.0;
    for (std::size_t j = 1; j < quasi_f.size(); ++j) inflation += 2.0 * quasi_f[j];
    const double rhs = inflation * log_term * log_term * sum_c2;

    const std::vector<double> c(coefficients.begin(), coefficients.end());
    auto statistic = [&model, c, n](std::span<const double> outputs) {
        double running = 0.0, best = 0.0;
        for (int k = 1; k <= n; ++k) {
            running += c[static_cast<std::size_t>(k - 1)] * outputs[static_cast<std::size_t>(k - 1)];
            best = std::max(best, running * running);
        }
        return best;
    };

    double lhs = 0.0;
    bool exact = false;
    try {
        const auto maps = model.coordinate_maps;
        RandomFunctional joint(
            {1, model.driver_horizon}, [maps, statistic](std::span<const double> driver_path) {
                std::vector<double> outputs;
                outputs.reserve(maps.size());
                for (const auto& f : maps) outputs.push_back(f.eval_on_path(driver_path));
                return statistic(outputs);
            });
        lhs = upper_expectation_exact(model.driver, joint, model.driver_horizon, 1 << 20);
        exact = true;
    } catch (const EnumerationCapExceeded&) {
    }

    if (!exact) {
        const auto pool = detail::pool_for_model(model, plan.selector_pool_size, plan.seed);
        for (std::size_t s = 0; s < pool.size(); ++s) {
            double total = 0.0;
            for (int rep = 0; rep < plan.replications; ++rep) {
                const auto outputs = model.simulate_outputs(
                    pool[s], derive_key(plan.seed, s, static_cast<std::uint64_t>(rep)));
                total += statistic(outputs);
            }
            lhs = std::max(lhs, total / plan.replications);
        }
    }

    InequalityReport report;
    report.constant_used = inflation;
    report.push(static_cast<double>(n), lhs, rhs, exact ? 1e-12 : 0.0);
    return report;
}

} // namespace sublaw
