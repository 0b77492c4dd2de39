#pragma once

// Sublinear expectation over a finite scenario family at finite horizon:
//   E_up[f] = sup over history-dependent selectors of E_selector[f].
// For discrete scenarios the supremum is attained and computed exactly by
// backward induction over the window coordinates; the one-step maximum at
// each history node reproduces the iterated-supremum form of independence.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublaw/distribution.hpp"
#include "sublaw/errors.hpp"
#include "sublaw/functional.hpp"
#include "sublaw/rng.hpp"
#include "sublaw/selector.hpp"

namespace sublaw {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

namespace detail {

inline void check_enumeration_cap(const ScenarioSet& driver, Window w, std::uint64_t cap) {
    // Per-node branching is one child per (scenario, atom) pair, so the leaf
    // count of the recursion is that sum raised to the window length.
    std::uint64_t branching = 0;
    for (const auto& s : driver.scenarios()) branching += s.support_size();
    std::uint64_t leaves = 1;
    for (int t = w.first; t <= w.last; ++t) {
        if (branching > 1 && leaves > cap / branching)
            throw EnumerationCapExceeded("state space exceeds enumeration cap of " +
                                         std::to_string(cap) + " leaves");
        leaves *= branching;
    }
    if (leaves > cap)
        throw EnumerationCapExceeded("state space exceeds enumeration cap of " +
                                     std::to_string(cap) + " leaves");
}

// Backward induction. `values` holds the realized window coordinates so far;
// at depth t the adversary picks the scenario maximizing the one-step
// expected continuation (ties: lowest index, which the < comparison gives).
inline double sup_continuation(const ScenarioSet& driver, const RandomFunctional& f,
                               int depth, std::vector<double>& values) {
    const Window w = f.window();
    if (depth > w.last - w.first) return f(values);
    double best = -std::numeric_limits<double>::infinity();
    for (const DiscreteDistribution& scenario : driver.scenarios()) {
        double expected = 0.0;
        for (const Atom& a : scenario.atoms()) {
            values.push_back(a.value);
            expected += a.probability * sup_continuation(driver, f, depth + 1, values);
            values.pop_back();
        }
        if (expected > best) best = expected;
    }
    return best;
}

} // namespace detail

/// Exact E_up[f]: supremum over all selectors of the linear expectation of f,
/// by backward induction from the last window coordinate backward.
inline double upper_expectation_exact(const ScenarioSet& driver, const RandomFunctional& f,
                                      int horizon,
                                      std::uint64_t enumeration_cap = kDefaultEnumerationCap) {
    const Window w = f.window();
    if (w.last > horizon)
        throw InvalidWindow("functional window ends at " + std::to_string(w.last) +
                            " beyond horizon " + std::to_string(horizon));
    detail::check_enumeration_cap(driver, w, enumeration_cap);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(w.size()));
    return detail::sup_continuation(driver, f, 0, values);
}

/// e_low[f] = -E_up[-f].
inline double lower_expectation(const ScenarioSet& driver, const RandomFunctional& f, int horizon,
                                std::uint64_t enumeration_cap = kDefaultEnumerationCap) {
    return -upper_expectation_exact(driver, negate(f), horizon, enumeration_cap);
}

/// Point estimate with confidence interval and replication metadata.
struct EstimateWithCI {
    enum class Kind { exact, lower_bound_mc };

    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int replications = 0;
    std::uint64_t seed = 0;
    Kind kind = Kind::exact;
    std::string selector_id;

    static EstimateWithCI exact(double v) { return {v, v, v, 0, 0, Kind::exact, "exact"}; }
};

struct McPlan {
    int replications = 0;
    std::uint64_t seed = 0;
    std::vector<Selector> selector_pool;
};

/// Simulates one path of `length` coordinates under a selector. The rng key
/// must already encode (seed, selector, replication). Rolling-hash selectors
/// take a linear-time fast path equivalent to hashing each full prefix.
inline std::vector<double> simulate_driver_path(const ScenarioSet& driver,
                                                const Selector& selector, int length,
                                                std::uint64_t rng_key, bool sign_flip = false) {
    RngStream rng(rng_key);
    std::vector<double> path;
    path.reserve(static_cast<std::size_t>(length));
    if (selector.kind() == SelectorKind::rolling_hash) {
        std::uint64_t h = selector.hash_key();
        for (int t = 1; t <= length; ++t) {
            const int idx = selector.pick_from_hash(h);
            double v = driver[static_cast<std::size_t>(idx)].sample(rng.next_uniform01());
            if (sign_flip) v = -v;
            path.push_back(v);
            h = Selector::fold_value(h, v);
        }
        return path;
    }
    for (int t = 1; t <= length; ++t) {
        const int idx = selector.choose(path);
        if (idx < 0 || idx >= static_cast<int>(driver.size()))
            throw std::out_of_range("selector produced scenario index " + std::to_string(idx) +
                                    " outside the family");
        double v = driver[static_cast<std::size_t>(idx)].sample(rng.next_uniform01());
        if (sign_flip) v = -v;
        path.push_back(v);
    }
    return path;
}

/// Monte Carlo estimate of E_up[f]: the max over the selector pool of the
/// empirical mean, with a 95% normal CI for the maximizing selector. This is
/// a lower-bound estimator of the true supremum (finitely many strategies),
/// and is labeled as such.
inline EstimateWithCI upper_expectation_mc(const ScenarioSet& driver, const RandomFunctional& f,
                                           const McPlan& plan) {
    if (plan.replications < 2)
        throw std::invalid_argument("upper_expectation_mc: need at least 2 replications");
    if (plan.selector_pool.empty())
        throw std::invalid_argument("upper_expectation_mc: selector pool must be nonempty");

    const int length = f.window().last;
    EstimateWithCI best;
    bool have_best = false;
    for (std::size_t s = 0; s < plan.selector_pool.size(); ++s) {
        const Selector& sel = plan.selector_pool[s];
        double sum = 0.0, sum_sq = 0.0;
        for (int rep = 0; rep < plan.replications; ++rep) {
            const std::uint64_t key = derive_key(plan.seed, s, static_cast<std::uint64_t>(rep));
            const auto path = simulate_driver_path(driver, sel, length, key);
            const double v = f.eval_on_path(path);
            sum += v;
            sum_sq += v * v;
        }
        const double n = plan.replications;
        const double mean = sum / n;
        double var = (sum_sq - n * mean * mean) / (n - 1.0);
        if (var < 0.0) var = 0.0;
        const double half_width = 1.96 * std::sqrt(var / n);
        if (!have_best || mean > best.value) {
            best = {mean,
                    mean - half_width,
                    mean + half_width,
                    plan.replications,
                    plan.seed,
                    EstimateWithCI::Kind::lower_bound_mc,
                    sel.id()};
            have_best = true;
        }
    }
    return best;
}

/// Result of the truncated-limit extension E_bar[f] = lim_c E_up[f^(c)].
struct ExtendedExpectation {
    bool converged = false;
    double value = 0.0;                              // last evaluated E_up[f^(c)]
    std::vector<std::pair<double, double>> trace;    // (c, E_up[f^(c)]) along the schedule
};

/// Evaluates E_up[f^(c)] along a strictly increasing schedule of truncation
/// levels; converged when the final successive difference is within tol.
/// Non-convergence is a reported outcome (Divergent), not a failure.
inline ExtendedExpectation extended_expectation(const ScenarioSet& driver,
                                                const RandomFunctional& f,
                                                std::span<const double> c_schedule, double tol,
                                                int horizon,
                                                std::uint64_t cap = kDefaultEnumerationCap) {
    if (c_schedule.size() < 3)
        throw std::invalid_argument("extended_expectation: schedule needs at least 3 levels");
    for (std::size_t i = 1; i < c_schedule.size(); ++i)
        if (!(c_schedule[i] > c_schedule[i - 1]))
            throw std::invalid_argument("extended_expectation: schedule must be strictly increasing");

    ExtendedExpectation result;
    for (double c : c_schedule) {
        const double v = upper_expectation_exact(driver, truncate(f, c), horizon, cap);
        result.trace.emplace_back(c, v);
    }
    const std::size_t n = result.trace.size();
    result.value = result.trace[n - 1].second;
    result.converged =
        std::fabs(result.trace[n - 1].second - result.trace[n - 2].second) <= tol;
    return result;
}

/// e_bar[f] = -E_bar[-f].
inline ExtendedExpectation extended_lower_expectation(const ScenarioSet& driver,
                                                      const RandomFunctional& f,
                                                      std::span<const double> c_schedule,
                                                      double tol, int horizon,
                                                      std::uint64_t cap = kDefaultEnumerationCap) {
    ExtendedExpectation r = extended_expectation(driver, negate(f), c_schedule, tol, horizon, cap);
    r.value = -r.value;
    for (auto& [c, v] : r.trace) v = -v;
    return r;
}

} // namespace sublaw
