#pragma once

// Choquet integrals against the scenario capacity:
//   C_V[X] = int_0^inf V(X >= t) dt + int_{-inf}^0 [V(X >= t) - 1] dt.
// For enumerable instances the survival function t -> V(X >= t) is an exact
// step function (one capacity evaluation per achievable value) and the
// integral is an exact sum of step areas; a trapezoid quadrature over a
// sampled grid covers estimated survival data.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sublaw/capacity.hpp"
#include "sublaw/distribution.hpp"
#include "sublaw/errors.hpp"
#include "sublaw/expectation.hpp"
#include "sublaw/functional.hpp"

namespace sublaw {

/// Exact survival data: values are the achievable outcomes of X in increasing
/// order and caps[j] = V(X >= values[j]). caps is nonincreasing and
/// caps[0] = 1 because the smallest value is reached with certainty.
struct StepSurvival {
    std::vector<double> values;
    std::vector<double> caps;

    // V(X >= t): 1 left of the support, 0 right of it, else the cap of the
    // smallest achievable value >= t.
    double at_geq(double t) const {
        auto it = std::lower_bound(values.begin(), values.end(), t);
        if (it == values.end()) return 0.0;
        return caps[static_cast<std::size_t>(it - values.begin())];
    }

    // V(X > t): cap of the smallest achievable value strictly above t.
    double at_gt(double t) const {
        auto it = std::upper_bound(values.begin(), values.end(), t);
        if (it == values.end()) return 0.0;
        return caps[static_cast<std::size_t>(it - values.begin())];
    }
};

/// Estimated survival data on a grid of t values.
struct GridSurvival {
    std::vector<double> ts;
    std::vector<double> caps;
};

struct SurvivalFunction {
    std::variant<StepSurvival, GridSurvival> form;
};

namespace detail {

// Distinct values f can take over the window support product.
inline void collect_values(const ScenarioSet& driver, const RandomFunctional& f, int depth,
                           std::vector<double>& partial, std::vector<double>& out) {
    const Window w = f.window();
    if (depth > w.last - w.first) {
        out.push_back(f(partial));
        return;
    }
    for (double v : driver.support_union()) {
        partial.push_back(v);
        collect_values(driver, f, depth + 1, partial, out);
        partial.pop_back();
    }
}

} // namespace detail

inline std::vector<double> achievable_values(const ScenarioSet& driver, const RandomFunctional& f,
                                             std::uint64_t cap = kDefaultEnumerationCap) {
    detail::check_enumeration_cap(driver, f.window(), cap);
    std::vector<double> values, partial;
    detail::collect_values(driver, f, 0, partial, values);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

/// Exact survival function of f under the scenario capacity: one backward
/// induction per achievable value.
inline StepSurvival exact_survival(const ScenarioSet& driver, const RandomFunctional& f,
                                   int horizon, std::uint64_t cap = kDefaultEnumerationCap) {
    StepSurvival s;
    s.values = achievable_values(driver, f, cap);
    s.caps.reserve(s.values.size());
    for (double v : s.values) {
        ScenarioModel model{driver, horizon, cap};
        s.caps.push_back(upper_capacity(
            model, MeasurableEvent::path(
                       f.window(), [f, v](std::span<const double> x) { return f(x) >= v; })));
    }
    return s;
}

/// Exact Choquet integral of a step survival function.
inline double choquet_integral(const StepSurvival& s) {
    double total = 0.0;
    for (std::size_t j = 0; j < s.values.size(); ++j) {
        const double v = s.values[j];
        const double prev = j == 0 ? 0.0 : s.values[j - 1];
        // positive part: V constant = caps[j] on (max(prev,0), v] when v > 0
        if (v > 0.0) total += (v - std::max(prev, 0.0)) * s.caps[j];
        // negative part: integrand caps[j]-1 on (prev, min(v,0)] when j > 0
        if (j > 0) {
            const double len = std::min(v, 0.0) - std::min(prev, 0.0);
            total += len * (s.caps[j] - 1.0);
        }
    }
    // all-negative support leaves (v_max, 0] where V = 0 and the integrand is -1
    if (s.values.back() < 0.0) total += s.values.back();
    return total;
}

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0;
};

/// Trapezoid quadrature of a sampled survival function. The grid must bracket
/// the support: V = 1 at the left end and V = 0 at the right end (within
/// bracket_tol), unless a tail bound for the omitted mass is supplied; the
/// tail bound is then added to the reported error. The error bound is the
/// exact trapezoid envelope for a function that is monotone between samples.
inline QuadratureResult choquet_integral(const GridSurvival& g,
                                         std::optional<double> tail_bound = std::nullopt,
                                         double bracket_tol = 1e-9) {
    if (g.ts.size() < 2 || g.ts.size() != g.caps.size())
        throw std::invalid_argument("grid survival needs matched ts/caps with >= 2 points");
    for (std::size_t i = 1; i < g.ts.size(); ++i)
        if (!(g.ts[i] > g.ts[i - 1]))
            throw std::invalid_argument("grid ts must be strictly increasing");

    const bool bracketed =
        std::fabs(g.caps.front() - 1.0) <= bracket_tol && std::fabs(g.caps.back()) <= bracket_tol;
    if (!bracketed && !tail_bound)
        throw UnboundedSupport("survival grid does not bracket the support and no tail bound given");

    QuadratureResult r;
    for (std::size_t i = 0; i + 1 < g.ts.size(); ++i) {
        const double dt = g.ts[i + 1] - g.ts[i];
        // integrand is V on t >= 0 and V - 1 on t < 0; subtracting 1 on a cell
        // shifts the trapezoid by exactly -dt, handled by splitting at 0.
        const double lo = g.ts[i], hi = g.ts[i + 1];
        const double v_lo = g.caps[i], v_hi = g.caps[i + 1];
        const double trap = 0.5 * (v_lo + v_hi) * dt;
        if (hi <= 0.0) r.value += trap - dt;
        else if (lo >= 0.0) r.value += trap;
        else {
            // straddles 0: linear interpolation at 0 keeps the trapezoid rule
            const double v0 = v_lo + (v_hi - v_lo) * (0.0 - lo) / dt;
            r.value += 0.5 * (v_lo + v0) * (0.0 - lo) - (0.0 - lo);
            r.value += 0.5 * (v0 + v_hi) * (hi - 0.0);
        }
        r.error_bound += 0.5 * dt * std::fabs(v_lo - v_hi);
    }
    if (tail_bound) r.error_bound += *tail_bound;
    // mass left of the grid integrates exactly (integrand 0 or 1), no error term
    if (g.ts.front() > 0.0) r.value += g.ts.front();          // V = 1 on [0, t_0]
    else if (g.ts.back() < 0.0) r.value += g.ts.back();       // V - 1 = -1 on [t_last, 0]
    return r;
}

inline double choquet_integral(const SurvivalFunction& s) {
    if (const auto* step = std::get_if<StepSurvival>(&s.form)) return choquet_integral(*step);
    return choquet_integral(std::get<GridSurvival>(s.form)).value;
}

/// Samples a step survival function onto a quadrature grid: geometric spacing
/// near 0, linear elsewhere, plus a straddle pair at each jump so the
/// trapezoid rule only pays for the straddle slivers.
inline GridSurvival sample_survival_grid(const StepSurvival& s, std::size_t n_points) {
    if (s.values.empty()) throw std::invalid_argument("empty step survival");
    if (n_points < 16) throw std::invalid_argument("survival grid needs at least 16 points");
    const double lo = std::min(s.values.front(), 0.0);
    const double hi = std::max(s.values.back(), 0.0);
    std::vector<double> ts;
    ts.push_back(lo);
    ts.push_back(hi);
    ts.push_back(0.0);
    const double scale = std::max(std::fabs(lo), std::fabs(hi));
    // geometric ladder near zero on both sides, then a linear fill
    const std::size_t geo = n_points / 4;
    for (std::size_t i = 0; i < geo; ++i) {
        const double t = scale * std::pow(2.0, -static_cast<double>(i + 1));
        if (t < hi) ts.push_back(t);
        if (-t > lo) ts.push_back(-t);
    }
    const std::size_t lin = n_points - std::min(n_points, geo);
    for (std::size_t i = 1; i + 1 < lin; ++i)
        ts.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(lin - 1));
    for (double v : s.values) {
        ts.push_back(v);
        const double above = std::nextafter(v, std::numeric_limits<double>::infinity());
        if (above <= hi) ts.push_back(above);
    }
    // bracket the top so the grid ends where the survival is 0
    ts.push_back(std::nextafter(hi, std::numeric_limits<double>::infinity()));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    GridSurvival g;
    g.ts = std::move(ts);
    g.caps.reserve(g.ts.size());
    for (double t : g.ts) g.caps.push_back(s.at_geq(t));
    return g;
}

/// int_0^c V(X > x) dx for a step survival of a nonnegative variable. V(X > x)
/// is constant between achievable values, so the integral is an exact sum.
inline double integral_survival_gt(const StepSurvival& s, double c) {
    if (c < 0.0) throw std::invalid_argument("integral_survival_gt: c must be >= 0");
    double total = 0.0, prev = 0.0;
    for (double value : s.values) {
        const double v = std::min(value, c);
        if (v > prev) {
            total += (v - prev) * s.at_gt(prev);
            prev = v;
        }
    }
    return total;
}

struct ChoquetMoment {
    double value = 0.0;          // C_V[|f|^r]
    double tail_integral = 0.0;  // int_1^inf V(|f| >= m) dm
};

/// C_V[|f|^r] with the companion tail integral int_1^inf V(|f| >= m) dm.
/// The substitution t = m^r makes the integrand r m^{r-1} V(|f| >= m), which
/// dominates the tail integrand for m >= 1 and r >= 1, so value >= tail.
inline ChoquetMoment choquet_moment(const ScenarioSet& driver, const RandomFunctional& f, double r,
                                    int horizon, std::uint64_t cap = kDefaultEnumerationCap) {
    if (r < 1.0) throw std::invalid_argument("choquet_moment: r must be >= 1");
    const StepSurvival abs_surv = exact_survival(driver, abs_functional(f), horizon, cap);

    ChoquetMoment result;
    // survival of |f|^r reuses the capacities of |f| at transformed values
    StepSurvival powered;
    powered.values.reserve(abs_surv.values.size());
    powered.caps = abs_surv.caps;
    for (double v : abs_surv.values) powered.values.push_back(std::pow(v, r));
    result.value = choquet_integral(powered);

    // tail integral: V(|f| >= m) is constant between achievable values
    double tail = 0.0;
    for (std::size_t j = 0; j < abs_surv.values.size(); ++j) {
        const double v = abs_surv.values[j];
        const double prev = j == 0 ? 0.0 : abs_surv.values[j - 1];
        if (v > 1.0) tail += (v - std::max(prev, 1.0)) * abs_surv.caps[j];
    }
    result.tail_integral = tail;
    return result;
}

} // namespace sublaw
