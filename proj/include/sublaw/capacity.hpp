#pragma once

// Capacities induced by scenario families: V(A) = sup over scenarios and
// selectors of P(A). This is the largest probability any strategy can give
// the event, and it satisfies the sandwich E_up[f] <= V(A) <= E_up[g] for
// f <= I_A <= g, which is the property the maximal inequalities rest on.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sublaw/distribution.hpp"
#include "sublaw/errors.hpp"
#include "sublaw/expectation.hpp"
#include "sublaw/functional.hpp"

namespace sublaw {

/// Finite union of closed intervals with sorted, disjoint segments.
/// Endpoint topology is immaterial for the piecewise-uniform measures used
/// here, so [a,b] stands for any interval with those endpoints.
class IntervalUnion {
  public:
    IntervalUnion() = default;

    explicit IntervalUnion(std::vector<std::pair<double, double>> segments) {
        for (auto& [a, b] : segments)
            if (a > b) throw std::invalid_argument("IntervalUnion: segment with a > b");
        std::sort(segments.begin(), segments.end());
        for (const auto& [a, b] : segments) {
            if (!segments_.empty() && a <= segments_.back().second)
                segments_.back().second = std::max(segments_.back().second, b);
            else
                segments_.emplace_back(a, b);
        }
    }

    static IntervalUnion interval(double a, double b) { return IntervalUnion({{a, b}}); }
    static IntervalUnion point(double x) { return IntervalUnion({{x, x}}); }
    static IntervalUnion empty() { return IntervalUnion(); }

    const std::vector<std::pair<double, double>>& segments() const { return segments_; }

    /// Complement within [lo, hi]; degenerate gaps of length zero are kept
    /// out since they carry no mass.
    IntervalUnion complement_within(double lo, double hi) const {
        std::vector<std::pair<double, double>> out;
        double cursor = lo;
        for (const auto& [a, b] : segments_) {
            if (a > cursor) out.emplace_back(cursor, std::min(a, hi));
            cursor = std::max(cursor, b);
            if (cursor >= hi) break;
        }
        if (cursor < hi) out.emplace_back(cursor, hi);
        return IntervalUnion(std::move(out));
    }

  private:
    std::vector<std::pair<double, double>> segments_;
};

/// Event over a finite-horizon path: deterministic predicate reading its
/// window coordinates. Used with discrete scenario models.
struct PathEvent {
    Window window{1, 1};
    std::function<bool(std::span<const double>)> predicate;
    std::string description;
};

/// Event that is a finite union of intervals over a single real coordinate.
/// Used with the continuous interval-form models.
struct IntervalEvent {
    IntervalUnion set;
    std::string description;
};

struct MeasurableEvent {
    std::variant<PathEvent, IntervalEvent> form;

    static MeasurableEvent path(Window w, std::function<bool(std::span<const double>)> pred,
                                std::string description = {}) {
        return {PathEvent{w, std::move(pred), std::move(description)}};
    }
    static MeasurableEvent intervals(IntervalUnion u, std::string description = {}) {
        return {IntervalEvent{std::move(u), std::move(description)}};
    }
};

/// Measure with a uniform density on one support interval;
/// interval probabilities are closed-form overlap ratios.
struct UniformSegmentMeasure {
    double support_lo = 0.0;
    double support_hi = 1.0;

    double probability(const IntervalUnion& u) const {
        const double width = support_hi - support_lo;
        double mass = 0.0;
        for (const auto& [a, b] : u.segments()) {
            const double lo = std::max(a, support_lo);
            const double hi = std::min(b, support_hi);
            if (hi > lo) mass += (hi - lo) / width;
        }
        return mass;
    }
};

/// Finite family of uniform-segment measures on a common sample interval.
struct ContinuousTwoMeasureModel {
    double omega_lo = 0.0;
    double omega_hi = 1.0;
    std::vector<UniformSegmentMeasure> measures;
};

/// The two-restriction fixture on Omega = [0,2]: measure 1 uniform on [0,1],
/// measure 2 uniform on [1,2]. Both give [0,1] and [1,2] full mass while the
/// point {1} has mass 0 under each, so capacity-one events need not intersect
/// in a capacity-one event.
inline ContinuousTwoMeasureModel two_segment_model() {
    return {0.0, 2.0, {UniformSegmentMeasure{0.0, 1.0}, UniformSegmentMeasure{1.0, 2.0}}};
}

/// Discrete path model: scenario family plus horizon.
struct ScenarioModel {
    ScenarioSet driver;
    int horizon = 1;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

inline double upper_capacity(const ContinuousTwoMeasureModel& model, const MeasurableEvent& event) {
    const auto* iv = std::get_if<IntervalEvent>(&event.form);
    if (!iv)
        throw NonMeasurableEvent("continuous model requires an interval-form event");
    double best = 0.0;
    for (const auto& mu : model.measures) best = std::max(best, mu.probability(iv->set));
    return best;
}

inline double upper_capacity(const ScenarioModel& model, const MeasurableEvent& event) {
    const auto* pe = std::get_if<PathEvent>(&event.form);
    if (!pe)
        throw NonMeasurableEvent("discrete model requires a path-predicate event");
    const auto pred = pe->predicate;
    RandomFunctional indicator(pe->window,
                               [pred](std::span<const double> x) { return pred(x) ? 1.0 : 0.0; });
    return upper_expectation_exact(model.driver, indicator, model.horizon, model.enumeration_cap);
}

inline double lower_capacity(const ContinuousTwoMeasureModel& model, const MeasurableEvent& event) {
    const auto* iv = std::get_if<IntervalEvent>(&event.form);
    if (!iv)
        throw NonMeasurableEvent("continuous model requires an interval-form event");
    const IntervalUnion comp = iv->set.complement_within(model.omega_lo, model.omega_hi);
    return 1.0 - upper_capacity(model, MeasurableEvent::intervals(comp));
}

inline double lower_capacity(const ScenarioModel& model, const MeasurableEvent& event) {
    const auto* pe = std::get_if<PathEvent>(&event.form);
    if (!pe)
        throw NonMeasurableEvent("discrete model requires a path-predicate event");
    const auto pred = pe->predicate;
    MeasurableEvent complement = MeasurableEvent::path(
        pe->window, [pred](std::span<const double> x) { return !pred(x); });
    return 1.0 - upper_capacity(model, complement);
}

/// Desk-scale outer capacity: min of the event's own capacity and the sum
/// over a finite cover. For a finite family of countably additive measures,
/// sup_P P is already countably sub-additive, so this equals upper_capacity
/// whenever the cover contains the event itself.
template <typename Model>
double outer_capacity(const Model& model, const MeasurableEvent& event,
                      std::span<const MeasurableEvent> cover) {
    double sum = 0.0;
    for (const MeasurableEvent& part : cover) sum += upper_capacity(model, part);
    return std::min(upper_capacity(model, event), sum);
}

} // namespace sublaw
