#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sublaw/errors.hpp"

namespace sublaw {

/// Inclusive 1-based coordinate range a functional reads.
struct Window {
    int first = 1;
    int last = 1;

    int size() const { return last - first + 1; }

    static Window merged(Window a, Window b) {
        return {std::min(a.first, b.first), std::max(a.last, b.last)};
    }
};

inline void check_window(Window w) {
    if (w.first < 1 || w.last < w.first)
        throw InvalidWindow("window [" + std::to_string(w.first) + "," + std::to_string(w.last) +
                            "] is empty or starts below 1");
}

/// Declared local-Lipschitz growth bound |f(x)-f(y)| <= C(1+|x|^m+|y|^m)|x-y|.
/// Metadata only; spot-checked numerically in tests, never enforced at runtime.
struct LipschitzMeta {
    double C = 1.0;
    int m = 0;
};

/// Real function of finitely many path coordinates. The callable receives
/// exactly window.size() values (the coordinates window.first..window.last)
/// and must be pure: same inputs give the bit-identical output.
class RandomFunctional {
  public:
    using Eval = std::function<double(std::span<const double>)>;

    RandomFunctional() = default;

    RandomFunctional(Window window, Eval eval, std::optional<LipschitzMeta> lipschitz = {})
        : window_(window), eval_(std::move(eval)), lipschitz_(lipschitz) {
        check_window(window_);
    }

    Window window() const { return window_; }
    const std::optional<LipschitzMeta>& lipschitz_meta() const { return lipschitz_; }

    double operator()(std::span<const double> window_values) const {
        return eval_(window_values);
    }

    // Evaluate against a full path (coordinate k at path[k-1]).
    double eval_on_path(std::span<const double> path) const {
        return eval_(path.subspan(static_cast<std::size_t>(window_.first - 1),
                                  static_cast<std::size_t>(window_.size())));
    }

  private:
    Window window_{1, 1};
    Eval eval_;
    std::optional<LipschitzMeta> lipschitz_;
};

inline RandomFunctional coordinate(int k) {
    return {{k, k}, [](std::span<const double> x) { return x[0]; }, LipschitzMeta{1.0, 0}};
}

inline RandomFunctional constant_functional(double c) {
    return {{1, 1}, [c](std::span<const double>) { return c; }, LipschitzMeta{0.0, 0}};
}

inline RandomFunctional sum_of_coordinates(int first, int last) {
    return {{first, last},
            [](std::span<const double> x) {
                double s = 0.0;
                for (double v : x) s += v;
                return s;
            },
            LipschitzMeta{1.0, 0}};
}

inline RandomFunctional negate(const RandomFunctional& f) {
    return {f.window(), [f](std::span<const double> x) { return -f(x); }, f.lipschitz_meta()};
}

inline RandomFunctional scale(const RandomFunctional& f, double lambda) {
    return {f.window(), [f, lambda](std::span<const double> x) { return lambda * f(x); }};
}

inline RandomFunctional add_constant(const RandomFunctional& f, double c) {
    return {f.window(), [f, c](std::span<const double> x) { return f(x) + c; }};
}

/// Pointwise clamp to [-c, c]; window unchanged.
inline RandomFunctional truncate(const RandomFunctional& f, double c) {
    if (c < 0.0) throw NegativeTruncationLevel("truncation level must be nonnegative");
    return {f.window(),
            [f, c](std::span<const double> x) { return std::max(-c, std::min(f(x), c)); },
            f.lipschitz_meta()};
}

inline RandomFunctional abs_functional(const RandomFunctional& f) {
    return {f.window(), [f](std::span<const double> x) { return std::fabs(f(x)); }};
}

inline RandomFunctional pow_abs(const RandomFunctional& f, double r) {
    return {f.window(), [f, r](std::span<const double> x) { return std::pow(std::fabs(f(x)), r); }};
}

namespace detail {
// Re-evaluates f against the merged window by projecting the sub-window out.
inline double eval_in(const RandomFunctional& f, Window merged, std::span<const double> x) {
    return f(x.subspan(static_cast<std::size_t>(f.window().first - merged.first),
                       static_cast<std::size_t>(f.window().size())));
}
} // namespace detail

inline RandomFunctional add(const RandomFunctional& f, const RandomFunctional& g) {
    Window w = Window::merged(f.window(), g.window());
    return {w, [f, g, w](std::span<const double> x) {
                return detail::eval_in(f, w, x) + detail::eval_in(g, w, x);
            }};
}

inline RandomFunctional multiply(const RandomFunctional& f, const RandomFunctional& g) {
    Window w = Window::merged(f.window(), g.window());
    return {w, [f, g, w](std::span<const double> x) {
                return detail::eval_in(f, w, x) * detail::eval_in(g, w, x);
            }};
}

/// 1 if f >= threshold, else 0.
inline RandomFunctional indicator_geq(const RandomFunctional& f, double threshold) {
    return {f.window(),
            [f, threshold](std::span<const double> x) { return f(x) >= threshold ? 1.0 : 0.0; }};
}

} // namespace sublaw
