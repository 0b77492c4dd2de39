#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sublaw/rng.hpp"

namespace sublaw {

/// One atom of a finitely supported law.
struct Atom {
    double value = 0.0;
    double probability = 0.0;
};

/// Finitely supported one-step law in canonical form: atom values strictly
/// increasing, probabilities summing to 1 within 1e-12. Equal values passed to
/// the constructor are merged.
class DiscreteDistribution {
  public:
    DiscreteDistribution() = default;

    explicit DiscreteDistribution(std::vector<Atom> atoms) {
        if (atoms.empty()) throw std::invalid_argument("DiscreteDistribution: no atoms");
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& a, const Atom& b) { return a.value < b.value; });
        double total = 0.0;
        for (const Atom& a : atoms) {
            if (!(a.probability >= 0.0 && a.probability <= 1.0))
                throw std::invalid_argument("DiscreteDistribution: probability outside [0,1]");
            if (!std::isfinite(a.value))
                throw std::invalid_argument("DiscreteDistribution: non-finite atom value");
            total += a.probability;
            if (!atoms_.empty() && atoms_.back().value == a.value)
                atoms_.back().probability += a.probability;
            else
                atoms_.push_back(a);
        }
        if (std::fabs(total - 1.0) > 1e-12)
            throw std::invalid_argument("DiscreteDistribution: probabilities sum to " +
                                        std::to_string(total) + ", expected 1");
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t support_size() const { return atoms_.size(); }

    double mean() const {
        double m = 0.0;
        for (const Atom& a : atoms_) m += a.value * a.probability;
        return m;
    }

    double second_moment() const {
        double m = 0.0;
        for (const Atom& a : atoms_) m += a.value * a.value * a.probability;
        return m;
    }

    double min_value() const { return atoms_.front().value; }
    double max_value() const { return atoms_.back().value; }

    // P(X >= t) and P(X > t); atoms are sorted so a linear scan suffices.
    double prob_geq(double t) const {
        double p = 0.0;
        for (const Atom& a : atoms_)
            if (a.value >= t) p += a.probability;
        return p;
    }
    double prob_gt(double t) const {
        double p = 0.0;
        for (const Atom& a : atoms_)
            if (a.value > t) p += a.probability;
        return p;
    }

    // CDF inversion on a uniform draw; canonical atom order makes this
    // deterministic for a given bit pattern of u.
    double sample(double u) const {
        double cdf = 0.0;
        for (const Atom& a : atoms_) {
            cdf += a.probability;
            if (u < cdf) return a.value;
        }
        return atoms_.back().value;
    }

    // True when for every atom (v, p) the atom (-v, p) is present too.
    bool is_sign_symmetric() const {
        for (const Atom& a : atoms_) {
            bool found = false;
            for (const Atom& b : atoms_)
                if (b.value == -a.value && std::fabs(b.probability - a.probability) <= 1e-15) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
        return true;
    }

    bool operator==(const DiscreteDistribution& other) const {
        if (atoms_.size() != other.atoms_.size()) return false;
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (atoms_[i].value != other.atoms_[i].value ||
                atoms_[i].probability != other.atoms_[i].probability)
                return false;
        return true;
    }

  private:
    std::vector<Atom> atoms_;
};

inline DiscreteDistribution point_mass(double v) { return DiscreteDistribution({{v, 1.0}}); }

/// Uniform over the given values.
inline DiscreteDistribution uniform_on(std::initializer_list<double> values) {
    std::vector<Atom> atoms;
    const double p = 1.0 / static_cast<double>(values.size());
    for (double v : values) atoms.push_back({v, p});
    return DiscreteDistribution(std::move(atoms));
}

inline DiscreteDistribution uniform_signs(double scale = 1.0) {
    return uniform_on({-scale, +scale});
}

/// Nonempty ordered family of one-step laws. The order matters: supremum
/// tie-breaking is "lowest scenario index wins" throughout the library.
class ScenarioSet {
  public:
    ScenarioSet() = default;

    explicit ScenarioSet(std::vector<DiscreteDistribution> scenarios)
        : scenarios_(std::move(scenarios)) {
        if (scenarios_.empty()) throw std::invalid_argument("ScenarioSet: empty family");
    }

    ScenarioSet(std::initializer_list<DiscreteDistribution> scenarios)
        : ScenarioSet(std::vector<DiscreteDistribution>(scenarios)) {}

    const std::vector<DiscreteDistribution>& scenarios() const { return scenarios_; }
    std::size_t size() const { return scenarios_.size(); }
    const DiscreteDistribution& operator[](std::size_t i) const { return scenarios_[i]; }

    bool is_singleton() const { return scenarios_.size() == 1; }

    bool all_sign_symmetric() const {
        for (const auto& s : scenarios_)
            if (!s.is_sign_symmetric()) return false;
        return true;
    }

    // Distinct values reachable at one step under any scenario, ascending.
    std::vector<double> support_union() const {
        std::vector<double> values;
        for (const auto& s : scenarios_)
            for (const Atom& a : s.atoms()) values.push_back(a.value);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        return values;
    }

  private:
    std::vector<DiscreteDistribution> scenarios_;
};

} // namespace sublaw
