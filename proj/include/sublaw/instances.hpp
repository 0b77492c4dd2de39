#pragma once

// Seeded generator of small enumerable instances (scenario families and
// polynomial window functionals) for the randomized verification suites.

#include <cstdint>
#include <span>
#include <vector>

#include "sublaw/distribution.hpp"
#include "sublaw/functional.hpp"
#include "sublaw/rng.hpp"

namespace sublaw {

class InstanceGenerator {
  public:
    explicit InstanceGenerator(std::uint64_t seed) : rng_(derive_key(seed, 0x1257a9ce5)) {}

    int uniform_int(int lo, int hi) { // inclusive
        return lo + static_cast<int>(rng_.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.next_uniform01(); }

    /// Up to max_atoms quarter-integer atoms with normalized random weights.
    DiscreteDistribution distribution(int max_atoms) {
        const int n = uniform_int(1, max_atoms);
        std::vector<double> values;
        while (static_cast<int>(values.size()) < n) {
            const double v = uniform_int(-8, 8) * 0.25;
            bool duplicate = false;
            for (double u : values) duplicate = duplicate || u == v;
            if (!duplicate) values.push_back(v);
        }
        std::vector<double> weights;
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            weights.push_back(uniform(0.05, 1.0));
            total += weights.back();
        }
        std::vector<Atom> atoms;
        for (int i = 0; i < n; ++i)
            atoms.push_back({values[static_cast<std::size_t>(i)],
                             weights[static_cast<std::size_t>(i)] / total});
        return DiscreteDistribution(std::move(atoms));
    }

    ScenarioSet scenarios(int max_scenarios, int max_atoms) {
        const int k = uniform_int(1, max_scenarios);
        std::vector<DiscreteDistribution> family;
        for (int i = 0; i < k; ++i) family.push_back(distribution(max_atoms));
        return ScenarioSet(std::move(family));
    }

    /// Random polynomial of the window coordinates, degree <= 2 per coordinate.
    RandomFunctional functional(int max_coord) {
        const int last = uniform_int(1, max_coord);
        const int first = uniform_int(1, last);
        const int terms = uniform_int(1, 3);
        std::vector<double> coeffs;
        std::vector<std::vector<int>> exponents;
        for (int t = 0; t < terms; ++t) {
            coeffs.push_back(uniform_int(-4, 4) * 0.5);
            std::vector<int> e;
            for (int i = first; i <= last; ++i) e.push_back(uniform_int(0, 2));
            exponents.push_back(std::move(e));
        }
        return {{first, last}, [coeffs, exponents](std::span<const double> x) {
                    double total = 0.0;
                    for (std::size_t t = 0; t < coeffs.size(); ++t) {
                        double term = coeffs[t];
                        for (std::size_t i = 0; i < exponents[t].size(); ++i)
                            for (int e = 0; e < exponents[t][i]; ++e) term *= x[i];
                        total += term;
                    }
                    return total;
                }};
    }

  private:
    RngStream rng_;
};

} // namespace sublaw
