#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublaw/distribution.hpp"
#include "sublaw/expectation.hpp"
#include "sublaw/functional.hpp"

namespace sublaw {

/// Strictly increasing cut points {n_i} with n_1 = 1, so the blocks
/// [n_i, n_{i+1}) partition {1, ..., horizon}; the final block extends from
/// the last cut point to the horizon.
struct BlockStructure {
    std::vector<int> cut_points;
    int horizon = 1;

    BlockStructure() = default;
    BlockStructure(std::vector<int> cuts, int horizon_) : cut_points(std::move(cuts)), horizon(horizon_) {
        if (cut_points.empty() || cut_points.front() != 1)
            throw std::invalid_argument("BlockStructure: first cut point must be 1");
        for (std::size_t i = 1; i < cut_points.size(); ++i)
            if (cut_points[i] <= cut_points[i - 1])
                throw std::invalid_argument("BlockStructure: cut points must be strictly increasing");
        if (horizon < cut_points.back())
            throw std::invalid_argument("BlockStructure: horizon below last cut point");
    }

    static BlockStructure dyadic(int horizon) {
        std::vector<int> cuts;
        for (int c = 1; c <= horizon; c *= 2) cuts.push_back(c);
        return {std::move(cuts), horizon};
    }

    static BlockStructure unit(int horizon) {
        std::vector<int> cuts(static_cast<std::size_t>(horizon));
        for (int i = 0; i < horizon; ++i) cuts[static_cast<std::size_t>(i)] = i + 1;
        return {std::move(cuts), horizon};
    }

    std::size_t block_count() const { return cut_points.size(); }

    // Block i (1-based) is [start(i), end(i)); the last block ends at horizon+1.
    int block_start(std::size_t i) const { return cut_points[i - 1]; }
    int block_end(std::size_t i) const {
        return i < cut_points.size() ? cut_points[i] : horizon + 1;
    }

    // 1-based index of the block containing coordinate n.
    std::size_t block_of(int n) const {
        std::size_t lo = 0, hi = cut_points.size();
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (cut_points[mid] <= n) lo = mid; else hi = mid;
        }
        return lo + 1;
    }
};

/// Pair diagnostics for (quasi-)orthogonality: upper/lower expectations of
/// X_i X_j against the allowed bound.
struct OrthogonalityCertificate {
    struct Pair {
        int i = 0;
        int j = 0;
        double upper = 0.0; // E_up[X_i X_j]
        double lower = 0.0; // e_low[X_i X_j]
        double bound = 0.0;
    };
    std::vector<Pair> pairs;
    double max_violation = 0.0;
};

/// Shared replication plan for simulation-based estimates.
struct SimulationPlan {
    int replications = 100;
    std::uint64_t seed = 0;
    int selector_pool_size = 8;
};

/// {X_n} at finite horizon: coordinate k of the output is a pure function of
/// the driver coordinates in coordinate_maps[k-1].window. The driver is the
/// Peng-independent layer; all dependence between outputs comes from window
/// overlap.
struct SequenceModel {
    int horizon = 1;
    ScenarioSet driver;
    int driver_horizon = 1;
    std::vector<RandomFunctional> coordinate_maps;

    int m = 0;                                    // dependence order of the construction
    std::optional<BlockStructure> blocks;         // set for blockwise constructions
    std::string scheme;                           // construction tag, e.g. "symmetric_signs"
    std::optional<OrthogonalityCertificate> certificate;

    const RandomFunctional& output(int k) const {
        return coordinate_maps[static_cast<std::size_t>(k - 1)];
    }

    /// X_k * X_l as a functional of the driver.
    RandomFunctional output_product(int k, int l) const {
        return multiply(output(k), output(l));
    }

    std::vector<double> outputs_from_driver(std::span<const double> driver_path) const {
        std::vector<double> out;
        out.reserve(coordinate_maps.size());
        for (const RandomFunctional& f : coordinate_maps) out.push_back(f.eval_on_path(driver_path));
        return out;
    }

    std::vector<double> simulate_outputs(const Selector& selector, std::uint64_t rng_key,
                                         bool sign_flip = false) const {
        const auto driver_path =
            simulate_driver_path(driver, selector, driver_horizon, rng_key, sign_flip);
        return outputs_from_driver(driver_path);
    }

    double upper_moment(int k, int power, std::uint64_t cap = kDefaultEnumerationCap) const {
        RandomFunctional f = output(k);
        if (power == 2) f = multiply(f, f);
        else if (power != 1) throw std::invalid_argument("upper_moment: power must be 1 or 2");
        return upper_expectation_exact(driver, f, driver_horizon, cap);
    }

    double lower_moment(int k, int power, std::uint64_t cap = kDefaultEnumerationCap) const {
        RandomFunctional f = output(k);
        if (power == 2) f = multiply(f, f);
        else if (power != 1) throw std::invalid_argument("lower_moment: power must be 1 or 2");
        return lower_expectation(driver, f, driver_horizon, cap);
    }

    /// Exact check that E_up[X_k] = e_low[X_k] = 0 for the sampled coordinates.
    bool zero_mean_certified(std::span<const int> coordinates, double tol = 1e-12,
                             std::uint64_t cap = kDefaultEnumerationCap) const {
        for (int k : coordinates) {
            if (std::fabs(upper_expectation_exact(driver, output(k), driver_horizon, cap)) > tol)
                return false;
            if (std::fabs(lower_expectation(driver, output(k), driver_horizon, cap)) > tol)
                return false;
        }
        return true;
    }
};

} // namespace sublaw
