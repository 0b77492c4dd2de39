#pragma once

// Constructors for the dependence classes: sliding-window m-dependent
// sequences over a Peng-independent driver, blockwise variants with
// controlled cross-block glue, and orthogonal schemes, plus the dyadic block
// combinatorics (I_k, v_k, Phi) used by the blockwise strong law.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sublaw/distribution.hpp"
#include "sublaw/errors.hpp"
#include "sublaw/expectation.hpp"
#include "sublaw/functional.hpp"
#include "sublaw/sequence_model.hpp"

namespace sublaw {

namespace detail {
// Same evaluation as g but reading driver coordinates [first, first+len-1].
inline RandomFunctional rebase(const RandomFunctional& g, int first) {
    const Window w{first, first + g.window().size() - 1};
    return {w, [g](std::span<const double> x) { return g(x); }, g.lipschitz_meta()};
}
} // namespace detail

/// Coordinate k of the output is driver coordinate k.
inline SequenceModel make_independent_sequence(const ScenarioSet& theta, int horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    SequenceModel model;
    model.horizon = horizon;
    model.driver = theta;
    model.driver_horizon = horizon;
    model.m = 0;
    model.scheme = "independent";
    for (int k = 1; k <= horizon; ++k) model.coordinate_maps.push_back(coordinate(k));
    return model;
}

/// Y_n = g(xi_n, ..., xi_{n+m}) over a Peng-independent driver xi; outputs
/// whose windows are more than m apart read disjoint driver coordinates and
/// are therefore independent in the iterated-supremum sense.
inline SequenceModel make_m_dependent(const ScenarioSet& theta, const RandomFunctional& g, int m,
                                      int horizon) {
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    if (g.window().size() != m + 1)
        throw WindowMismatch("window function reads " + std::to_string(g.window().size()) +
                             " coordinates, expected m+1 = " + std::to_string(m + 1));
    SequenceModel model;
    model.horizon = horizon;
    model.driver = theta;
    model.driver_horizon = horizon + m;
    model.m = m;
    model.scheme = "m_dependent";
    for (int n = 1; n <= horizon; ++n) model.coordinate_maps.push_back(detail::rebase(g, n));
    return model;
}

enum class BlockGlue { fresh_driver_per_block, shared_boundary };

/// m-dependent within each block of the given structure. fresh_driver_per_block
/// gives every block its own driver coordinates (blocks mutually independent);
/// shared_boundary reuses exactly one driver coordinate across each adjacent
/// boundary, which introduces the cross-block dependence the definition permits.
inline SequenceModel make_blockwise_m_dependent(const BlockStructure& blocks,
                                                const ScenarioSet& theta,
                                                const RandomFunctional& g, int m,
                                                BlockGlue glue) {
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    if (g.window().size() != m + 1)
        throw WindowMismatch("window function reads " + std::to_string(g.window().size()) +
                             " coordinates, expected m+1 = " + std::to_string(m + 1));
    SequenceModel model;
    model.horizon = blocks.horizon;
    model.driver = theta;
    model.m = m;
    model.blocks = blocks;
    model.scheme = glue == BlockGlue::shared_boundary ? "blockwise_shared" : "blockwise_fresh";
    model.coordinate_maps.resize(static_cast<std::size_t>(blocks.horizon));

    int base = 1; // first driver coordinate of the current block
    for (std::size_t i = 1; i <= blocks.block_count(); ++i) {
        const int start = blocks.block_start(i);
        const int end = blocks.block_end(i); // exclusive
        for (int n = start; n < end; ++n)
            model.coordinate_maps[static_cast<std::size_t>(n - 1)] =
                detail::rebase(g, base + (n - start));
        const int used = (end - start) + m; // driver coords consumed by this block
        base += glue == BlockGlue::shared_boundary ? used - 1 : used;
    }
    model.driver_horizon = base + m; // loose upper bound is fine; windows define reads
    return model;
}

enum class OrthogonalScheme { symmetric_signs, haar_like };

/// Exact certificate over all windows small enough to enumerate, capped at
/// pair_cap pairs. Violations are reported, never thrown.
inline OrthogonalityCertificate orthogonality_certificate(const SequenceModel& model,
                                                          std::size_t pair_cap = 64,
                                                          double bound = 0.0,
                                                          std::uint64_t cap = 262144) {
    OrthogonalityCertificate cert;
    for (int i = 1; i <= model.horizon && cert.pairs.size() < pair_cap; ++i) {
        for (int j = i + 1; j <= model.horizon && cert.pairs.size() < pair_cap; ++j) {
            const RandomFunctional prod = model.output_product(i, j);
            try {
                const double up = upper_expectation_exact(model.driver, prod,
                                                          model.driver_horizon, cap);
                const double low = lower_expectation(model.driver, prod, model.driver_horizon, cap);
                cert.pairs.push_back({i, j, up, low, bound});
                const double violation = std::max(std::fabs(up), std::fabs(low)) - bound;
                cert.max_violation = std::max(cert.max_violation, violation);
            } catch (const EnumerationCapExceeded&) {
                break; // wider pairs only get more expensive
            }
        }
    }
    cert.max_violation = std::max(cert.max_violation, 0.0);
    return cert;
}

/// Orthogonal sequence: E_up[X_i X_j] = e_low[X_i X_j] = 0 for i != j.
/// symmetric_signs takes any family of sign-symmetric one-step laws (every
/// selector then gives the product mean 0); haar_like builds Walsh products
/// of independent signs and needs a power-of-two horizon.
inline SequenceModel make_orthogonal(int horizon, OrthogonalScheme scheme,
                                     const ScenarioSet& theta = ScenarioSet{uniform_signs()}) {
    if (horizon < 2) throw std::invalid_argument("orthogonal model needs horizon >= 2");
    if (scheme == OrthogonalScheme::symmetric_signs) {
        if (!theta.all_sign_symmetric())
            throw SchemeUnavailable("symmetric_signs needs sign-symmetric scenarios");
        SequenceModel model = make_independent_sequence(theta, horizon);
        model.scheme = "symmetric_signs";
        model.certificate = orthogonality_certificate(model, 32);
        return model;
    }
    // haar_like
    if ((horizon & (horizon - 1)) != 0)
        throw SchemeUnavailable("haar_like needs a power-of-two horizon");
    SequenceModel model;
    model.horizon = horizon;
    model.driver = ScenarioSet{uniform_signs()};
    int bits = 0;
    while ((1 << bits) <= horizon) ++bits;
    model.driver_horizon = bits;
    model.m = 0;
    model.scheme = "haar_like";
    for (int k = 1; k <= horizon; ++k) {
        int high = 0;
        for (int b = 0; b < bits; ++b)
            if (k & (1 << b)) high = b + 1;
        const Window w{1, high};
        model.coordinate_maps.push_back(RandomFunctional(
            w, [k](std::span<const double> x) {
                double prod = 1.0;
                for (int b = 0; (1 << b) <= k; ++b)
                    if (k & (1 << b)) prod *= x[static_cast<std::size_t>(b)];
                return prod;
            }));
    }
    model.certificate = orthogonality_certificate(model, 32);
    return model;
}

/// Checks |E_up[X_k X_l]| <= sqrt(E_up[X_k^2]) sqrt(E_up[X_l^2]) f(|k-l|) on
/// enumerable pairs. f is given as a prefix (zero beyond); violations are
/// reported in the certificate, never thrown.
inline OrthogonalityCertificate quasi_orthogonal_certificate(const SequenceModel& model,
                                                             std::span<const double> f_bound,
                                                             std::size_t pair_cap = 64,
                                                             std::uint64_t cap = 262144) {
    OrthogonalityCertificate cert;
    std::vector<double> sigma(static_cast<std::size_t>(model.horizon) + 1, 0.0);
    for (int k = 1; k <= model.horizon; ++k)
        sigma[static_cast<std::size_t>(k)] = std::sqrt(model.upper_moment(k, 2, cap));

    auto f_at = [&](int gap) {
        return gap < static_cast<int>(f_bound.size()) ? f_bound[static_cast<std::size_t>(gap)] : 0.0;
    };

    for (int i = 1; i <= model.horizon && cert.pairs.size() < pair_cap; ++i) {
        for (int j = i + 1; j <= model.horizon && cert.pairs.size() < pair_cap; ++j) {
            const RandomFunctional prod = model.output_product(i, j);
            try {
                const double up = upper_expectation_exact(model.driver, prod,
                                                          model.driver_horizon, cap);
                const double low = lower_expectation(model.driver, prod, model.driver_horizon, cap);
                const double bound = sigma[static_cast<std::size_t>(i)] *
                                     sigma[static_cast<std::size_t>(j)] * f_at(j - i);
                cert.pairs.push_back({i, j, up, low, bound});
                const double magnitude = std::max(std::fabs(up), std::fabs(low));
                cert.max_violation = std::max(cert.max_violation, magnitude - bound);
            } catch (const EnumerationCapExceeded&) {
                break;
            }
        }
    }
    cert.max_violation = std::max(cert.max_violation, 0.0);
    return cert;
}

/// Dyadic slice of a block structure: which blocks meet [2^k, 2^{k+1}) and
/// the intervals they cut out of it.
struct DyadicBlockReport {
    int k = 0;
    std::vector<std::size_t> block_indices; // I_k, 1-based block indices
    int v_k = 0;
    std::vector<std::pair<int, int>> intervals; // [l_ki, r_ki), clipped to horizon
};

inline DyadicBlockReport dyadic_blocks(const BlockStructure& blocks, int k) {
    const std::int64_t lo = std::int64_t{1} << k;
    if (lo > blocks.horizon) throw OutOfHorizon("2^k exceeds the horizon");
    const std::int64_t hi =
        std::min<std::int64_t>(std::int64_t{1} << (k + 1), std::int64_t{blocks.horizon} + 1);

    DyadicBlockReport report;
    report.k = k;
    for (std::size_t i = 1; i <= blocks.block_count(); ++i) {
        const int bs = blocks.block_start(i);
        const int be = blocks.block_end(i);
        const int l = std::max<int>(static_cast<int>(lo), bs);
        const int r = std::min<int>(static_cast<int>(hi), be);
        if (l < r) {
            report.block_indices.push_back(i);
            report.intervals.emplace_back(l, r);
        }
    }
    report.v_k = static_cast<int>(report.block_indices.size());
    return report;
}

/// Phi(n) = max of v_j over j = 0..floor(log2 n).
inline int phi(const BlockStructure& blocks, int n) {
    if (n < 1) throw std::invalid_argument("phi: n must be >= 1");
    if (n > blocks.horizon) throw OutOfHorizon("phi: n exceeds the horizon");
    int k = 0;
    while ((std::int64_t{1} << (k + 1)) <= n) ++k;
    int best = 0;
    for (int j = 0; j <= k; ++j) best = std::max(best, dyadic_blocks(blocks, j).v_k);
    return best;
}

} // namespace sublaw
