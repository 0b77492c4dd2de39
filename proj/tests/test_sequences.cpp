#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "sublaw/distribution.hpp"
#include "sublaw/errors.hpp"
#include "sublaw/expectation.hpp"
#include "sublaw/sequences.hpp"

using namespace sublaw;

namespace {

const ScenarioSet kTwoPoint{point_mass(+1.0), point_mass(-1.0)};
const ScenarioSet kSigns{uniform_signs()};

RandomFunctional window_average2() {
    return {{1, 2}, [](std::span<const double> x) { return 0.5 * (x[0] + x[1]); }};
}

RandomFunctional window_product2() {
    return {{1, 2}, [](std::span<const double> x) { return x[0] * x[1]; }};
}

// E_up[phi(Y_a, Y_b)] both as a joint supremum and through the iterated
// one-step form E_up[ E_up[phi(y, Y_b)] at y = Y_a ].
double joint_value(const SequenceModel& model, int a, int b,
                   const std::function<double(double, double)>& phi) {
    const RandomFunctional ya = model.output(a), yb = model.output(b);
    const Window w = Window::merged(ya.window(), yb.window());
    RandomFunctional f(w, [=](std::span<const double> x) {
        return phi(detail::eval_in(ya, w, x), detail::eval_in(yb, w, x));
    });
    return upper_expectation_exact(model.driver, f, model.driver_horizon);
}

double iterated_value(const SequenceModel& model, int a, int b,
                      const std::function<double(double, double)>& phi) {
    const RandomFunctional ya = model.output(a), yb = model.output(b);
    const ScenarioSet driver = model.driver;
    const int horizon = model.driver_horizon;
    RandomFunctional outer(ya.window(), [=](std::span<const double> xa) {
        const double y = ya(xa);
        RandomFunctional inner(yb.window(),
                               [=](std::span<const double> xb) { return phi(y, yb(xb)); });
        return upper_expectation_exact(driver, inner, horizon);
    });
    return upper_expectation_exact(driver, outer, horizon);
}

} // namespace

TEST_CASE("independent sequence: additivity and iterated supremum") {
    const SequenceModel model = make_independent_sequence(kTwoPoint, 3);
    const RandomFunctional total = sum_of_coordinates(1, 3);
    CHECK(upper_expectation_exact(model.driver, total, model.driver_horizon) == 3.0);
    double sum = 0.0;
    for (int k = 1; k <= 3; ++k) sum += model.upper_moment(k, 1);
    CHECK(sum == 3.0);

    const auto prod = [](double x, double y) { return x * y; };
    CHECK(joint_value(model, 1, 2, prod) == 1.0);
    CHECK(iterated_value(model, 1, 2, prod) == 1.0);

    const SequenceModel classical = make_independent_sequence(kSigns, 3);
    CHECK(classical.upper_moment(2, 1) == 0.0);
    CHECK(classical.upper_moment(2, 2) == 1.0);
}

TEST_CASE("m-dependent construction") {
    SUBCASE("m = 0 with identity reduces to the independent sequence") {
        const SequenceModel model = make_m_dependent(kSigns, coordinate(1), 0, 4);
        CHECK(model.driver_horizon == 4);
        for (int k = 1; k <= 4; ++k) {
            CHECK(model.output(k).window().first == k);
            CHECK(model.output(k).window().last == k);
        }
    }

    SUBCASE("window averages over signs are exactly centered") {
        const SequenceModel model = make_m_dependent(kSigns, window_average2(), 1, 5);
        for (int k = 1; k <= 5; ++k) {
            CHECK(model.upper_moment(k, 1) == 0.0);
            CHECK(model.lower_moment(k, 1) == 0.0);
        }
    }

    SUBCASE("adjacent products under adversarial point masses") {
        const SequenceModel model = make_m_dependent(kTwoPoint, window_product2(), 1, 3);
        // Y1*Y2 = xi1*xi2^2*xi3 = xi1*xi3, driven to 1 by matching signs
        CHECK(upper_expectation_exact(model.driver, model.output_product(1, 2),
                                      model.driver_horizon) == 1.0);
    }

    SUBCASE("window length must be m+1") {
        CHECK_THROWS_AS(make_m_dependent(kSigns, window_average2(), 0, 3), WindowMismatch);
        CHECK_THROWS_AS(make_m_dependent(kSigns, coordinate(1), 1, 3), WindowMismatch);
    }

    SUBCASE("outputs past the dependence gap factorize through iteration") {
        const SequenceModel model = make_m_dependent(kTwoPoint, window_average2(), 1, 4);
        const auto phi1 = [](double x, double y) { return x * y; };
        const auto phi2 = [](double x, double y) { return (x - 0.5) * y; };
        // Y1 reads driver 1..2, Y3 reads 3..4: disjoint windows
        CHECK(joint_value(model, 1, 3, phi1) == iterated_value(model, 1, 3, phi1));
        CHECK(joint_value(model, 1, 3, phi1) == 1.0);
        CHECK(joint_value(model, 1, 3, phi2) == iterated_value(model, 1, 3, phi2));
        CHECK(joint_value(model, 1, 3, phi2) == 1.5);
    }
}

TEST_CASE("blockwise construction and glue") {
    SUBCASE("dyadic blocks with fresh drivers and m=0 are globally independent") {
        const BlockStructure blocks = BlockStructure::dyadic(8);
        const SequenceModel model = make_blockwise_m_dependent(
            blocks, kSigns, coordinate(1), 0, BlockGlue::fresh_driver_per_block);
        for (int k = 1; k <= 8; ++k) CHECK(model.output(k).window().size() == 1);
        // all windows distinct
        for (int k = 2; k <= 8; ++k)
            CHECK(model.output(k).window().first > model.output(k - 1).window().first);
    }

    SUBCASE("unit blocks shorter than m+1 still construct") {
        const BlockStructure blocks = BlockStructure::unit(6);
        const SequenceModel model = make_blockwise_m_dependent(blocks, kSigns, window_average2(),
                                                               1, BlockGlue::fresh_driver_per_block);
        CHECK(model.horizon == 6);
        for (int k = 1; k <= 6; ++k) CHECK(model.output(k).window().size() == 2);
    }

    SUBCASE("shared boundary couples exactly the boundary pair") {
        const BlockStructure blocks({1, 4, 16, 64}, 64);
        const SequenceModel shared = make_blockwise_m_dependent(blocks, kSigns, window_average2(),
                                                                1, BlockGlue::shared_boundary);
        const SequenceModel fresh = make_blockwise_m_dependent(
            blocks, kSigns, window_average2(), 1, BlockGlue::fresh_driver_per_block);

        // cross-block pair (X3, X4): covariance 1/4 when the boundary is shared
        CHECK(upper_expectation_exact(shared.driver, shared.output_product(3, 4),
                                      shared.driver_horizon) == doctest::Approx(0.25));
        CHECK(upper_expectation_exact(fresh.driver, fresh.output_product(3, 4),
                                      fresh.driver_horizon) == 0.0);

        // within-block pairs past the gap stay independent under either glue
        CHECK(upper_expectation_exact(shared.driver, shared.output_product(4, 6),
                                      shared.driver_horizon) == 0.0);
        CHECK(upper_expectation_exact(shared.driver, shared.output_product(4, 5),
                                      shared.driver_horizon) == doctest::Approx(0.25));
    }
}

TEST_CASE("orthogonal schemes certify zero cross moments") {
    SUBCASE("singleton signs are orthonormal") {
        const SequenceModel model = make_orthogonal(6, OrthogonalScheme::symmetric_signs);
        const auto cert = orthogonality_certificate(model, 32);
        CHECK(cert.max_violation <= 1e-12);
        for (int k = 1; k <= 6; ++k) CHECK(model.upper_moment(k, 2) == 1.0);
    }

    SUBCASE("two symmetric scenarios stay orthogonal despite variance ambiguity") {
        const ScenarioSet two_scale{uniform_signs(1.0), uniform_signs(2.0)};
        const SequenceModel model = make_orthogonal(4, OrthogonalScheme::symmetric_signs, two_scale);
        const auto cert = orthogonality_certificate(model, 16);
        CHECK(cert.max_violation <= 1e-12);
        CHECK(model.upper_moment(1, 2) == 4.0);
        CHECK(model.lower_moment(1, 2) == 1.0);
    }

    SUBCASE("haar-like products of sign bits") {
        const SequenceModel model = make_orthogonal(8, OrthogonalScheme::haar_like);
        const auto cert = orthogonality_certificate(model, 64);
        CHECK(cert.max_violation <= 1e-12);
        for (int k = 1; k <= 8; ++k) CHECK(model.upper_moment(k, 2) == 1.0);
        CHECK_THROWS_AS(make_orthogonal(6, OrthogonalScheme::haar_like), SchemeUnavailable);
    }

    SUBCASE("asymmetric scenarios are rejected") {
        CHECK_THROWS_AS(
            make_orthogonal(4, OrthogonalScheme::symmetric_signs, ScenarioSet{point_mass(1.0)}),
            SchemeUnavailable);
    }
}

TEST_CASE("quasi-orthogonality certificates") {
    std::vector<double> delta{1.0};          // orthogonal case
    std::vector<double> banded{1.0, 1.0};    // allows one off-diagonal band

    SUBCASE("orthogonal model with the degenerate bound has no violations") {
        const SequenceModel model = make_orthogonal(5, OrthogonalScheme::symmetric_signs);
        CHECK(quasi_orthogonal_certificate(model, delta, 32).max_violation == 0.0);
    }

    SUBCASE("window-average model fits the one-band bound") {
        const SequenceModel model = make_m_dependent(kSigns, window_average2(), 1, 5);
        const auto cert = quasi_orthogonal_certificate(model, banded, 32);
        CHECK(cert.max_violation == 0.0);
        // gap >= 2 pairs are exactly zero
        for (const auto& p : cert.pairs)
            if (p.j - p.i >= 2) {
                CHECK(p.upper == 0.0);
                CHECK(p.lower == 0.0);
            }
    }

    SUBCASE("correlated model against a zero off-diagonal bound reports the gap") {
        const SequenceModel model = make_m_dependent(kSigns, window_average2(), 1, 4);
        const auto cert = quasi_orthogonal_certificate(model, delta, 32);
        CHECK(cert.max_violation == doctest::Approx(0.25)); // E[Y_k Y_{k+1}] = 1/4, bound 0
    }
}

TEST_CASE("dyadic block combinatorics") {
    SUBCASE("dyadic cut points give v_k = 1 everywhere") {
        const BlockStructure blocks = BlockStructure::dyadic(64);
        for (int k = 0; k <= 5; ++k) {
            const auto r = dyadic_blocks(blocks, k);
            CHECK(r.v_k == 1);
        }
        CHECK(phi(blocks, 1) == 1);
        CHECK(phi(blocks, 37) == 1);
        CHECK(phi(blocks, 64) == 1);
    }

    SUBCASE("unit blocks give v_k = 2^k") {
        const BlockStructure blocks = BlockStructure::unit(64);
        for (int k = 0; k <= 5; ++k) CHECK(dyadic_blocks(blocks, k).v_k == (1 << k));
        CHECK(phi(blocks, 5) == 4); // max(v_0, v_1, v_2) = max(1, 2, 4)
        int prev = 0;
        for (int n = 1; n <= 64; ++n) {
            const int p = phi(blocks, n);
            CHECK(p >= prev);
            prev = p;
        }
    }

    SUBCASE("a single covering block") {
        const BlockStructure blocks({1, 8, 16}, 16);
        const auto r = dyadic_blocks(blocks, 1); // [2,4) inside [1,8)
        CHECK(r.v_k == 1);
        REQUIRE(r.block_indices.size() == 1);
        CHECK(r.block_indices[0] == 1);
    }

    SUBCASE("intervals partition the dyadic range") {
        const BlockStructure blocks({1, 3, 5, 9}, 12);
        const auto r = dyadic_blocks(blocks, 2); // [4,8)
        CHECK(r.v_k == 2);
        int total = 0;
        int cursor = 4;
        for (const auto& [l, rr] : r.intervals) {
            CHECK(l == cursor);
            total += rr - l;
            cursor = rr;
        }
        CHECK(total == 4);
        // horizon clip: [8,16) meets horizon 12, leaving [8,13) with 5 integers
        const auto clipped = dyadic_blocks(blocks, 3);
        int clipped_total = 0;
        for (const auto& [l, rr] : clipped.intervals) clipped_total += rr - l;
        CHECK(clipped_total == 5);
    }

    SUBCASE("out of horizon and bad structures are rejected") {
        const BlockStructure blocks = BlockStructure::dyadic(16);
        CHECK_THROWS_AS(dyadic_blocks(blocks, 5), OutOfHorizon);
        CHECK_THROWS_AS(BlockStructure({2, 4}, 8), std::invalid_argument);
        CHECK_THROWS_AS(BlockStructure({1, 4, 4}, 8), std::invalid_argument);
    }

    SUBCASE("v_k is dominated by phi at and beyond 2^k") {
        for (const BlockStructure& blocks :
             {BlockStructure({1, 3, 5, 9, 17}, 64), BlockStructure::unit(64),
              BlockStructure::dyadic(64)}) {
            for (int k = 0; (1 << (k + 1)) <= 64; ++k) {
                const int v = dyadic_blocks(blocks, k).v_k;
                CHECK(v <= phi(blocks, 1 << k));
                for (int n : {1 << k, (1 << k) + 3, 64})
                    if (n >= (1 << k)) CHECK(phi(blocks, 1 << k) <= phi(blocks, n));
            }
        }
    }
}

TEST_CASE("simulation is deterministic per key") {
    const SequenceModel model = make_m_dependent(kSigns, window_average2(), 1, 16);
    const Selector sel = Selector::constant(0);
    const auto a = model.simulate_outputs(sel, 1234);
    const auto b = model.simulate_outputs(sel, 1234);
    const auto c = model.simulate_outputs(sel, 1235);
    CHECK(a == b);
    CHECK(a != c);

    // sign flip negates odd window functions coordinate-wise
    const auto flipped = model.simulate_outputs(sel, 1234, /*sign_flip=*/true);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(flipped[i] == -a[i]);
}
