#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace wctlab;
using namespace wctlab::testing;

TEST_CASE("orbit averaging (3.1)") {
    SECTION("n=2, cells=2 fixture: orbits {1,3},{2,4}") {
        const OrbitAverageExample ex = example_3_1(2, 2);
        const MFunc f = mf_real({1, 2, 3, 4});
        const MFunc e = cond_exp(f, ex.instance.space, ex.instance.part);
        CHECK(e[0] == Complex{2, 0});
        CHECK(e[1] == Complex{3, 0});
        CHECK(e[2] == Complex{2, 0});
        CHECK(e[3] == Complex{3, 0});
    }

    SECTION("unit function is preserved and the envelope holds") {
        const OrbitAverageExample ex = example_3_1(3, 5);
        CHECK(ex.unit_preserved);
        CHECK(ex.envelope_holds);
        CHECK(ex.max_envelope_ratio <= 1.0 + 1e-12);
        CHECK(ex.operator_norm == Catch::Approx(1.0));  // u = w = 1
    }

    SECTION("bounded u gives norm sup|u| for w = 1 on this grid") {
        const OrbitAverageExample ex =
            example_3_1(2, 4, [](double) { return Complex{1.0, 0.0}; });
        CHECK(ex.operator_norm == Catch::Approx(1.0));
    }

    SECTION("size validation") {
        CHECK_THROWS_AS(example_3_1(1, 4), std::invalid_argument);
        CHECK_THROWS_AS(example_3_1(2, 0), std::invalid_argument);
    }
}

TEST_CASE("product space expectation (3.2)") {
    const ProductSpaceExample ex = example_3_2(64);

    // quadrature agreement with the closed forms
    CHECK(ex.max_err_exp_u2 <= 5.0 / 64);
    CHECK(ex.max_err_exp_w2 <= 5.0 / 64);
    CHECK(ex.max_err_exp_uw2 <= 5.0 / 64);
    CHECK(ex.max_err_product <= 5.0 / 64);

    // the discrete Cauchy-Schwarz direction holds strictly; the reversed
    // inequality (which would force equality) does not
    CHECK(ex.min_gap > 0.0);
    CHECK(ex.rows_gap_negative == 0);
    CHECK(ex.rows_gap_positive == 64);
    CHECK_FALSE(ex.gap_nonpositive_everywhere);
    CHECK(ex.cauchy_schwarz_defect == 0.0);

    // gap stays clear of zero: 2(x-4)^2/(x+12)^2 over x in (0,1)
    CHECK(ex.min_gap > 0.09);
    CHECK(ex.max_gap < 0.23);

    SECTION("refinement shrinks the quadrature error") {
        const ProductSpaceExample fine = example_3_2(128);
        CHECK(fine.max_err_exp_u2 <= ex.max_err_exp_u2);
        CHECK(fine.max_err_exp_w2 <= ex.max_err_exp_w2);
        CHECK(fine.max_err_exp_uw2 <= ex.max_err_exp_uw2 + 1e-12);
    }

    SECTION("grid validation") { CHECK_THROWS_AS(example_3_2(1), std::invalid_argument); }
}

TEST_CASE("half shift (3.3)") {
    const HalfShiftExample ex = example_3_3(64);

    CHECK(ex.max_err_exp_u2 <= 1e-12);  // two-point average is exact at midpoints
    CHECK(ex.block_values_strictly_increasing);
    CHECK(ex.block_values_distinct);
    CHECK(ex.sigma_p.size() == 33);  // 32 block values plus 0

    CHECK(ex.min_gap > 0.0);
    CHECK_FALSE(ex.gap_nonpositive_everywhere);
    CHECK(ex.cauchy_schwarz_defect == 0.0);

    // gap per block is (sqrt(x + 1/2) - sqrt(x))^2 / 4 at the midpoints
    const double x0 = 0.5 / 64;
    const double expected0 = std::pow(std::sqrt(x0 + 0.5) - std::sqrt(x0), 2) / 4.0;
    CHECK(holder_gap_blocks(ex.instance)[0] == Catch::Approx(expected0).margin(1e-12));

    CHECK_THROWS_AS(example_3_3(63), std::invalid_argument);
    CHECK_THROWS_AS(example_3_3(0), std::invalid_argument);
}

TEST_CASE("geometric masses (3.4)") {
    SECTION("u = w = 1: E(uw) = 1 and sigma_p = {0, 1}") {
        const GeometricSpaceExample ex = example_3_4(
            0.5, 30, [](long) { return Complex{1, 0}; }, [](long) { return Complex{1, 0}; });
        CHECK(std::abs(ex.alpha1_computed - Complex{1, 0}) < 1e-12);
        CHECK(std::abs(ex.alpha2_computed - Complex{1, 0}) < 1e-12);
        REQUIRE(ex.sigma_p.size() == 2);
        CHECK(std::abs(ex.sigma_p[0]) < 1e-12);
        CHECK(std::abs(ex.sigma_p[1] - Complex{1, 0}) < 1e-12);
    }

    SECTION("f(x) = x at q = 1/2: frozen ratios 24/7 and 37/21") {
        const GeometricSpaceExample ex = example_3_4(0.5, 200);
        CHECK(ex.default_samplers);

        // computed block averages match the independent series oracle
        CHECK(ex.err_alpha1 <= 1e-12 * std::abs(ex.alpha1_series));
        CHECK(ex.err_alpha2 <= 1e-12 * std::abs(ex.alpha2_series));

        // truncation tail is negligible at cutoff 200, so the closed forms hold
        CHECK(ex.alpha1_closed_form == Catch::Approx(3.0 / (1.0 - 0.125)));
        CHECK(std::abs(ex.alpha1_series - Complex{24.0 / 7.0, 0}) <= 1e-12);
        CHECK(std::abs(ex.alpha2_series - Complex{37.0 / 21.0, 0}) <= 1e-12);
        CHECK(ex.err_alpha1_closed <= 1e-12);
        CHECK(ex.err_alpha2_closed <= 1e-12);
        CHECK(ex.tail_mass == Catch::Approx(std::pow(0.5, 200)));

        // constant w makes the off-block sampling variant coincide
        CHECK(std::abs(ex.alpha1_series_w2n - ex.alpha1_series) == 0.0);

        // sigma_p: 0 and the two block values
        REQUIRE(ex.sigma_p.size() == 3);
        CHECK(std::abs(ex.sigma_p[0]) < 1e-12);
        CHECK(std::abs(ex.sigma_p[1] - Complex{37.0 / 21.0, 0}) <= 1e-9);
        CHECK(std::abs(ex.sigma_p[2] - Complex{24.0 / 7.0, 0}) <= 1e-9);
    }

    SECTION("doubling the cutoff improves the closed-form agreement") {
        const GeometricSpaceExample coarse = example_3_4(0.9, 40);
        const GeometricSpaceExample fine = example_3_4(0.9, 80);
        CHECK(fine.err_alpha1_closed <= coarse.err_alpha1_closed + 1e-12);
        CHECK(fine.err_alpha2_closed <= coarse.err_alpha2_closed + 1e-12);
    }

    SECTION("non-constant w distinguishes the two sampling variants") {
        const GeometricSpaceExample ex = example_3_4(
            0.5, 60, [](long x) { return Complex{static_cast<double>(x), 0}; },
            [](long x) { return Complex{1.0 + 0.1 * static_cast<double>(x % 5), 0}; });
        CHECK(std::abs(ex.alpha1_series_w2n - ex.alpha1_series) > 1e-6);
        // the instance's own block value still matches the defining series
        CHECK(ex.err_alpha1 <= 1e-10 * (1.0 + std::abs(ex.alpha1_series)));
    }

    SECTION("parameter validation") {
        CHECK_THROWS_AS(example_3_4(0.0, 30), std::invalid_argument);
        CHECK_THROWS_AS(example_3_4(1.0, 30), std::invalid_argument);
        CHECK_THROWS_AS(example_3_4(0.5, 2), std::invalid_argument);
    }
}

TEST_CASE("reproducer instances satisfy the core invariants") {
    const WCTInstance insts[] = {example_3_1(2, 3).instance, example_3_2(16).instance,
                                 example_3_3(16).instance, example_3_4(0.5, 24).instance};
    for (const WCTInstance& inst : insts) {
        double scale = 1.0;
        for (int b = 0; b < inst.blocks(); ++b)
            scale = std::max(scale, inst.exp_u2_block[b] * inst.exp_w2_block[b]);
        CHECK(holder_gap_blocks(inst).minCoeff() >= -1e-12 * scale);
        CHECK(is_block_constant(inst.exp_uw(), inst.space, inst.part, 1e-13));
    }
}
