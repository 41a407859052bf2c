#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace wctlab;
using namespace wctlab::testing;

TEST_CASE("build caches the conditional moments") {
    SECTION("constant symbols") {
        const WCTInstance inst = projection_fixture();
        for (int b = 0; b < inst.blocks(); ++b) {
            CHECK(inst.exp_u2_block[b] == 1.0);
            CHECK(inst.exp_w2_block[b] == 1.0);
            CHECK(inst.exp_uw_block[b] == Complex{1, 0});
            CHECK(inst.in_S[static_cast<std::size_t>(b)]);
            CHECK(inst.in_G[static_cast<std::size_t>(b)]);
        }
    }

    SECTION("nilpotent fixture: block sums") {
        const WCTInstance inst = nilpotent_fixture();
        CHECK(inst.exp_u2_block[0] == 2.0);
        CHECK(inst.exp_w2_block[0] == 0.5);
        CHECK(inst.exp_uw_block[0] == Complex{0, 0});
    }

    SECTION("u = 0 empties S") {
        const WCTInstance inst = build(FiniteMeasureSpace({0.5, 0.5}), Partition({{0, 1}}, 2),
                                       MFunc::Zero(2), mf_real({1, 1}));
        CHECK_FALSE(inst.in_S[0]);
        CHECK(frobenius_norm(as_operator(inst)) == 0.0);
    }

    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(build(FiniteMeasureSpace({0.5, 0.5}), Partition({{0, 1}}, 2),
                              MFunc::Zero(3), MFunc::Zero(2)),
                        std::invalid_argument);
    }
}

TEST_CASE("Cauchy-Schwarz holds for the cached moments") {
    Rng seeds(1);
    for (int trial = 0; trial < 200; ++trial) {
        GeneratorConfig cfg;
        cfg.seed = derive_seed(111, static_cast<std::uint64_t>(trial));
        const WCTInstance inst = gen_instance(cfg);
        double scale = 1.0;
        for (int b = 0; b < inst.blocks(); ++b)
            scale = std::max(scale, inst.exp_u2_block[b] * inst.exp_w2_block[b]);
        CHECK(holder_gap_blocks(inst).minCoeff() >= -1e-12 * scale);
        for (int b = 0; b < inst.blocks(); ++b) {
            CHECK(inst.exp_u2_block[b] >= 0.0);
            CHECK(inst.exp_w2_block[b] >= 0.0);
        }
    }
}

TEST_CASE("as_operator fixtures") {
    SECTION("u = w = 1 gives the conditional expectation") {
        const WCTInstance inst = projection_fixture();
        CHECK(frob_distance(as_operator(inst), cond_exp_operator(inst.space, inst.part)) < 1e-15);
    }

    SECTION("nilpotent fixture: frame shift matrix") {
        const WCTInstance inst = nilpotent_fixture();
        Eigen::MatrixXcd F(2, 2);
        F << Complex{0, 0}, Complex{0, 0}, Complex{1, 0}, Complex{0, 0};
        CHECK((to_frame(as_operator(inst)) - F).norm() < 1e-15);
    }

    SECTION("ramp fixture: witnesses and rank") {
        const WCTInstance inst = ramp_fixture();
        const LinOperator T = as_operator(inst);
        // T(w chi_B) = E(uw)|_B w chi_B per block
        const MFunc v1 = mf_real({1, 2, 0, 0});
        const MFunc v2 = mf_real({0, 0, 3, 4});
        CHECK((T.apply(v1) - Complex{1.5, 0} * v1).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((T.apply(v2) - Complex{3.5, 0} * v2).cwiseAbs().maxCoeff() < 1e-14);
        // rank is bounded by the block count: only two nonzero dense eigenvalues
        const std::vector<Complex> eigs = dense_eigenvalues(T);
        int nonzero = 0;
        for (const Complex& z : eigs)
            if (std::abs(z) > 1e-10) ++nonzero;
        CHECK(nonzero == 2);
    }
}

TEST_CASE("norm formula fixtures") {
    CHECK(norm_formula(projection_fixture()) == Catch::Approx(1.0));
    CHECK(norm_formula(nilpotent_fixture()) == Catch::Approx(1.0));
    CHECK(norm_formula(ramp_fixture()) == Catch::Approx(std::sqrt(12.5)));
    CHECK(op_norm(as_operator(ramp_fixture())) == Catch::Approx(std::sqrt(12.5)));
}

TEST_CASE("closed forms on fixtures") {
    FiniteMeasureSpace s2({0.5, 0.5});

    SECTION("projection instance: everything collapses to E") {
        const WCTInstance inst = projection_fixture();
        const LinOperator E = cond_exp_operator(inst.space, inst.part);
        CHECK(frob_distance(abs_T_closed(inst), E) < 1e-13);
        CHECK(frob_distance(partial_isometry_closed(inst), E) < 1e-13);
        CHECK(frob_distance(aluthge_closed(inst), E) < 1e-13);
        CHECK(frob_distance(gen_aluthge_closed(inst, 2.0, 1.0), E) < 1e-13);
        CHECK(frob_distance(aluthge_eps_numeric(inst, 0.3), E) < 1e-10);
    }

    SECTION("nilpotent fixture closed forms") {
        const WCTInstance inst = nilpotent_fixture();
        Eigen::MatrixXcd shift(2, 2);
        shift << Complex{0, 0}, Complex{0, 0}, Complex{1, 0}, Complex{0, 0};
        CHECK((to_frame(abs_T_closed(inst)) -
               Eigen::Vector2cd(Complex{1, 0}, Complex{0, 0}).asDiagonal().toDenseMatrix())
                  .norm() < 1e-13);
        CHECK((to_frame(partial_isometry_closed(inst)) - shift).norm() < 1e-13);
        // E(uw) = 0 kills the Aluthge transform and every generalized one
        CHECK(frobenius_norm(aluthge_closed(inst)) == 0.0);
        CHECK(frobenius_norm(gen_aluthge_closed(inst, 2.0, 1.0)) == 0.0);
    }

    SECTION("w = 0 empties G and the partial isometry") {
        const WCTInstance inst = build(FiniteMeasureSpace({0.5, 0.5}), Partition({{0, 1}}, 2),
                                       mf_real({1, 1}), MFunc::Zero(2));
        CHECK(frobenius_norm(partial_isometry_closed(inst)) == 0.0);
        CHECK(frobenius_norm(abs_T_closed(inst)) == 0.0);
    }

    SECTION("u = 0 empties S and the absolute value") {
        const WCTInstance inst = build(FiniteMeasureSpace({0.5, 0.5}), Partition({{0, 1}}, 2),
                                       MFunc::Zero(2), mf_real({1, 1}));
        CHECK(frobenius_norm(abs_T_closed(inst)) == 0.0);
        CHECK(frobenius_norm(aluthge_closed(inst)) == 0.0);
    }

    SECTION("ramp fixture: Aluthge transform is M_{E(uw)} E") {
        const WCTInstance inst = ramp_fixture();
        const LinOperator expected =
            multiplication_operator(mf_real({1.5, 1.5, 3.5, 3.5}), inst.space) *
            cond_exp_operator(inst.space, inst.part);
        CHECK(frob_distance(aluthge_closed(inst), expected) < 1e-13);
    }

    SECTION("parameter validation") {
        const WCTInstance inst = projection_fixture();
        CHECK_THROWS_AS(gen_aluthge_closed(inst, 0.0, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(gen_aluthge_closed(inst, 1.0, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(gen_aluthge_numeric(inst, 1.0, -0.1), std::invalid_argument);
        CHECK_THROWS_AS(aluthge_eps_numeric(inst, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(aluthge_eps_numeric(inst, 1.0), std::invalid_argument);
    }
}

TEST_CASE("closed forms match the numeric polar calculus on a seeded corpus") {
    const std::vector<double> r_list = {0.75, 1.0, 2.0};
    for (int trial = 0; trial < 100; ++trial) {
        GeneratorConfig cfg;
        cfg.n_max = 12;
        cfg.seed = derive_seed(2222, static_cast<std::uint64_t>(trial));
        if (trial % 5 == 4) cfg.family = Family::singleton_blocks;
        const WCTInstance inst = gen_instance(cfg);
        const LinOperator T = as_operator(inst);
        const PolarData pd = polar_data(T);
        const double norm_T = pd.sigma.size() ? pd.sigma[0] : 0.0;
        const double tol1 = 1e-8 * (1.0 + norm_T);

        CHECK(std::abs(norm_formula(inst) - norm_T) <= 1e-9 * (1.0 + norm_T));
        CHECK(frob_distance(abs_T_closed(inst), pd.absolute()) <= tol1);
        CHECK(frob_distance(partial_isometry_closed(inst) * abs_T_closed(inst), T) <=
              1e-10 * (1.0 + norm_T));

        // U comparison restricted to range(|T|)
        const LinOperator P = pd.range_projection();
        CHECK(frobenius_norm((partial_isometry_closed(inst) - pd.partial_isometry()) * P) <= tol1);
        // both kill the kernel of |T|
        CHECK(frobenius_norm(partial_isometry_closed(inst) *
                             (identity_operator(inst.space) - P)) <= tol1);

        const LinOperator That = aluthge_closed(inst);
        CHECK(frob_distance(That, aluthge_numeric(pd)) <= tol1);
        // r = 1 reduces the generalized transform to the Aluthge transform
        CHECK(frob_distance(gen_aluthge_closed(inst, 1.0, 0.5), That) <= 1e-13 * (1.0 + norm_T));
        for (double eps : {0.1, 0.5, 0.9})
            CHECK(frob_distance(That, aluthge_eps_numeric(pd, eps)) <= tol1);

        // normality of the Aluthge transform, and |That| = |That*|
        CHECK(check_normal(That, 1e-8).normal);
        CHECK(frob_distance(polar(That).absolute, polar(adjoint(That)).absolute) <= tol1);
        CHECK(frob_distance(polar(That).absolute, abs_aluthge_closed(inst)) <= tol1);
        CHECK(frob_distance(adjoint(That), aluthge_adjoint_closed(inst)) <= 1e-12 * (1 + norm_T));

        for (double r : r_list) {
            const double tolr = 1e-8 * (1.0 + std::pow(norm_T, std::max(1.0, r)));
            for (double t : {0.0, r / 3.0, r / 2.0, r}) {
                CHECK(frob_distance(gen_aluthge_closed(inst, r, t), gen_aluthge_numeric(pd, r, t)) <=
                      tolr);
            }
        }
    }
}
