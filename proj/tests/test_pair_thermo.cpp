#include <doctest.h>

#include <cmath>

#include "pairstream/pair_thermo.hpp"
#include "test_util.hpp"

using namespace pairstream;
using test_util::ParamGen;

TEST_CASE("weights at infinite temperature are maximally mixed") {
    // t -> inf approximated by 1e9 K
    const PairWeights w = compute_weights({1e9, two_pi * 5e9, two_pi * 5e9});
    CHECK(w.rho_e == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(w.rho_g == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(w.rho_d == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(std::fabs(w.rho_nd) < 1e-10);
    const StreamCoeffs one = stream_coeffs_one(w);
    CHECK(one.r1 == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(one.r2 == doctest::Approx(0.5).epsilon(1e-9));
    const StreamCoeffs two = stream_coeffs_two(w);
    CHECK(two.r1 == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(two.r2 == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("lambda = 0 removes the coherence") {
    const PairWeights w = compute_weights({0.05, two_pi * 5e9, 0.0});
    CHECK(w.rho_nd == 0.0);
    CHECK(w.rho_d * w.z == doctest::Approx(1.0).epsilon(1e-12));
    const double x = planck_h * 5e9 / (boltzmann_k * 0.05);
    CHECK(w.z == doctest::Approx(2.0 * (std::cosh(x) + 1.0)).epsilon(1e-12));
    // one- and two-atom coefficients coincide
    const StreamCoeffs one = stream_coeffs_one(w);
    const StreamCoeffs two = stream_coeffs_two(w);
    CHECK(one.r1 == two.r1);
    CHECK(one.r2 == two.r2);
}

TEST_CASE("baseline weights: 50 mK, omega/2pi = lambda/2pi = 5 GHz") {
    const PairWeights w = compute_weights(test_util::baseline_pair());
    // frozen from direct evaluation of the defining expressions
    CHECK(w.z == doctest::Approx(242.853427652675).epsilon(1e-12));
    CHECK(w.rho_e == doctest::Approx(3.39133723642217e-05).epsilon(1e-12));
    CHECK(w.rho_g == doctest::Approx(0.499966086627636).epsilon(1e-12));
    // cosh(x_omega) = cosh(x_lambda) cancels; 1 ulp of summation slack
    CHECK(w.rho_d == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w.rho_nd == doctest::Approx(-0.249966086627636).epsilon(1e-12));
    CHECK(w.rho_e + w.rho_g + 2.0 * w.rho_d == doctest::Approx(1.0).epsilon(1e-13));

    const StreamCoeffs one = stream_coeffs_one(w);
    CHECK(one.r1 == doctest::Approx(0.250033913372364).epsilon(1e-12));
    CHECK(one.r2 == doctest::Approx(0.749966086627636).epsilon(1e-12));

    const StreamCoeffs two = stream_coeffs_two(w);
    CHECK(two.r1 == doctest::Approx(6.78267447284664e-05).epsilon(1e-9));
    CHECK(two.r2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(two.r2 - two.r1 == doctest::Approx(w.rho_g - w.rho_e).epsilon(1e-12));
}

TEST_CASE("identities over randomized parameters") {
    ParamGen gen(20240817);
    for (int i = 0; i < 2000; ++i) {
        const PairParams p = gen.pair();
        const PairWeights w = compute_weights(p);
        const double beta_h = hbar / (boltzmann_k * p.t_atom);

        CHECK(w.rho_e + w.rho_g + 2.0 * w.rho_d == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(w.rho_e > 0.0);
        CHECK(w.rho_g > 0.0);
        CHECK(w.rho_d >= std::fabs(w.rho_nd));

        const StreamCoeffs one = stream_coeffs_one(w);
        CHECK(one.r1 + one.r2 == doctest::Approx(1.0).epsilon(1e-12));
        const double expected_gap = 2.0 * std::sinh(beta_h * p.omega) / w.z;
        CHECK(one.r2 - one.r1 == doctest::Approx(expected_gap).epsilon(1e-10));
        CHECK(one.asymmetry == doctest::Approx(expected_gap).epsilon(1e-10));
        CHECK(one.asymmetry > 0.0);   // strictly, even where the naive
                                      // difference rounds to zero

        const StreamCoeffs two = stream_coeffs_two(w);
        CHECK(two.r1 + two.r2 ==
              doctest::Approx(1.0 + 2.0 * w.rho_nd).epsilon(1e-12));
        CHECK(two.r2 - two.r1 == doctest::Approx(w.rho_g - w.rho_e).epsilon(1e-12));
        CHECK(two.asymmetry == doctest::Approx(w.rho_g - w.rho_e).epsilon(1e-10));
        CHECK(two.asymmetry > 0.0);
    }
}

TEST_CASE("parity in lambda: only rho_nd is odd") {
    ParamGen gen(7);
    for (int i = 0; i < 200; ++i) {
        PairParams p = gen.pair();
        const PairWeights plus = compute_weights(p);
        p.lambda = -p.lambda;
        const PairWeights minus = compute_weights(p);
        CHECK(plus.rho_e == doctest::Approx(minus.rho_e).epsilon(1e-14));
        CHECK(plus.rho_g == doctest::Approx(minus.rho_g).epsilon(1e-14));
        CHECK(plus.rho_d == doctest::Approx(minus.rho_d).epsilon(1e-14));
        CHECK(plus.z == doctest::Approx(minus.z).epsilon(1e-14));
        CHECK(plus.rho_nd == doctest::Approx(-minus.rho_nd).epsilon(1e-14));
    }
    // sign convention: rho_nd opposes lambda at positive temperature
    const PairWeights af = compute_weights({0.05, two_pi * 5e9, two_pi * 1e9});
    CHECK(af.rho_nd < 0.0);
    const PairWeights fm = compute_weights({0.05, two_pi * 5e9, -two_pi * 1e9});
    CHECK(fm.rho_nd > 0.0);
}

TEST_CASE("increasing |lambda| grows Z and weakens the one-atom asymmetry") {
    const double omega = two_pi * 5e9;
    double prev_z = 0.0, prev_gap = 2.0;
    for (double f_lambda : {0.0, 1e9, 3e9, 5e9, 8e9, 12e9}) {
        const PairWeights w = compute_weights({0.05, omega, two_pi * f_lambda});
        const StreamCoeffs one = stream_coeffs_one(w);
        if (prev_z > 0.0) {
            CHECK(w.z > prev_z);
            CHECK(one.r2 - one.r1 < prev_gap);
        }
        prev_z = w.z;
        prev_gap = one.r2 - one.r1;
    }
}

TEST_CASE("log-domain evaluation survives mixed extreme exponents") {
    // beta*hbar*lambda ~ 720: naive cosh overflows to inf and poisons every
    // ratio; the shifted form keeps all four weights finite and positive.
    const PairWeights w = compute_weights({1e-3, two_pi * 0.1e9, two_pi * 15e9});
    CHECK(w.rho_e > 0.0);
    CHECK(w.rho_g > 0.0);
    CHECK(w.rho_d == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.rho_nd == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(w.rho_e + w.rho_g + 2.0 * w.rho_d == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isinf(w.z));   // the reported Z saturates; weights stay exact
}

TEST_CASE("weight underflow and bad inputs are rejected") {
    CHECK_THROWS_AS((void)compute_weights({0.0, two_pi * 5e9, 0.0}), ValidityError);
    CHECK_THROWS_AS((void)compute_weights({-1.0, two_pi * 5e9, 0.0}), ValidityError);
    CHECK_THROWS_AS((void)compute_weights({0.05, -two_pi * 5e9, 0.0}), ValidityError);
    // beta*hbar*omega ~ 2.4e6 underflows rho_e to zero
    CHECK_THROWS_AS((void)compute_weights({1e-7, two_pi * 5e9, 0.0}), ValidityError);
}
