#include <doctest.h>

#include <string>

#include "pairstream/config.hpp"
#include "pairstream/sweep.hpp"

using namespace pairstream;

TEST_CASE("empty config resolves to the full baseline") {
    const ModelConfig cfg = parse_config("");
    CHECK(cfg.t_atom_mK == 50.0);
    CHECK(cfg.t_bath_K == 10.0);
    CHECK(cfg.f_cavity_GHz == 5.0);
    CHECK(cfg.f_atom_GHz == 5.0);
    CHECK(cfg.delta_MHz() == 0.0);
    CHECK(cfg.f_lambda_GHz == 5.0);
    CHECK(cfg.g_over_2pi_MHz == 0.5);
    CHECK(cfg.tau_ns == 50.0);
    CHECK(cfg.rate_R_per_s == 5e6);
    CHECK(cfg.kappa_per_s == 1e4);
    CHECK(cfg.chi == 2.0);
    CHECK(cfg.variant == VariantSel::both);
    CHECK(cfg.phi() == doctest::Approx(0.157).epsilon(1e-2));
    CHECK(cfg.rate_R_per_s * cfg.tau_s() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("comments, blank lines, and units") {
    const ModelConfig cfg = parse_config(
        "# pair reservoir\n"
        "t_atom_mK = 80   # effective reset temperature\n"
        "\n"
        "kappa_per_s = 0\n"
        "delta_MHz = 10\n"
        "variant = one\n");
    CHECK(cfg.t_atom_mK == 80.0);
    CHECK(cfg.kappa_per_s == 0.0);   // ideal-cavity limit accepted
    CHECK(cfg.f_atom_GHz == doctest::Approx(5.01).epsilon(1e-12));
    CHECK(cfg.delta_MHz() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(cfg.delta() == doctest::Approx(two_pi * 10e6).epsilon(1e-12));
    CHECK(cfg.variant == VariantSel::one);
}

TEST_CASE("atom frequency and detuning are one degree of freedom") {
    const ModelConfig by_freq = parse_config("f_atom_GHz = 5.02\n");
    CHECK(by_freq.delta_MHz() == doctest::Approx(20.0).epsilon(1e-9));

    CHECK_THROWS_WITH_AS((void)parse_config("f_atom_GHz = 5.02\ndelta_MHz = 20\n"),
                         doctest::Contains("mutually exclusive"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("delta_MHz = 20\nf_atom_GHz = 5.02\n"),
                         doctest::Contains("mutually exclusive"), ConfigError);

    // a resonant default atom follows an explicit cavity frequency
    const ModelConfig moved = parse_config("f_cavity_GHz = 6\n");
    CHECK(moved.f_atom_GHz == 6.0);
    CHECK(moved.delta_MHz() == 0.0);
}

TEST_CASE("config rejections carry line numbers and guidance") {
    CHECK_THROWS_WITH_AS((void)parse_config("chi = 2.5\n"),
                         doctest::Contains("out of range"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("t_atom_mK = 50\nchi = 0.9\n"),
                         doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("bogus_key = 1\n"),
                         doctest::Contains("valid keys"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("t_atom_K = 0.05\n"),
                         doctest::Contains("unit-suffix mismatch"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("kappa = 100\n"),
                         doctest::Contains("kappa_per_s"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("tau_us = 1\n"),
                         doctest::Contains("tau_ns"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("t_atom_mK\n"),
                         doctest::Contains("key = value"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("t_atom_mK = abc\n"),
                         doctest::Contains("cannot parse number"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("t_atom_mK = 50\nt_atom_mK = 60\n"),
                         doctest::Contains("duplicate"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config("variant = three\n"),
                         doctest::Contains("one|two|both"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("t_atom_mK = -5\n"), ConfigError);
    CHECK_THROWS_AS((void)parse_config("tau_ns = 0\n"), ConfigError);
}

TEST_CASE("derived SI quantities") {
    const ModelConfig cfg = parse_config("");
    CHECK(cfg.omega1() == doctest::Approx(two_pi * 5e9).epsilon(1e-15));
    CHECK(cfg.g() == doctest::Approx(two_pi * 0.5e6).epsilon(1e-15));
    CHECK(cfg.tau_s() == doctest::Approx(50e-9).epsilon(1e-15));
    CHECK(cfg.t_atom_K() == doctest::Approx(0.05).epsilon(1e-15));
    const PairParams pp = cfg.pair_params();
    CHECK(pp.omega == cfg.omega_atom());
    CHECK(pp.lambda == doctest::Approx(two_pi * 5e9).epsilon(1e-15));
    const CollisionParams cp = cfg.collision_params();
    CHECK(cp.delta == 0.0);
    CHECK(cp.chi == 2.0);
}

TEST_CASE("freeze_omega pins the weights frequency, not the filter detuning") {
    ModelConfig cfg = parse_config("delta_MHz = 30\n");
    CHECK(cfg.omega_weights() == cfg.omega_atom());
    cfg.freeze_omega = true;
    // a later swept detuning moves the filter but not the frozen weights
    set_axis_value(cfg, "delta_MHz", 45.0);
    CHECK(cfg.omega_weights() == doctest::Approx(two_pi * 5.03e9).epsilon(1e-15));
    CHECK(cfg.delta() == doctest::Approx(two_pi * 45e6).epsilon(1e-10));
}
