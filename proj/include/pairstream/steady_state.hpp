#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pairstream/constants.hpp"
#include "pairstream/errors.hpp"
#include "pairstream/pair_thermo.hpp"
#include "pairstream/spectral_filter.hpp"

namespace pairstream {

struct CavityEnv {
    double omega1;   // rad/s, cavity frequency, > 0
    double t_bath;   // K, >= 0
    double kappa;    // 1/s, >= 0
};

struct CollisionParams {
    double g;        // rad/s, Jaynes-Cummings coupling
    double tau;      // s, dwell time per collision, > 0
    double chi;      // coherent enhancement for two-atom coupling, in [1, 2]
    double rate_r;   // 1/s, Poisson pair-arrival rate, >= 0
    double delta;    // rad/s, omega - omega1
};

// Validity bounds on the weak-collision coarse graining.
inline constexpr double phi_warn_threshold = 0.3;
inline constexpr double phi_error_threshold = 1.0;
inline constexpr double r_tau_warn_threshold = 0.25;

// Hard limits throw; soft limits come back as warning strings.
inline std::vector<std::string> validate_collision(const CollisionParams& c) {
    if (!(c.tau > 0.0)) throw ValidityError("collision: tau must be > 0");
    if (!(c.g >= 0.0)) throw ValidityError("collision: g must be >= 0");
    if (!(c.rate_r >= 0.0)) throw ValidityError("collision: R must be >= 0");
    if (!(c.chi >= 1.0 && c.chi <= 2.0)) {
        throw ValidityError("collision: chi must lie in [1, 2] (got " +
                            std::to_string(c.chi) + ")");
    }
    const double phi = c.g * c.tau;
    if (phi >= phi_error_threshold) {
        throw ValidityError("collision: phi = g*tau = " + std::to_string(phi) +
                            " >= 1; outside the weak-collision regime");
    }
    const double rt = c.rate_r * c.tau;
    if (rt >= 1.0) {
        throw ValidityError("collision: R*tau = " + std::to_string(rt) +
                            " >= 1; collisions overlap");
    }
    std::vector<std::string> warnings;
    if (phi > phi_warn_threshold) {
        warnings.push_back("phi = " + std::to_string(phi) +
                           " > 0.3; O(phi^2) truncation degrades");
    }
    if (rt > r_tau_warn_threshold) {
        warnings.push_back("R*tau = " + std::to_string(rt) +
                           " > 0.25; Poisson coarse-graining strained");
    }
    return warnings;
}

struct SteadyReport {
    double gamma_down;  // 1/s, net damping
    double j_up;        // 1/s, injection
    double a_up;        // 1/s, total upward birth rate
    double a_down;      // 1/s, total downward death rate
    double n_star;      // steady photon number
    double t_cav;       // K, effective cavity temperature
    double n_bar1;      // bath occupation at omega1
};

// Bose occupation of the bath at the cavity frequency.
inline double bath_occupation(const CavityEnv& env) {
    if (!(env.omega1 > 0.0)) throw ValidityError("bath_occupation: omega1 must be > 0");
    if (!(env.t_bath >= 0.0)) throw ValidityError("bath_occupation: t_bath must be >= 0");
    if (env.t_bath == 0.0) return 0.0;
    const double x = quantum_temperature(env.omega1) / env.t_bath;
    return 1.0 / std::expm1(x);
}

// Exact Bose inversion of a steady occupation; 0 K for n_star = 0.
inline double cavity_temperature(double n_star, double omega1) {
    if (n_star == 0.0) return 0.0;
    if (!(n_star > 0.0)) {
        throw ValidityError("cavity_temperature: n_star must be >= 0 (got " +
                            std::to_string(n_star) + ")");
    }
    return quantum_temperature(omega1) / std::log1p(1.0 / n_star);
}

// Detuning-dressed damping/injection and birth-death rates, plus the
// derived steady state. phi_eff^2 = phi^2 for one-atom and chi*phi^2 for
// two-atom coupling; both channels are gated by the same L(delta).
inline SteadyReport rates(const CavityEnv& env, const CollisionParams& coll,
                          const StreamCoeffs& coeffs) {
    validate_collision(coll);
    if (!(env.kappa >= 0.0)) throw ValidityError("rates: kappa must be >= 0");

    const double phi = coll.g * coll.tau;
    const double phi_eff_sq =
        phi * phi * (coeffs.variant == CouplingVariant::two_atom ? coll.chi : 1.0);
    const double l_delta =
        lorentzian_filter({coll.delta, env.kappa, coll.tau}).l_delta;
    const double stream = coll.rate_r * phi_eff_sq * l_delta;

    SteadyReport rep;
    rep.n_bar1 = bath_occupation(env);
    rep.gamma_down = env.kappa + coeffs.asymmetry * stream;
    rep.j_up = env.kappa * rep.n_bar1 + coeffs.r1 * stream;
    rep.a_up = rep.j_up;
    rep.a_down = env.kappa * (rep.n_bar1 + 1.0) + coeffs.r2 * stream;
    if (!(rep.gamma_down > 0.0)) {
        throw ValidityError("rates: gamma_down = " + std::to_string(rep.gamma_down) +
                            " <= 0; no stable steady state");
    }
    rep.n_star = rep.j_up / rep.gamma_down;
    rep.t_cav = cavity_temperature(rep.n_star, env.omega1);
    return rep;
}

inline double n_star(const SteadyReport& rep) {
    if (!(rep.gamma_down > 0.0)) {
        throw ValidityError("n_star: gamma_down must be > 0");
    }
    return rep.j_up / rep.gamma_down;
}

// Closed-form relaxation n(t) = n* + (n0 - n*) e^{-gamma_down t}.
inline double n_of_t(const SteadyReport& rep, double n0, double t) {
    if (!(t >= 0.0)) throw ValidityError("n_of_t: t must be >= 0");
    return rep.n_star + (n0 - rep.n_star) * std::exp(-rep.gamma_down * t);
}

}  // namespace pairstream
