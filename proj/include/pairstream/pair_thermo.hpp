#pragma once

#include <cmath>
#include <string>

#include "pairstream/constants.hpp"
#include "pairstream/errors.hpp"

namespace pairstream {

// Preparation of one correlated two-level pair of the stream.
struct PairParams {
    double t_atom;   // K, > 0
    double omega;    // rad/s, atomic level splitting, > 0
    double lambda;   // rad/s, intra-pair exchange; sign allowed
};

// Thermal weights of the pair state in the {ee, eg, ge, gg} product basis.
// rho_e + rho_g + 2*rho_d = 1; rho_nd is the eg<->ge coherence.
struct PairWeights {
    double rho_e;
    double rho_g;
    double rho_d;
    double rho_nd;
    double z;          // partition function 2[cosh(b*hw) + cosh(b*hl)]
    // rho_g - rho_e evaluated without forming the weights first; the naive
    // difference rounds to zero once rho_d dominates by ~1e16
    double asymmetry;
};

enum class CouplingVariant { one_atom, two_atom };

inline const char* to_string(CouplingVariant v) {
    return v == CouplingVariant::one_atom ? "one-atom" : "two-atom";
}

// Effective up/down coefficients seen by the cavity.
// one-atom: r1 + r2 = 1.  two-atom: r1 + r2 = 1 + 2*rho_nd.
// In both variants r2 - r1 = rho_g - rho_e; the stable evaluation rides
// along because the damping bias is what downstream rates consume.
struct StreamCoeffs {
    double r1;
    double r2;
    double asymmetry;   // r2 - r1
    CouplingVariant variant;
};

// Thermal weights of the pair. Always evaluated with the largest exponent
// factored out, so beta*hbar*omega up to ~1e4 stays finite; weights that
// underflow to zero are rejected.
inline PairWeights compute_weights(const PairParams& p) {
    if (!(p.t_atom > 0.0)) {
        throw ValidityError("compute_weights: t_atom must be > 0 (got " +
                            std::to_string(p.t_atom) + " K)");
    }
    if (!(p.omega > 0.0)) {
        throw ValidityError("compute_weights: omega must be > 0");
    }
    const double beta_h = hbar / (boltzmann_k * p.t_atom);  // s
    const double xw = beta_h * p.omega;
    const double xl = beta_h * p.lambda;   // may be negative
    const double axl = std::fabs(xl);
    const double m = std::max(xw, axl);

    // z * e^{-m}; at least one exponent is zero, so zs >= 1.
    const double zs = std::exp(xw - m) + std::exp(-xw - m) +
                      std::exp(axl - m) + std::exp(-axl - m);

    PairWeights w;
    w.rho_g = std::exp(xw - m) / zs;
    w.rho_e = std::exp(-xw - m) / zs;
    w.rho_d = 0.5 * (std::exp(axl - m) + std::exp(-axl - m)) / zs;
    // sinh keeps the sign of lambda; rho_nd = -sinh(xl)/Z
    w.rho_nd = -0.5 * (std::exp(xl - m) - std::exp(-xl - m)) / zs;
    w.z = std::exp(m) * zs;   // may be +inf for extreme exponents; weights stay finite
    // e^{xw-m} - e^{-xw-m} = -e^{xw-m} expm1(-2 xw), stable for any xw >= 0
    w.asymmetry = -std::exp(xw - m) * std::expm1(-2.0 * xw) / zs;

    if (!(w.rho_e > 0.0) || !(w.rho_g > 0.0) || !(w.rho_d > 0.0) ||
        !std::isfinite(w.rho_e + w.rho_g + w.rho_d + w.rho_nd)) {
        throw ValidityError(
            "compute_weights: thermal weight under/overflow at beta*hbar*omega = " +
            std::to_string(xw) + ", beta*hbar*lambda = " + std::to_string(xl));
    }
    return w;
}

// Only atom A couples: marginals of A.
inline StreamCoeffs stream_coeffs_one(const PairWeights& w) {
    return {w.rho_e + w.rho_d, w.rho_g + w.rho_d, w.asymmetry,
            CouplingVariant::one_atom};
}

// Both atoms couple: collective correlators pick up the coherence rho_nd.
inline StreamCoeffs stream_coeffs_two(const PairWeights& w) {
    return {w.rho_e + w.rho_d + w.rho_nd, w.rho_g + w.rho_d + w.rho_nd,
            w.asymmetry, CouplingVariant::two_atom};
}

inline StreamCoeffs stream_coeffs(const PairWeights& w, CouplingVariant v) {
    return v == CouplingVariant::one_atom ? stream_coeffs_one(w)
                                          : stream_coeffs_two(w);
}

}  // namespace pairstream
