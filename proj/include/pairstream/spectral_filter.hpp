#pragma once

#include <cmath>
#include <complex>

#include "pairstream/errors.hpp"

namespace pairstream {

struct FilterParams {
    double delta;    // rad/s, atom-cavity detuning
    double kappa;    // 1/s, cavity energy-damping rate, >= 0
    double tau;      // s, collision duration, > 0
};

struct FilterResult {
    double i_delta;     // s^2, exact finite-time/damped overlap kernel
    double l_delta;     // dimensionless, in (0, 1]
    double gamma_over;  // 1/s, kappa + 1/tau
};

namespace detail {

// f(w) = (e^{-w} - 1 + w)/w^2, analytic with f(0) = 1/2. The direct form
// cancels catastrophically for |w| << 1, so small arguments use the series
// sum_k (-w)^k/(k+2)!.
inline std::complex<double> kernel_f(std::complex<double> w) {
    if (std::abs(w) < 0.5) {
        std::complex<double> term(1.0, 0.0);   // (-w)^k / k!
        std::complex<double> sum(0.0, 0.0);
        double fact_shift = 2.0;                // (k+1)*(k+2)
        for (int k = 0; k < 16; ++k) {
            sum += term / fact_shift;
            term *= -w / static_cast<double>(k + 1);
            fact_shift = static_cast<double>(k + 2) * static_cast<double>(k + 3);
        }
        return sum;
    }
    return (std::exp(-w) - 1.0 + w) / (w * w);
}

}  // namespace detail

// Exact double-integral kernel I(delta) of the damped finite collision
// window: I = 2 tau^2 Re f(alpha tau), alpha = kappa/2 - i delta.
// Limits: tau^2 sinc^2(delta tau/2) for kappa*tau -> 0, Lorentzian of
// half width kappa/2 for kappa*tau >> 1.
inline double exact_kernel(const FilterParams& p) {
    if (!(p.tau > 0.0)) throw ValidityError("exact_kernel: tau must be > 0");
    if (!(p.kappa >= 0.0)) throw ValidityError("exact_kernel: kappa must be >= 0");
    const std::complex<double> w(0.5 * p.kappa * p.tau, -p.delta * p.tau);
    return 2.0 * p.tau * p.tau * detail::kernel_f(w).real();
}

// Lorentzian detuning filter with overlap width Gamma_over = kappa + 1/tau,
// the sum of the two limiting half-widths. Rescales the per-collision
// strength phi^2 -> phi^2 L(delta).
inline FilterResult lorentzian_filter(const FilterParams& p) {
    if (!(p.tau > 0.0)) throw ValidityError("lorentzian_filter: tau must be > 0");
    if (!(p.kappa >= 0.0)) throw ValidityError("lorentzian_filter: kappa must be >= 0");
    FilterResult r;
    r.gamma_over = p.kappa + 1.0 / p.tau;
    const double u = 2.0 * p.delta / r.gamma_over;
    r.l_delta = 1.0 / (1.0 + u * u);
    r.i_delta = exact_kernel(p);
    return r;
}

}  // namespace pairstream
