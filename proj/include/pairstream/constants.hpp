#pragma once

#include <numbers>

namespace pairstream {

// SI-2019 exact values; hbar derived from h.
inline constexpr double planck_h = 6.62607015e-34;     // J s
inline constexpr double boltzmann_k = 1.380649e-23;    // J/K
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double hbar = planck_h / two_pi;      // J s

// hbar*omega/kB for an angular frequency in rad/s, in kelvin.
inline constexpr double quantum_temperature(double omega) {
    return hbar * omega / boltzmann_k;
}

}  // namespace pairstream
