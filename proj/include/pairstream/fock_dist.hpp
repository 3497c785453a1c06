#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "pairstream/errors.hpp"

namespace pairstream {

namespace detail {

inline std::string fmt_compact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}  // namespace detail

// Guards on a physical photon-number distribution.
inline constexpr double trace_tolerance = 1e-9;
inline constexpr double negativity_tolerance = 1e-12;
inline constexpr double tail_mass_limit = 1e-6;

// Diagonal cavity state on the truncated Fock space {|0>..|n_max>}.
struct FockDist {
    std::vector<double> probs;

    int n_max() const { return static_cast<int>(probs.size()) - 1; }
    double tail_mass() const { return probs.back(); }

    double total() const {
        double s = 0.0;
        for (double p : probs) s += p;
        return s;
    }

    double mean() const {
        double m = 0.0;
        for (std::size_t n = 1; n < probs.size(); ++n) m += double(n) * probs[n];
        return m;
    }

    static FockDist vacuum(int n_max) {
        if (n_max < 1) throw ConfigError("FockDist: n_max must be >= 1");
        FockDist d;
        d.probs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
        d.probs[0] = 1.0;
        return d;
    }

    // Truncated, renormalized geometric distribution with parameter
    // q = n_bar/(n_bar+1); the stationary state of the thermal contact.
    static FockDist thermal(int n_max, double n_bar) {
        if (n_bar == 0.0) return vacuum(n_max);
        if (!(n_bar > 0.0)) throw ConfigError("FockDist: n_bar must be >= 0");
        FockDist d;
        d.probs.resize(static_cast<std::size_t>(n_max) + 1);
        const double q = n_bar / (n_bar + 1.0);
        double w = 1.0, s = 0.0;
        for (auto& p : d.probs) {
            p = w;
            s += w;
            w *= q;
        }
        for (auto& p : d.probs) p /= s;
        return d;
    }

    // Clip rounding negatives and verify trace and tail guards.
    void enforce_guards(const char* where) {
        double s = 0.0;
        for (auto& p : probs) {
            if (p < 0.0) {
                if (p < -negativity_tolerance) {
                    throw InternalError(std::string(where) +
                                        ": negative probability " +
                                        detail::fmt_compact(p));
                }
                p = 0.0;
            }
            s += p;
        }
        if (std::fabs(s - 1.0) > trace_tolerance) {
            throw InternalError(std::string(where) + ": trace drifted to " +
                                detail::fmt_compact(s));
        }
        if (!(tail_mass() < tail_mass_limit)) {
            throw TruncationError(std::string(where) + ": tail mass p[n_max] = " +
                                  detail::fmt_compact(tail_mass()) +
                                  " exceeds 1e-6; increase n_max");
        }
    }
};

}  // namespace pairstream
