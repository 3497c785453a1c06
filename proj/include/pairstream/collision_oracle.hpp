#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pairstream/errors.hpp"
#include "pairstream/fock_dist.hpp"
#include "pairstream/pair_thermo.hpp"
#include "pairstream/steady_state.hpp"

namespace pairstream {

// 4x4 real density matrix of one correlated pair in the
// {|ee>, |eg>, |ge>, |gg>} product basis.
struct PairState {
    std::array<std::array<double, 4>, 4> m{};
};

// Thermal pair state: diagonal (rho_e, rho_d, rho_d, rho_g) with the
// eg<->ge coherence rho_nd. Eigenvalues are rho_e, rho_g, rho_d +- rho_nd.
inline PairState build_pair_state(const PairWeights& w) {
    const double trace = w.rho_e + w.rho_g + 2.0 * w.rho_d;
    if (std::fabs(trace - 1.0) > 1e-10) {
        throw ValidityError("build_pair_state: weights trace = " +
                            std::to_string(trace));
    }
    if (w.rho_d - std::fabs(w.rho_nd) < -1e-15 || w.rho_e < 0.0 || w.rho_g < 0.0) {
        throw ValidityError("build_pair_state: weights are not positive semidefinite"
                            " (|rho_nd| > rho_d)");
    }
    PairState s;
    s.m[0][0] = w.rho_e;
    s.m[1][1] = w.rho_d;
    s.m[2][2] = w.rho_d;
    s.m[3][3] = w.rho_g;
    s.m[1][2] = w.rho_nd;
    s.m[2][1] = w.rho_nd;
    return s;
}

namespace detail {

// Cyclic Jacobi diagonalization of a k x k real symmetric matrix, k <= 4.
// Returns eigenvalues in d and orthonormal eigenvectors as columns of v.
inline void jacobi_eigen(std::array<std::array<double, 4>, 4>& a, int k,
                         std::array<double, 4>& d,
                         std::array<std::array<double, 4>, 4>& v) {
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) v[i][j] = (i == j) ? 1.0 : 0.0;
    }
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-300) break;
        for (int p = 0; p < k; ++p) {
            for (int q = p + 1; q < k; ++q) {
                if (std::fabs(a[p][q]) < 1e-40) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < k; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (int i = 0; i < k; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (int i = 0; i < k; ++i) {
                    const double vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }
    for (int i = 0; i < k; ++i) d[i] = a[i][i];
}

}  // namespace detail

// Exact one-collision map on a diagonal cavity state, precomputed as a
// pentadiagonal stochastic matrix on the photon populations.
//
// The interaction conserves N = n_photons + n_atom_excitations, so the
// joint unitary exp(-i H tau) factors into blocks of dimension <= 4 built
// from H = delta*(n_A + n_B) + g(a sig+ + a' sig-) [one or both atoms]
// (+ the lambda exchange term if enabled). A diagonal cavity times the
// pair state has no coherence between N-sectors, hence the cavity stays
// exactly diagonal and only |U_ij|^2 and the eg/ge interference column
// enter the population map.
class CollisionKernel {
  public:
    CollisionKernel(int n_max, const PairState& pair, double g, double tau,
                    double delta, CouplingVariant mode,
                    bool include_lambda = false, double lambda = 0.0)
        : n_max_(n_max) {
        if (n_max < 1) throw ConfigError("CollisionKernel: n_max must be >= 1");
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (i == j || (i == 1 && j == 2) || (i == 2 && j == 1)) continue;
                if (std::fabs(pair.m[i][j]) > 1e-12) {
                    throw ValidityError(
                        "CollisionKernel: pair state carries coherences outside the"
                        " eg/ge block; cavity diagonality would be lost");
                }
            }
        }
        for (auto& diag : band_) diag.assign(static_cast<std::size_t>(n_max) + 1, 0.0);

        // Local basis per sector: (atom state, excitation count).
        // 0 = ee (2), 1 = eg (1), 2 = ge (1), 3 = gg (0).
        static constexpr int excitations[4] = {2, 1, 1, 0};
        const std::array<double, 4> weight = {pair.m[0][0], pair.m[1][1],
                                              pair.m[2][2], pair.m[3][3]};
        const double coherence = pair.m[1][2];

        using cplx = std::complex<double>;
        for (int sector = 0; sector <= n_max + 2; ++sector) {
            int local[4];   // local index of each atom state, -1 if photon out of range
            int photon[4];
            int k = 0;
            for (int s = 0; s < 4; ++s) {
                const int n = sector - excitations[s];
                if (n >= 0 && n <= n_max) {
                    local[s] = k++;
                    photon[s] = n;
                } else {
                    local[s] = -1;
                }
            }
            if (k == 0) continue;

            std::array<std::array<double, 4>, 4> h{};
            auto add_sym = [&](int sa, int sb, double val) {
                if (local[sa] < 0 || local[sb] < 0) return;
                h[local[sa]][local[sb]] += val;
                h[local[sb]][local[sa]] += val;
            };
            for (int s = 0; s < 4; ++s) {
                if (local[s] >= 0) h[local[s]][local[s]] = delta * excitations[s];
            }
            // a sig_A+ : gg(n) <-> eg(n-1), ge(n) <-> ee(n-1)
            if (local[3] >= 0) add_sym(3, 1, g * std::sqrt(double(photon[3])));
            if (local[2] >= 0) add_sym(2, 0, g * std::sqrt(double(photon[2])));
            if (mode == CouplingVariant::two_atom) {
                // a sig_B+ : gg(n) <-> ge(n-1), eg(n) <-> ee(n-1)
                if (local[3] >= 0) add_sym(3, 2, g * std::sqrt(double(photon[3])));
                if (local[1] >= 0) add_sym(1, 0, g * std::sqrt(double(photon[1])));
            }
            if (include_lambda) add_sym(1, 2, lambda);

            std::array<double, 4> eig;
            std::array<std::array<double, 4>, 4> vec;
            detail::jacobi_eigen(h, k, eig, vec);

            // U = V exp(-i eig tau) V^T on the local basis
            std::array<std::array<cplx, 4>, 4> u{};
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j) {
                    cplx acc(0.0, 0.0);
                    for (int e = 0; e < k; ++e) {
                        acc += vec[i][e] * vec[j][e] *
                               std::polar(1.0, -eig[e] * tau);
                    }
                    u[i][j] = acc;
                }
            }

            for (int si = 0; si < 4; ++si) {
                if (local[si] < 0) continue;
                const int row = photon[si];
                for (int sj = 0; sj < 4; ++sj) {
                    if (local[sj] < 0) continue;
                    const double mij = std::norm(u[local[si]][local[sj]]);
                    band_at(row, photon[sj]) += mij * weight[sj];
                }
                if (local[1] >= 0 && local[2] >= 0) {
                    const cplx inter =
                        u[local[si]][local[1]] * std::conj(u[local[si]][local[2]]);
                    band_at(row, photon[1]) += 2.0 * inter.real() * coherence;
                }
            }
        }

        // Column sums must be exactly 1: trace preservation over the map.
        for (int src = 0; src <= n_max; ++src) {
            double col = 0.0;
            for (int off = -2; off <= 2; ++off) {
                const int dst = src + off;
                if (dst >= 0 && dst <= n_max) col += band_at(dst, src);
            }
            if (std::fabs(col - 1.0) > 1e-12) {
                throw InternalError("CollisionKernel: column " + std::to_string(src) +
                                    " sums to " + std::to_string(col));
            }
        }
    }

    int n_max() const { return n_max_; }

    // out[n] = sum_j band(n, j) p[j], bandwidth 2.
    void apply(const std::vector<double>& in, std::vector<double>& out) const {
        const int nm = n_max_;
        for (int n = 0; n <= nm; ++n) {
            double acc = 0.0;
            const int lo = n >= 2 ? -2 : -n;
            const int hi = n + 2 <= nm ? 2 : nm - n;
            for (int off = lo; off <= hi; ++off) {
                acc += band_[static_cast<std::size_t>(off) + 2][static_cast<std::size_t>(n)] *
                       in[static_cast<std::size_t>(n + off)];
            }
            out[static_cast<std::size_t>(n)] = acc;
        }
    }

    void apply_inplace(FockDist& dist, std::vector<double>& scratch) const {
        scratch.resize(dist.probs.size());
        apply(dist.probs, scratch);
        dist.probs.swap(scratch);
    }

  private:
    double& band_at(int dst, int src) {
        return band_[static_cast<std::size_t>(src - dst) + 2]
                    [static_cast<std::size_t>(dst)];
    }

    int n_max_;
    std::array<std::vector<double>, 5> band_;  // band_[off+2][dst] maps p[dst+off]
};

// Single exact collision; convenience wrapper used by tests and the CLI.
inline FockDist collide(const FockDist& cav, const PairState& pair,
                        const CollisionParams& coll, CouplingVariant mode,
                        bool include_lambda = false, double lambda = 0.0) {
    CollisionKernel kernel(cav.n_max(), pair, coll.g, coll.tau, coll.delta, mode,
                           include_lambda, lambda);
    FockDist out = cav;
    std::vector<double> scratch;
    kernel.apply_inplace(out, scratch);
    out.enforce_guards("collide");
    return out;
}

// Thermal contact between collisions: birth-death generator with rates
// kappa(n_bar+1)n down and kappa n_bar (n+1) up, reflecting at n_max.
// Propagated by uniformization: p(t) = e^{-Lt} sum_k (Lt)^k/k! P^k p with
// P = I + Q/L, which preserves trace and positivity term by term.
class BathPropagator {
  public:
    BathPropagator(int n_max, double kappa, double n_bar1)
        : n_max_(n_max), kappa_(kappa) {
        const std::size_t dim = static_cast<std::size_t>(n_max) + 1;
        up_.assign(dim, 0.0);
        down_.assign(dim, 0.0);
        for (int n = 0; n <= n_max; ++n) {
            down_[static_cast<std::size_t>(n)] = kappa * (n_bar1 + 1.0) * n;
            if (n < n_max) {
                up_[static_cast<std::size_t>(n)] = kappa * n_bar1 * (n + 1.0);
            }
        }
        rate_scale_ = 0.0;
        for (std::size_t n = 0; n < dim; ++n) {
            rate_scale_ = std::max(rate_scale_, up_[n] + down_[n]);
        }
    }

    void step(FockDist& dist, double dt, std::vector<double>& acc,
              std::vector<double>& cur, std::vector<double>& nxt) const {
        if (!(dt >= 0.0)) throw ValidityError("bath_step: dt must be >= 0");
        if (kappa_ == 0.0 || dt == 0.0 || rate_scale_ == 0.0) return;
        const double total = rate_scale_ * dt;
        const int substeps = static_cast<int>(total / 200.0) + 1;
        const double t_sub = dt / substeps;
        const double lt = rate_scale_ * t_sub;
        const std::size_t dim = dist.probs.size();
        acc.resize(dim);
        cur.resize(dim);
        nxt.resize(dim);
        const int max_terms =
            static_cast<int>(lt + 60.0 * std::sqrt(lt + 1.0)) + 100;
        for (int s = 0; s < substeps; ++s) {
            cur = dist.probs;
            double w = std::exp(-lt);   // Poisson weight, k = 0
            double cum = w;
            for (std::size_t n = 0; n < dim; ++n) acc[n] = w * cur[n];
            for (int k = 1; k <= max_terms; ++k) {
                // nxt = (I + Q/L) cur
                for (std::size_t n = 0; n < dim; ++n) {
                    double x = (1.0 - (up_[n] + down_[n]) / rate_scale_) * cur[n];
                    if (n > 0) x += up_[n - 1] / rate_scale_ * cur[n - 1];
                    if (n + 1 < dim) x += down_[n + 1] / rate_scale_ * cur[n + 1];
                    nxt[n] = x;
                }
                cur.swap(nxt);
                w *= lt / k;
                cum += w;
                for (std::size_t n = 0; n < dim; ++n) acc[n] += w * cur[n];
                if (k > lt && w < 1e-17 * cum) break;
            }
            // fold the truncated Poisson tail back into the trace
            for (std::size_t n = 0; n < dim; ++n) dist.probs[n] = acc[n] / cum;
        }
    }

  private:
    int n_max_;
    double kappa_;
    double rate_scale_;              // uniformization constant Lambda
    std::vector<double> up_, down_;  // birth/death rates per level
};

inline FockDist bath_step(const FockDist& cav, const CavityEnv& env, double dt) {
    BathPropagator prop(cav.n_max(), env.kappa, bath_occupation(env));
    FockDist out = cav;
    std::vector<double> a, b, c;
    prop.step(out, dt, a, b, c);
    out.enforce_guards("bath_step");
    return out;
}

enum class ArrivalMode { poisson, mean_field };

inline const char* to_string(ArrivalMode a) {
    return a == ArrivalMode::poisson ? "poisson" : "mean-field";
}

struct OracleConfig {
    PairParams pair{};
    CavityEnv env{};
    CollisionParams coll{};
    CouplingVariant mode = CouplingVariant::one_atom;
    ArrivalMode arrival = ArrivalMode::poisson;
    std::uint64_t seed = 1;
    int n_max = 30;
    std::int64_t collisions = 400000;
    std::int64_t burn_in = -1;   // < 0: 5/gamma_down of simulated time
    bool include_lambda_during_collision = false;
    int batches = 50;
    int trajectory_points = 512;  // 0 disables trajectory recording
};

struct TrajectorySample {
    double t;          // s
    double n_mean;
    double tail_mass;
};

struct OracleResult {
    double n_estimate = 0.0;
    double std_error = 0.0;
    std::int64_t collisions_run = 0;
    std::int64_t burn_in_used = 0;
    double sim_time = 0.0;   // s
    std::vector<TrajectorySample> trajectory;
};

namespace detail {

// Uniform double in (0, 1), identical on every conforming platform.
inline double uniform_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Time average of <n>(t) over a bath gap of length dt starting from n0:
// the mean relaxes exactly as n_bar + (n0 - n_bar) e^{-kappa t}.
inline double gap_time_average(double n0, double n_bar, double kappa, double dt) {
    const double x = kappa * dt;
    if (x < 1e-12) return n0 + (n_bar - n0) * 0.5 * x;
    return n_bar + (n0 - n_bar) * (-std::expm1(-x)) / x;
}

}  // namespace detail

// Repeated-interaction run to steady state. Poisson mode draws Exp(R)
// inter-arrival gaps from the seeded generator; mean-field mode uses the
// deterministic gap 1/R. The estimate is the exact time average of <n>
// over the post-burn-in window, with a batch-means standard error.
inline OracleResult run_to_steady(const OracleConfig& cfg) {
    if (cfg.n_max < 10) throw ConfigError("oracle: n_max must be >= 10");
    if (cfg.batches < 4) throw ConfigError("oracle: need at least 4 batches");
    validate_collision(cfg.coll);

    const PairWeights weights = compute_weights(cfg.pair);
    const double n_bar1 = bath_occupation(cfg.env);

    OracleResult res;

    // No stream: pure thermal relaxation; steady state is exact.
    if (cfg.coll.rate_r == 0.0) {
        FockDist state = FockDist::vacuum(cfg.n_max);
        if (cfg.env.kappa > 0.0) {
            BathPropagator bath(cfg.n_max, cfg.env.kappa, n_bar1);
            std::vector<double> a, b, c;
            const int chunks = 16;
            const double dt = (60.0 / cfg.env.kappa) / chunks;
            for (int i = 0; i < chunks; ++i) {
                bath.step(state, dt, a, b, c);
                state.enforce_guards("oracle bath chunk");
                res.sim_time += dt;
                res.trajectory.push_back({res.sim_time, state.mean(), state.tail_mass()});
            }
        }
        res.n_estimate = state.mean();
        res.std_error = 0.0;
        return res;
    }

    const StreamCoeffs coeffs = stream_coeffs(weights, cfg.mode);
    const double gamma_down = rates(cfg.env, cfg.coll, coeffs).gamma_down;

    std::int64_t burn = cfg.burn_in;
    if (burn < 0) {
        burn = static_cast<std::int64_t>(
            std::ceil(5.0 * cfg.coll.rate_r / gamma_down));
    }
    if (cfg.collisions <= burn) {
        throw ConfigError("oracle: collisions (" + std::to_string(cfg.collisions) +
                          ") must exceed burn-in (" + std::to_string(burn) + ")");
    }

    const PairState pair = build_pair_state(weights);
    CollisionKernel kernel(cfg.n_max, pair, cfg.coll.g, cfg.coll.tau, cfg.coll.delta,
                           cfg.mode, cfg.include_lambda_during_collision,
                           cfg.pair.lambda);
    BathPropagator bath(cfg.n_max, cfg.env.kappa, n_bar1);

    FockDist state = FockDist::vacuum(cfg.n_max);
    std::mt19937_64 rng(cfg.seed);
    std::vector<double> s1, s2, s3;

    const std::int64_t measured = cfg.collisions - burn;
    const int n_batches = cfg.batches;
    std::vector<double> batch_time(static_cast<std::size_t>(n_batches), 0.0);
    std::vector<double> batch_weighted(static_cast<std::size_t>(n_batches), 0.0);

    const std::int64_t traj_stride =
        cfg.trajectory_points > 0
            ? std::max<std::int64_t>(1, cfg.collisions / cfg.trajectory_points)
            : 0;

    double t = 0.0;
    double expected_trace = 1.0;
    for (std::int64_t i = 0; i < cfg.collisions; ++i) {
        double gap;
        if (cfg.arrival == ArrivalMode::poisson) {
            gap = -std::log(detail::uniform_open(rng)) / cfg.coll.rate_r;
        } else {
            gap = 1.0 / cfg.coll.rate_r;
        }
        const double n_pre = state.mean();
        if (cfg.env.kappa > 0.0) bath.step(state, gap, s1, s2, s3);
        t += gap;

        if (i >= burn) {
            const std::size_t b = static_cast<std::size_t>(
                ((i - burn) * n_batches) / measured);
            batch_time[b] += gap;
            batch_weighted[b] += gap * detail::gap_time_average(
                                           n_pre, n_bar1, cfg.env.kappa, gap);
        }

        kernel.apply_inplace(state, s1);

        const double trace = state.total();
        if (std::fabs(trace - expected_trace) > 1e-11) {
            throw InternalError("oracle: trace jump at collision " + std::to_string(i));
        }
        if (!(state.tail_mass() < tail_mass_limit)) {
            throw TruncationError("oracle: tail mass " +
                                  detail::fmt_compact(state.tail_mass()) +
                                  " at collision " + std::to_string(i) + " (t = " +
                                  detail::fmt_compact(t) + " s); raise n_max");
        }
        // periodic float hygiene; drift per step is ~1e-16
        if ((i & 0x3fff) == 0x3fff) {
            for (auto& p : state.probs) p /= trace;
            expected_trace = 1.0;
        } else {
            expected_trace = trace;
        }

        if (traj_stride > 0 && i % traj_stride == 0) {
            res.trajectory.push_back({t, state.mean(), state.tail_mass()});
        }
    }

    double time_total = 0.0, weighted_total = 0.0;
    for (int b = 0; b < n_batches; ++b) {
        time_total += batch_time[static_cast<std::size_t>(b)];
        weighted_total += batch_weighted[static_cast<std::size_t>(b)];
    }
    res.n_estimate = weighted_total / time_total;
    res.collisions_run = cfg.collisions;
    res.burn_in_used = burn;
    res.sim_time = t;

    std::vector<double> batch_mean(static_cast<std::size_t>(n_batches));
    double var = 0.0;
    for (int b = 0; b < n_batches; ++b) {
        batch_mean[static_cast<std::size_t>(b)] =
            batch_weighted[static_cast<std::size_t>(b)] /
            batch_time[static_cast<std::size_t>(b)];
        const double d = batch_mean[static_cast<std::size_t>(b)] - res.n_estimate;
        var += d * d;
    }
    res.std_error = std::sqrt(var / (double(n_batches) * double(n_batches - 1)));

    // Drift test: a surviving transient shows up as a systematic difference
    // between the two halves of the batch sequence.
    const int half = n_batches / 2;
    double m1 = 0.0, m2 = 0.0;
    for (int b = 0; b < half; ++b) m1 += batch_mean[static_cast<std::size_t>(b)];
    for (int b = half; b < n_batches; ++b) m2 += batch_mean[static_cast<std::size_t>(b)];
    m1 /= half;
    m2 /= (n_batches - half);
    // half-mean difference has standard error ~ 2x the grand standard error
    const double drift = std::fabs(m2 - m1);
    if (drift > 8.0 * res.std_error &&
        drift > 1e-3 * (1.0 + std::fabs(res.n_estimate))) {
        throw ConvergenceError(
            "oracle: trajectory still drifting after burn-in (first half " +
            std::to_string(m1) + ", second half " + std::to_string(m2) +
            ", std error " + std::to_string(res.std_error) +
            "); increase burn-in or collisions");
    }
    return res;
}

}  // namespace pairstream
