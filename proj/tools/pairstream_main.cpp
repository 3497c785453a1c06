// pairstream: steady-state and Monte Carlo evaluation of a cavity cooled by
// a Poisson stream of correlated two-level pairs.
//
// Subcommands: weights | point | sweep | oracle | figure <id>
// Exit codes: 0 success, 2 config error, 3 physics-validity error,
//             4 oracle non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pairstream/collision_oracle.hpp"
#include "pairstream/config.hpp"
#include "pairstream/errors.hpp"
#include "pairstream/pair_thermo.hpp"
#include "pairstream/sweep.hpp"
#include "pairstream/version.hpp"

namespace ps = pairstream;
using ordered_json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;   // key=value
    std::string variant;
    bool freeze_omega = false;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "configuration file (key = value lines)");
    cmd->add_option("--set", opts.overrides, "override one key, e.g. --set t_bath_K=1")
        ->take_all();
    cmd->add_option("--variant", opts.variant, "coupling variant: one|two|both")
        ->check(CLI::IsMember({"one", "two", "both"}));
    cmd->add_flag("--freeze-omega", opts.freeze_omega,
                  "keep pair weights at the configured atomic frequency while"
                  " delta sweeps only the detuning filter");
    cmd->add_option("--out", opts.out_path, "output file (default: stdout)");
}

ps::ModelConfig resolve_config(const CommonOpts& opts) {
    ps::ModelConfig cfg;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw ps::ConfigError("cannot open config file '" + opts.config_path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        cfg = ps::parse_config(buf.str());
    }
    for (const auto& kv : opts.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ps::ConfigError("--set expects key=value, got '" + kv + "'");
        }
        ps::apply_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!opts.variant.empty()) {
        ps::apply_config_value(cfg, "variant", opts.variant);
    }
    if (opts.freeze_omega) cfg.freeze_omega = true;
    return cfg;
}

void emit_warnings(const ps::ModelConfig& cfg) {
    for (const auto& w : ps::validate_collision(cfg.collision_params())) {
        std::cerr << "warning: " << w << "\n";
    }
}

void write_output(const CommonOpts& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) throw ps::ConfigError("cannot open output file '" + opts.out_path + "'");
    out << text;
}

ordered_json config_json(const ps::ModelConfig& cfg) {
    ordered_json j;
    j["t_atom_mK"] = cfg.t_atom_mK;
    j["t_bath_K"] = cfg.t_bath_K;
    j["f_cavity_GHz"] = cfg.f_cavity_GHz;
    j["f_atom_GHz"] = cfg.f_atom_GHz;
    j["delta_MHz"] = cfg.delta_MHz();
    j["f_lambda_GHz"] = cfg.f_lambda_GHz;
    j["g_over_2pi_MHz"] = cfg.g_over_2pi_MHz;
    j["tau_ns"] = cfg.tau_ns;
    j["rate_R_per_s"] = cfg.rate_R_per_s;
    j["kappa_per_s"] = cfg.kappa_per_s;
    j["chi"] = cfg.chi;
    j["variant"] = ps::to_string(cfg.variant);
    j["freeze_omega"] = cfg.freeze_omega;
    return j;
}

ordered_json variant_json(const ps::VariantEval& ve, double t_atom_K) {
    ordered_json j;
    j["r1"] = ve.coeffs.r1;
    j["r2"] = ve.coeffs.r2;
    j["gamma_down_per_s"] = ve.report.gamma_down;
    j["j_up_per_s"] = ve.report.j_up;
    j["a_up_per_s"] = ve.report.a_up;
    j["a_down_per_s"] = ve.report.a_down;
    j["n_star"] = ve.report.n_star;
    j["t_cav_K"] = ve.report.t_cav;
    j["t_cav_mK"] = ve.report.t_cav * 1e3;
    j["ratio_t_cav_over_t_atom"] = ve.report.t_cav / t_atom_K;
    return j;
}

int cmd_weights(const CommonOpts& opts) {
    const ps::ModelConfig cfg = resolve_config(opts);
    const ps::PairWeights w = ps::compute_weights(cfg.pair_params());
    const ps::StreamCoeffs one = ps::stream_coeffs_one(w);
    const ps::StreamCoeffs two = ps::stream_coeffs_two(w);
    const double beta_h = ps::hbar / (ps::boltzmann_k * cfg.t_atom_K());

    ordered_json j;
    j["config"] = config_json(cfg);
    j["beta_hbar_omega"] = beta_h * cfg.omega_weights();
    j["beta_hbar_lambda"] = beta_h * cfg.lambda();
    j["weights"] = {{"rho_e", w.rho_e}, {"rho_g", w.rho_g}, {"rho_d", w.rho_d},
                    {"rho_nd", w.rho_nd}, {"z", w.z}};
    j["one_atom"] = {{"r1", one.r1}, {"r2", one.r2}};
    j["two_atom"] = {{"r1", two.r1}, {"r2", two.r2}};
    write_output(opts, j.dump(2) + "\n");
    return 0;
}

int cmd_point(const CommonOpts& opts) {
    const ps::ModelConfig cfg = resolve_config(opts);
    emit_warnings(cfg);
    const ps::PointEval ev = ps::evaluate_point(cfg);

    ordered_json j;
    j["config"] = config_json(cfg);
    j["derived"] = {{"beta_hbar_omega", ev.beta_h_omega},
                    {"beta_hbar_lambda", ev.beta_h_lambda},
                    {"weights",
                     {{"rho_e", ev.weights.rho_e}, {"rho_g", ev.weights.rho_g},
                      {"rho_d", ev.weights.rho_d}, {"rho_nd", ev.weights.rho_nd},
                      {"z", ev.weights.z}}},
                    {"phi", ev.phi},
                    {"phi_sq", ev.phi_sq},
                    {"phi2_sq", ev.phi2_sq},
                    {"gamma_over_per_s", ev.gamma_over},
                    {"l_delta", ev.l_delta},
                    {"n_bar1", ev.n_bar1}};
    if (ev.one) j["one_atom"] = variant_json(*ev.one, cfg.t_atom_K());
    if (ev.two) j["two_atom"] = variant_json(*ev.two, cfg.t_atom_K());
    write_output(opts, j.dump(2) + "\n");
    return 0;
}

struct SweepOpts {
    std::string param;
    double min = 0.0, max = 0.0;
    int points = 0;
    bool log_scale = false;
    std::string param2;
    double min2 = 0.0, max2 = 0.0;
    int points2 = 0;
    bool log_scale2 = false;
};

int cmd_sweep(const CommonOpts& opts, const SweepOpts& so) {
    ps::SweepSpec spec;
    spec.fixed = resolve_config(opts);
    emit_warnings(spec.fixed);
    spec.axis1 = so.log_scale ? ps::log_axis(so.param, so.min, so.max, so.points)
                              : ps::linear_axis(so.param, so.min, so.max, so.points);
    if (!so.param2.empty()) {
        spec.axis2 = so.log_scale2
                         ? ps::log_axis(so.param2, so.min2, so.max2, so.points2)
                         : ps::linear_axis(so.param2, so.min2, so.max2, so.points2);
    }
    std::ostringstream csv;
    ps::run_sweep(spec, csv);
    write_output(opts, csv.str());
    return 0;
}

struct OracleOpts {
    std::uint64_t seed = 1;
    int n_max = 0;       // 0: auto
    std::int64_t collisions = 400000;
    std::int64_t burn_in = -1;
    bool mean_field = false;
    bool include_lambda = false;
    std::string traj_path;
};

ordered_json oracle_variant_json(const ps::ModelConfig& cfg, const OracleOpts& oo,
                                 ps::CouplingVariant mode,
                                 std::vector<ps::TrajectorySample>* traj_out) {
    ps::OracleConfig oc;
    oc.pair = cfg.pair_params();
    oc.env = cfg.cavity_env();
    oc.coll = cfg.collision_params();
    oc.mode = mode;
    oc.arrival = oo.mean_field ? ps::ArrivalMode::mean_field : ps::ArrivalMode::poisson;
    oc.seed = oo.seed;
    oc.collisions = oo.collisions;
    oc.burn_in = oo.burn_in;
    oc.include_lambda_during_collision = oo.include_lambda;

    const ps::PairWeights w = ps::compute_weights(oc.pair);
    const ps::SteadyReport analytic =
        ps::rates(oc.env, oc.coll, ps::stream_coeffs(w, mode));
    if (oo.n_max > 0) {
        oc.n_max = oo.n_max;
    } else {
        oc.n_max = std::max(30, static_cast<int>(std::ceil(8.0 * analytic.n_star)));
    }

    const ps::OracleResult res = ps::run_to_steady(oc);
    if (traj_out) *traj_out = res.trajectory;

    const double abs_disc = std::fabs(res.n_estimate - analytic.n_star);
    const double tol = std::max(3.0 * res.std_error,
                                0.02 * analytic.n_star + 1e-3);
    ordered_json j;
    j["n_estimate"] = res.n_estimate;
    j["std_error"] = res.std_error;
    j["n_star_analytic"] = analytic.n_star;
    j["abs_discrepancy"] = abs_disc;
    j["sigma_discrepancy"] =
        res.std_error > 0.0 ? abs_disc / res.std_error : 0.0;
    j["tolerance"] = tol;
    j["pass"] = abs_disc <= tol;
    j["n_max"] = oc.n_max;
    j["collisions"] = res.collisions_run;
    j["burn_in"] = res.burn_in_used;
    j["sim_time_s"] = res.sim_time;
    return j;
}

int cmd_oracle(const CommonOpts& opts, const OracleOpts& oo) {
    const ps::ModelConfig cfg = resolve_config(opts);
    emit_warnings(cfg);

    ordered_json j;
    j["config"] = config_json(cfg);
    j["arrival"] = oo.mean_field ? "mean-field" : "poisson";
    j["seed"] = oo.seed;

    std::vector<ps::TrajectorySample> traj;
    const bool want_traj = !oo.traj_path.empty();
    if (cfg.variant != ps::VariantSel::two) {
        j["one_atom"] = oracle_variant_json(cfg, oo, ps::CouplingVariant::one_atom,
                                            want_traj ? &traj : nullptr);
    }
    if (cfg.variant != ps::VariantSel::one) {
        j["two_atom"] = oracle_variant_json(
            cfg, oo, ps::CouplingVariant::two_atom,
            (want_traj && cfg.variant == ps::VariantSel::two) ? &traj : nullptr);
    }

    if (want_traj) {
        std::ostringstream csv;
        csv << "# pairstream " << ps::version_string << " oracle trajectory\n";
        csv << "t,n_mean,tail_mass\n";
        char buf[128];
        for (const auto& s : traj) {
            std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e\n", s.t, s.n_mean,
                          s.tail_mass);
            csv << buf;
        }
        std::ofstream out(oo.traj_path, std::ios::binary);
        if (!out) throw ps::ConfigError("cannot open --traj file '" + oo.traj_path + "'");
        out << csv.str();
    }
    write_output(opts, j.dump(2) + "\n");
    return 0;
}

int cmd_figure(const CommonOpts& opts, const std::string& id) {
    ps::SweepSpec spec = ps::figure_preset(id, resolve_config(opts));
    emit_warnings(spec.fixed);
    std::ostringstream csv;
    ps::run_sweep(spec, csv);
    write_output(opts, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"correlated atom-pair cavity refrigerator model"};
    app.set_version_flag("--version", ps::version_string);
    app.require_subcommand(1);

    CommonOpts w_opts, p_opts, s_opts, o_opts, f_opts;
    SweepOpts sweep_opts;
    OracleOpts oracle_opts;
    std::string figure_id;

    auto* weights_cmd = app.add_subcommand("weights", "pair thermal weights and stream coefficients");
    add_common(weights_cmd, w_opts);

    auto* point_cmd = app.add_subcommand("point", "single-point steady-state report (JSON)");
    add_common(point_cmd, p_opts);

    auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep (CSV)");
    add_common(sweep_cmd, s_opts);
    sweep_cmd->add_option("--param", sweep_opts.param, "axis-1 parameter name")->required();
    sweep_cmd->add_option("--min", sweep_opts.min, "axis-1 minimum")->required();
    sweep_cmd->add_option("--max", sweep_opts.max, "axis-1 maximum")->required();
    sweep_cmd->add_option("--points", sweep_opts.points, "axis-1 point count")->required();
    sweep_cmd->add_flag("--log", sweep_opts.log_scale, "axis-1 log spacing");
    sweep_cmd->add_option("--param2", sweep_opts.param2, "axis-2 parameter name");
    sweep_cmd->add_option("--min2", sweep_opts.min2, "axis-2 minimum");
    sweep_cmd->add_option("--max2", sweep_opts.max2, "axis-2 maximum");
    sweep_cmd->add_option("--points2", sweep_opts.points2, "axis-2 point count");
    sweep_cmd->add_flag("--log2", sweep_opts.log_scale2, "axis-2 log spacing");

    auto* oracle_cmd = app.add_subcommand("oracle", "truncated-Fock Monte Carlo validation (JSON)");
    add_common(oracle_cmd, o_opts);
    oracle_cmd->add_option("--seed", oracle_opts.seed, "RNG seed (identical seeds reproduce bit-exactly)");
    oracle_cmd->add_option("--n-max", oracle_opts.n_max, "Fock truncation (default: auto)");
    oracle_cmd->add_option("--collisions", oracle_opts.collisions, "total collisions");
    oracle_cmd->add_option("--burn-in", oracle_opts.burn_in,
                           "discarded collisions (default: 5/gamma_down of simulated time)");
    oracle_cmd->add_flag("--mean-field", oracle_opts.mean_field,
                         "deterministic cycle at rate R instead of Poisson arrivals");
    oracle_cmd->add_flag("--include-lambda", oracle_opts.include_lambda,
                         "apply the intra-pair exchange during the dwell (sensitivity study)");
    oracle_cmd->add_option("--traj", oracle_opts.traj_path, "write trajectory CSV (t,n_mean,tail_mass)");

    auto* figure_cmd = app.add_subcommand("figure", "parameter-sweep preset (CSV)");
    add_common(figure_cmd, f_opts);
    figure_cmd->add_option("id", figure_id, "fig1|fig2|fig3|fig4|fig5|fig7")->required();

    try {
        app.parse(argc, argv);
        if (weights_cmd->parsed()) return cmd_weights(w_opts);
        if (point_cmd->parsed()) return cmd_point(p_opts);
        if (sweep_cmd->parsed()) return cmd_sweep(s_opts, sweep_opts);
        if (oracle_cmd->parsed()) return cmd_oracle(o_opts, oracle_opts);
        if (figure_cmd->parsed()) return cmd_figure(f_opts, figure_id);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const ps::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ps::ValidityError& e) {
        std::cerr << "validity error: " << e.what() << "\n";
        return 3;
    } catch (const ps::ConvergenceError& e) {
        std::cerr << "oracle error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
