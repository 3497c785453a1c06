#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pairstream/config.hpp"
#include "pairstream/errors.hpp"
#include "pairstream/pair_thermo.hpp"
#include "pairstream/spectral_filter.hpp"
#include "pairstream/steady_state.hpp"
#include "pairstream/version.hpp"

namespace pairstream {

// One fully evaluated grid point: weights -> coefficients -> n_bar1 ->
// phi, phi2^2 -> Gamma_over, L -> rates -> n* -> T_cav.
struct VariantEval {
    StreamCoeffs coeffs{};
    SteadyReport report{};
    double ratio_t_cav_over_t_atom = 0.0;
};

struct PointEval {
    PairWeights weights{};
    double beta_h_omega = 0.0;
    double beta_h_lambda = 0.0;
    double phi = 0.0;
    double phi_sq = 0.0;
    double phi2_sq = 0.0;
    double gamma_over = 0.0;
    double l_delta = 0.0;
    double n_bar1 = 0.0;
    std::optional<VariantEval> one;
    std::optional<VariantEval> two;
};

inline PointEval evaluate_point(const ModelConfig& cfg) {
    PointEval ev;
    const PairParams pp = cfg.pair_params();
    ev.weights = compute_weights(pp);
    const double beta_h = hbar / (boltzmann_k * pp.t_atom);
    ev.beta_h_omega = beta_h * pp.omega;
    ev.beta_h_lambda = beta_h * pp.lambda;
    ev.phi = cfg.phi();
    ev.phi_sq = ev.phi * ev.phi;
    ev.phi2_sq = cfg.chi * ev.phi_sq;

    const CavityEnv env = cfg.cavity_env();
    const CollisionParams coll = cfg.collision_params();
    const FilterResult filt = lorentzian_filter({coll.delta, env.kappa, coll.tau});
    ev.gamma_over = filt.gamma_over;
    ev.l_delta = filt.l_delta;
    ev.n_bar1 = bath_occupation(env);

    auto eval_variant = [&](CouplingVariant v) {
        VariantEval ve;
        ve.coeffs = stream_coeffs(ev.weights, v);
        ve.report = rates(env, coll, ve.coeffs);
        ve.ratio_t_cav_over_t_atom = ve.report.t_cav / cfg.t_atom_K();
        return ve;
    };
    if (cfg.variant != VariantSel::two) ev.one = eval_variant(CouplingVariant::one_atom);
    if (cfg.variant != VariantSel::one) ev.two = eval_variant(CouplingVariant::two_atom);
    return ev;
}

// ---------------------------------------------------------------------------
// Grid sweeps

struct SweepAxis {
    std::string param;
    std::vector<double> values;
    std::string scale = "list";   // linear | log | list
};

namespace detail {

inline void check_axis_param(const std::string& param) {
    static const std::vector<std::string> allowed = {
        "t_atom_mK",  "t_bath_K",     "f_cavity_GHz",   "f_atom_GHz",
        "delta_MHz",  "f_lambda_GHz", "g_over_2pi_MHz", "tau_ns",
        "rate_R_per_s", "kappa_per_s", "chi"};
    for (const auto& a : allowed) {
        if (a == param) return;
    }
    std::string keys;
    for (const auto& a : allowed) {
        if (!keys.empty()) keys += ", ";
        keys += a;
    }
    throw ConfigError("sweep: cannot sweep '" + param +
                      "'; sweepable parameters: " + keys);
}

}  // namespace detail

inline SweepAxis linear_axis(const std::string& param, double min, double max,
                             int points) {
    detail::check_axis_param(param);
    if (points < 2) throw ConfigError("sweep axis needs points >= 2");
    if (!(min < max)) throw ConfigError("sweep axis needs min < max");
    SweepAxis ax{param, {}, "linear"};
    ax.values.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        ax.values.push_back(min + (max - min) * double(i) / double(points - 1));
    }
    return ax;
}

inline SweepAxis log_axis(const std::string& param, double min, double max,
                          int points) {
    detail::check_axis_param(param);
    if (points < 2) throw ConfigError("sweep axis needs points >= 2");
    if (!(min < max)) throw ConfigError("sweep axis needs min < max");
    if (!(min > 0.0)) throw ConfigError("log-scale sweep axis needs min > 0");
    SweepAxis ax{param, {}, "log"};
    ax.values.reserve(static_cast<std::size_t>(points));
    const double lmin = std::log(min), lmax = std::log(max);
    for (int i = 0; i < points; ++i) {
        ax.values.push_back(std::exp(lmin + (lmax - lmin) * double(i) / double(points - 1)));
    }
    return ax;
}

inline SweepAxis list_axis(const std::string& param, std::vector<double> values) {
    detail::check_axis_param(param);
    if (values.empty()) throw ConfigError("sweep axis needs at least one value");
    return {param, std::move(values), "list"};
}

struct SweepSpec {
    ModelConfig fixed;
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    std::vector<std::string> notes;   // extra '#' header lines
};

// Applies a swept value; delta_MHz moves the atomic frequency with it
// (pair weights follow unless cfg.freeze_omega is set).
inline void set_axis_value(ModelConfig& cfg, const std::string& param, double v) {
    if (param == "t_atom_mK") cfg.t_atom_mK = v;
    else if (param == "t_bath_K") cfg.t_bath_K = v;
    else if (param == "f_cavity_GHz") cfg.f_cavity_GHz = v;
    else if (param == "f_atom_GHz") cfg.f_atom_GHz = v;
    else if (param == "delta_MHz") cfg.f_atom_GHz = cfg.f_cavity_GHz + v * 1e-3;
    else if (param == "f_lambda_GHz") cfg.f_lambda_GHz = v;
    else if (param == "g_over_2pi_MHz") cfg.g_over_2pi_MHz = v;
    else if (param == "tau_ns") cfg.tau_ns = v;
    else if (param == "rate_R_per_s") cfg.rate_R_per_s = v;
    else if (param == "kappa_per_s") cfg.kappa_per_s = v;
    else if (param == "chi") cfg.chi = v;
    else throw ConfigError("sweep: unknown parameter '" + param + "'");
}

namespace detail {

inline std::string fmt_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

inline void write_config_header(std::ostream& out, const ModelConfig& cfg) {
    out << "# t_atom_mK = " << fmt_sci(cfg.t_atom_mK) << "\n"
        << "# t_bath_K = " << fmt_sci(cfg.t_bath_K) << "\n"
        << "# f_cavity_GHz = " << fmt_sci(cfg.f_cavity_GHz) << "\n"
        << "# f_atom_GHz = " << fmt_sci(cfg.f_atom_GHz) << "\n"
        << "# delta_MHz = " << fmt_sci(cfg.delta_MHz()) << "\n"
        << "# f_lambda_GHz = " << fmt_sci(cfg.f_lambda_GHz) << "\n"
        << "# g_over_2pi_MHz = " << fmt_sci(cfg.g_over_2pi_MHz) << "\n"
        << "# tau_ns = " << fmt_sci(cfg.tau_ns) << "\n"
        << "# rate_R_per_s = " << fmt_sci(cfg.rate_R_per_s) << "\n"
        << "# kappa_per_s = " << fmt_sci(cfg.kappa_per_s) << "\n"
        << "# chi = " << fmt_sci(cfg.chi) << "\n"
        << "# variant = " << to_string(cfg.variant) << "\n"
        << "# freeze_omega = " << (cfg.freeze_omega ? "true" : "false") << "\n";
    if (cfg.freeze_omega) {
        out << "# frozen_f_atom_GHz = " << fmt_sci(cfg.frozen_f_atom_GHz) << "\n";
    }
}

inline void write_variant_columns(std::ostream& out, const std::string& suffix) {
    out << ",r1" << suffix << ",r2" << suffix << ",gamma_down" << suffix
        << ",j_up" << suffix << ",n_star" << suffix << ",t_cav_K" << suffix
        << ",ratio_t_cav_over_t_atom" << suffix;
}

inline void write_variant_values(std::ostream& out, const VariantEval& ve) {
    out << ',' << fmt_sci(ve.coeffs.r1) << ',' << fmt_sci(ve.coeffs.r2) << ','
        << fmt_sci(ve.report.gamma_down) << ',' << fmt_sci(ve.report.j_up) << ','
        << fmt_sci(ve.report.n_star) << ',' << fmt_sci(ve.report.t_cav) << ','
        << fmt_sci(ve.ratio_t_cav_over_t_atom);
}

}  // namespace detail

// Deterministic CSV: '#' header with the full resolved parameter set, one
// data row per grid point, axis2 (when present) as the slow index.
inline void run_sweep(const SweepSpec& spec, std::ostream& out) {
    out << "# pairstream " << version_string << " sweep\n";
    for (const auto& note : spec.notes) out << "# note: " << note << "\n";
    detail::write_config_header(out, spec.fixed);
    out << "# axis1: " << spec.axis1.param << " " << spec.axis1.scale
        << " points=" << spec.axis1.values.size() << "\n";
    if (spec.axis2) {
        out << "# axis2: " << spec.axis2->param << " " << spec.axis2->scale
            << " points=" << spec.axis2->values.size() << "\n";
    }

    const VariantSel sel = spec.fixed.variant;
    if (spec.axis2) out << spec.axis2->param << ',';
    out << spec.axis1.param << ",l_delta,n_bar1";
    if (sel == VariantSel::both) {
        detail::write_variant_columns(out, "_one");
        detail::write_variant_columns(out, "_two");
    } else {
        detail::write_variant_columns(out, "");
    }
    out << "\n";

    std::vector<double> outer = spec.axis2 ? spec.axis2->values
                                           : std::vector<double>{0.0};
    for (double v2 : outer) {
        for (double v1 : spec.axis1.values) {
            ModelConfig cfg = spec.fixed;
            if (spec.axis2) set_axis_value(cfg, spec.axis2->param, v2);
            set_axis_value(cfg, spec.axis1.param, v1);
            const PointEval ev = evaluate_point(cfg);
            if (spec.axis2) out << detail::fmt_sci(v2) << ',';
            out << detail::fmt_sci(v1) << ',' << detail::fmt_sci(ev.l_delta) << ','
                << detail::fmt_sci(ev.n_bar1);
            if (ev.one) detail::write_variant_values(out, *ev.one);
            if (ev.two) detail::write_variant_values(out, *ev.two);
            out << "\n";
        }
    }
}

// ---------------------------------------------------------------------------
// Figure presets. Grids are fixed by the baseline parameter set plus each
// figure's sweep variable; a handful of figure-specific defaults (noted in
// the CSV header) keep the stream-dominated features visible. Any key the
// caller set explicitly (config file or --set) wins over a preset default.

inline const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"fig1", "fig2", "fig3",
                                                 "fig4", "fig5", "fig7"};
    return ids;
}

inline SweepSpec figure_preset(const std::string& id, ModelConfig base) {
    auto preset_default = [&base](const std::string& key, double v) {
        if (!base.explicit_keys.count(key)) {
            set_axis_value(base, key, v);
            return true;
        }
        return false;
    };
    const std::vector<double> g_values = {0.25, 0.5, 1.0};

    SweepSpec spec;
    if (id == "fig1") {
        if (preset_default("kappa_per_s", 1.0)) {
            spec.notes.push_back(
                "kappa_per_s = 1 so the stream dominates near resonance;"
                " override with --set kappa_per_s=...");
        }
        spec.notes.push_back(
            "coupling-strength grid {0.25, 0.5, 1} MHz: qualitative reproduction");
        spec.fixed = base;
        spec.axis1 = linear_axis("delta_MHz", -50.0, 50.0, 201);
        spec.axis2 = list_axis("g_over_2pi_MHz", g_values);
    } else if (id == "fig2") {
        spec.fixed = base;
        spec.axis1 = log_axis("kappa_per_s", 1.0, 1e7, 71);
    } else if (id == "fig3") {
        if (preset_default("kappa_per_s", 1.0)) {
            spec.notes.push_back(
                "kappa_per_s = 1 so the stream dominates near resonance;"
                " override with --set kappa_per_s=...");
        }
        spec.notes.push_back(
            "coupling-strength grid {0.25, 0.5, 1} MHz: qualitative reproduction");
        spec.fixed = base;
        spec.axis1 = linear_axis("f_lambda_GHz", 0.0, 10.0, 101);
        spec.axis2 = list_axis("g_over_2pi_MHz", g_values);
    } else if (id == "fig4") {
        spec.fixed = base;
        spec.axis1 = log_axis("kappa_per_s", 1e-2, 1e5, 71);
    } else if (id == "fig5") {
        preset_default("kappa_per_s", 0.0);
        spec.notes.push_back("ideal cavity: detuning sweep co-varies the atomic"
                             " frequency (use --freeze-omega for filter-only)");
        spec.fixed = base;
        spec.axis1 = linear_axis("delta_MHz", -50.0, 50.0, 201);
    } else if (id == "fig7") {
        spec.fixed = base;
        spec.axis1 = log_axis("kappa_per_s", 1.0, 1e6, 61);
        spec.axis2 = list_axis("t_bath_K", {0.1, 0.5, 1.0, 4.0});
    } else {
        std::string ids;
        for (const auto& f : figure_ids()) {
            if (!ids.empty()) ids += ", ";
            ids += f;
        }
        throw ConfigError("unknown figure id '" + id + "'; available: " + ids);
    }
    return spec;
}

}  // namespace pairstream
