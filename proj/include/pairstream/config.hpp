#pragma once

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pairstream/constants.hpp"
#include "pairstream/errors.hpp"
#include "pairstream/pair_thermo.hpp"
#include "pairstream/steady_state.hpp"

namespace pairstream {

enum class VariantSel { one, two, both };

inline const char* to_string(VariantSel v) {
    switch (v) {
        case VariantSel::one: return "one";
        case VariantSel::two: return "two";
        default: return "both";
    }
}

// Full resolved parameter set in interface units. Defaults are the global
// baseline: 10 K bath, 50 mK pair reservoir, 5 GHz cavity and atoms,
// 5 GHz exchange, g/2pi = 0.5 MHz, tau = 50 ns, R = 5e6 1/s, kappa = 1e4 1/s.
// f_atom and delta are one degree of freedom: delta = f_atom - f_cavity.
struct ModelConfig {
    double t_atom_mK = 50.0;
    double t_bath_K = 10.0;
    double f_cavity_GHz = 5.0;
    double f_atom_GHz = 5.0;
    double f_lambda_GHz = 5.0;
    double g_over_2pi_MHz = 0.5;
    double tau_ns = 50.0;
    double rate_R_per_s = 5e6;
    double kappa_per_s = 1e4;
    double chi = 2.0;
    VariantSel variant = VariantSel::both;

    // When set, pair thermal weights use this atomic frequency instead of
    // the (possibly swept) f_atom_GHz: a filter-only detuning sweep.
    bool freeze_omega = false;
    double frozen_f_atom_GHz = 5.0;

    std::set<std::string> explicit_keys;

    double delta_MHz() const { return (f_atom_GHz - f_cavity_GHz) * 1e3; }

    // SI / angular-frequency accessors
    double t_atom_K() const { return t_atom_mK * 1e-3; }
    double omega1() const { return two_pi * f_cavity_GHz * 1e9; }
    double omega_atom() const { return two_pi * f_atom_GHz * 1e9; }
    double omega_weights() const {
        return two_pi * (freeze_omega ? frozen_f_atom_GHz : f_atom_GHz) * 1e9;
    }
    double delta() const { return omega_atom() - omega1(); }
    double lambda() const { return two_pi * f_lambda_GHz * 1e9; }
    double g() const { return two_pi * g_over_2pi_MHz * 1e6; }
    double tau_s() const { return tau_ns * 1e-9; }
    double phi() const { return g() * tau_s(); }

    PairParams pair_params() const {
        return {t_atom_K(), omega_weights(), lambda()};
    }
    CavityEnv cavity_env() const { return {omega1(), t_bath_K, kappa_per_s}; }
    CollisionParams collision_params() const {
        return {g(), tau_s(), chi, rate_R_per_s, delta()};
    }
};

namespace detail {

struct KeyInfo {
    const char* key;
    const char* stem;   // key with the unit suffix removed
};

inline const std::vector<KeyInfo>& config_keys() {
    static const std::vector<KeyInfo> keys = {
        {"t_atom_mK", "t_atom"},     {"t_bath_K", "t_bath"},
        {"f_cavity_GHz", "f_cavity"}, {"f_atom_GHz", "f_atom"},
        {"delta_MHz", "delta"},      {"f_lambda_GHz", "f_lambda"},
        {"g_over_2pi_MHz", "g_over_2pi"}, {"tau_ns", "tau"},
        {"rate_R_per_s", "rate_R"},  {"kappa_per_s", "kappa"},
        {"chi", "chi"},              {"variant", "variant"}};
    return keys;
}

inline double parse_number(const std::string& text, int line_no) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0')) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": cannot parse number from '" + text + "'");
    }
    return v;
}

}  // namespace detail

// One validated assignment; shared by the file parser, CLI --set overrides,
// and the sweep machinery. line_no <= 0 means "not from a file".
inline void apply_config_value(ModelConfig& cfg, const std::string& key,
                               const std::string& value, int line_no = 0) {
    const std::string at =
        line_no > 0 ? "line " + std::to_string(line_no) + ": " : "";
    auto num = [&] { return detail::parse_number(value, line_no); };

    if (key == "t_atom_mK") {
        cfg.t_atom_mK = num();
        if (!(cfg.t_atom_mK > 0.0)) throw ConfigError(at + "t_atom_mK must be > 0");
    } else if (key == "t_bath_K") {
        cfg.t_bath_K = num();
        if (!(cfg.t_bath_K >= 0.0)) throw ConfigError(at + "t_bath_K must be >= 0");
    } else if (key == "f_cavity_GHz") {
        const double old = cfg.f_cavity_GHz;
        cfg.f_cavity_GHz = num();
        if (!(cfg.f_cavity_GHz > 0.0)) throw ConfigError(at + "f_cavity_GHz must be > 0");
        // a resonant default atom follows the cavity unless set explicitly
        if (!cfg.explicit_keys.count("f_atom_GHz") &&
            !cfg.explicit_keys.count("delta_MHz") && cfg.f_atom_GHz == old) {
            cfg.f_atom_GHz = cfg.f_cavity_GHz;
            cfg.frozen_f_atom_GHz = cfg.f_cavity_GHz;
        }
    } else if (key == "f_atom_GHz") {
        if (cfg.explicit_keys.count("delta_MHz")) {
            throw ConfigError(at + "f_atom_GHz and delta_MHz are mutually exclusive");
        }
        cfg.f_atom_GHz = num();
        if (!(cfg.f_atom_GHz > 0.0)) throw ConfigError(at + "f_atom_GHz must be > 0");
        cfg.frozen_f_atom_GHz = cfg.f_atom_GHz;
    } else if (key == "delta_MHz") {
        if (cfg.explicit_keys.count("f_atom_GHz")) {
            throw ConfigError(at + "f_atom_GHz and delta_MHz are mutually exclusive");
        }
        cfg.f_atom_GHz = cfg.f_cavity_GHz + num() * 1e-3;
        if (!(cfg.f_atom_GHz > 0.0)) {
            throw ConfigError(at + "delta_MHz drives the atomic frequency negative");
        }
        cfg.frozen_f_atom_GHz = cfg.f_atom_GHz;
    } else if (key == "f_lambda_GHz") {
        cfg.f_lambda_GHz = num();   // sign allowed
    } else if (key == "g_over_2pi_MHz") {
        cfg.g_over_2pi_MHz = num();
        if (!(cfg.g_over_2pi_MHz >= 0.0)) throw ConfigError(at + "g_over_2pi_MHz must be >= 0");
    } else if (key == "tau_ns") {
        cfg.tau_ns = num();
        if (!(cfg.tau_ns > 0.0)) throw ConfigError(at + "tau_ns must be > 0");
    } else if (key == "rate_R_per_s") {
        cfg.rate_R_per_s = num();
        if (!(cfg.rate_R_per_s >= 0.0)) throw ConfigError(at + "rate_R_per_s must be >= 0");
    } else if (key == "kappa_per_s") {
        cfg.kappa_per_s = num();
        if (!(cfg.kappa_per_s >= 0.0)) throw ConfigError(at + "kappa_per_s must be >= 0");
    } else if (key == "chi") {
        cfg.chi = num();
        if (!(cfg.chi >= 1.0 && cfg.chi <= 2.0)) {
            throw ConfigError(at + "chi = " + value + " out of range [1, 2]");
        }
    } else if (key == "variant") {
        if (value == "one" || value == "one-atom") cfg.variant = VariantSel::one;
        else if (value == "two" || value == "two-atom") cfg.variant = VariantSel::two;
        else if (value == "both") cfg.variant = VariantSel::both;
        else throw ConfigError(at + "variant must be one|two|both (got '" + value + "')");
    } else {
        // distinguish a wrong or missing unit suffix from a truly unknown key
        for (const auto& known : detail::config_keys()) {
            const std::string stem = known.stem;
            const bool matches_stem =
                key == stem ||
                (key.size() > stem.size() && key.compare(0, stem.size(), stem) == 0 &&
                 key[stem.size()] == '_');
            if (matches_stem && key != known.key) {
                throw ConfigError(at + "unit-suffix mismatch: '" + key +
                                  "' should be '" + known.key + "'");
            }
        }
        std::string keys;
        for (const auto& known : detail::config_keys()) {
            if (!keys.empty()) keys += ", ";
            keys += known.key;
        }
        throw ConfigError(at + "unknown key '" + key + "'; valid keys: " + keys);
    }
    cfg.explicit_keys.insert(key);
}

// Line-oriented `key = value` text with '#' comments. Missing keys fall
// back to the baseline defaults above.
inline ModelConfig parse_config(const std::string& text) {
    ModelConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        if (cfg.explicit_keys.count(key)) {
            throw ConfigError("line " + std::to_string(line_no) +
                              ": duplicate key '" + key + "'");
        }
        apply_config_value(cfg, key, value, line_no);
    }
    return cfg;
}

}  // namespace pairstream
