// SPDX-License-Identifier: Apache-2.0
#include "ofdmeq/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace ofdmeq {

namespace {

using nlohmann::json;

double as_snr(const json& v, const std::string& key) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        throw ConfigError("config: '" + key + "' entries must be numbers or \"inf\"");
    }
    if (!v.is_number()) throw ConfigError("config: '" + key + "' entries must be numbers or \"inf\"");
    return v.get<double>();
}

template <typename T>
T as_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError("config: '" + key + "' must be a number");
    return v.get<T>();
}

bool as_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) throw ConfigError("config: '" + key + "' must be a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("config: '" + key + "' must be a string");
    return v.get<std::string>();
}

void apply_channel(ChannelConfig& ch, const std::string& key, const json& v) {
    if (key == "n_tx") ch.n_tx = as_number<int>(v, key);
    else if (key == "n_rx") ch.n_rx = as_number<int>(v, key);
    else if (key == "n") ch.n = as_number<int>(v, key);
    else if (key == "n_cp") ch.n_cp = as_number<int>(v, key);
    else if (key == "pdp_db") {
        if (!v.is_array()) throw ConfigError("config: 'channel.pdp_db' must be an array");
        ch.pdp_db.clear();
        for (const auto& e : v) ch.pdp_db.push_back(as_number<double>(e, key));
    } else if (key == "velocity_mps") ch.velocity_mps = as_number<double>(v, key);
    else if (key == "carrier_hz") ch.carrier_hz = as_number<double>(v, key);
    else if (key == "chip_s") ch.chip_s = as_number<double>(v, key);
    else if (key == "epsilon_max") ch.epsilon_max = as_number<double>(v, key);
    else if (key == "fading") ch.fading = as_bool(v, key);
    else throw ConfigError("config: unknown key 'channel." + key + "'");
}

void apply_jlcozf(JlcozfParams& p, const std::string& key, const json& v) {
    if (key == "re_xi") p.re_xi = as_number<double>(v, key);
    else if (key == "im_xi") p.im_xi = as_number<double>(v, key);
    else if (key == "tau") p.tau = as_number<int>(v, key);
    else if (key == "delta") {
        if (v.is_string() && v.get<std::string>() == "inf") p.delta.reset();
        else p.delta = as_number<int>(v, key);
    } else throw ConfigError("config: unknown key 'jlcozf." + key + "'");
}

void apply_est_error(EstErrorConfig& e, const std::string& key, const json& v) {
    if (key == "sigma_eps") e.sigma_eps = as_number<double>(v, key);
    else if (key == "sigma_ch") e.sigma_ch = as_number<double>(v, key);
    else throw ConfigError("config: unknown key 'est_error." + key + "'");
}

void apply_top(SimConfig& cfg, const std::string& key, const json& v) {
    if (key == "transform") cfg.transform = parse_transform(as_string(v, key));
    else if (key == "equalizer") cfg.equalizer = parse_equalizer(as_string(v, key));
    else if (key == "trials") cfg.trials = as_number<int>(v, key);
    else if (key == "master_seed") cfg.master_seed = as_number<std::uint64_t>(v, key);
    else if (key == "threads") cfg.threads = as_number<int>(v, key);
    else if (key == "exclude_failed") cfg.exclude_failed = as_bool(v, key);
    else if (key == "snr_db") {
        if (!v.is_array()) throw ConfigError("config: 'snr_db' must be an array");
        cfg.snr_db.clear();
        for (const auto& e : v) cfg.snr_db.push_back(as_snr(e, key));
    } else if (key == "channel") {
        if (!v.is_object()) throw ConfigError("config: 'channel' must be an object");
        for (const auto& [k2, v2] : v.items()) apply_channel(cfg.channel, k2, v2);
    } else if (key == "jlcozf") {
        if (!v.is_object()) throw ConfigError("config: 'jlcozf' must be an object");
        for (const auto& [k2, v2] : v.items()) apply_jlcozf(cfg.jlcozf, k2, v2);
    } else if (key == "est_error") {
        if (!v.is_object()) throw ConfigError("config: 'est_error' must be an object");
        for (const auto& [k2, v2] : v.items()) apply_est_error(cfg.est_error, k2, v2);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

void apply_dotted(SimConfig& cfg, const std::string& dotted, const json& v) {
    const auto dot = dotted.find('.');
    if (dot == std::string::npos) {
        apply_top(cfg, dotted, v);
        return;
    }
    const std::string head = dotted.substr(0, dot);
    const std::string rest = dotted.substr(dot + 1);
    if (rest.find('.') != std::string::npos)
        throw ConfigError("config: key '" + dotted + "' nests too deep");
    if (head == "channel") apply_channel(cfg.channel, rest, v);
    else if (head == "jlcozf") apply_jlcozf(cfg.jlcozf, rest, v);
    else if (head == "est_error") apply_est_error(cfg.est_error, rest, v);
    else throw ConfigError("config: unknown key '" + dotted + "'");
}

}  // namespace

std::string equalizer_name(EqualizerKind k) {
    switch (k) {
        case EqualizerKind::LZF: return "lzf";
        case EqualizerKind::LMMSE: return "lmmse";
        case EqualizerKind::MMSE_SIC: return "mmse_sic";
        case EqualizerKind::JLCOZF_SIC: return "jlcozf_sic";
    }
    return "?";
}

EqualizerKind parse_equalizer(const std::string& name) {
    if (name == "lzf") return EqualizerKind::LZF;
    if (name == "lmmse") return EqualizerKind::LMMSE;
    if (name == "mmse_sic") return EqualizerKind::MMSE_SIC;
    if (name == "jlcozf_sic") return EqualizerKind::JLCOZF_SIC;
    throw ConfigError("config: unknown equalizer '" + name + "'");
}

std::string transform_name(TransformKind k) {
    return k == TransformKind::Walsh ? "walsh" : "fourier";
}

TransformKind parse_transform(const std::string& name) {
    if (name == "walsh") return TransformKind::Walsh;
    if (name == "fourier") return TransformKind::Fourier;
    throw ConfigError("config: unknown transform '" + name + "'");
}

SimConfig load_sim_config(const std::string& path, const std::vector<std::string>& overrides) {
    SimConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open '" + path + "'");
        json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw ConfigError("config: parse error in '" + path + "': " + e.what());
        }
        if (!j.is_object()) throw ConfigError("config: top level must be an object");
        for (const auto& [k, v] : j.items()) apply_top(cfg, k, v);
    }
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "' is not of the form key=value");
        const std::string key = ov.substr(0, eq);
        const std::string raw = ov.substr(eq + 1);
        json v;
        try {
            v = json::parse(raw);
        } catch (...) {
            v = raw;  // bare words ("walsh", "inf") read as strings
        }
        apply_dotted(cfg, key, v);
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

}  // namespace ofdmeq
