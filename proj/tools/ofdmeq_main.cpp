// SPDX-License-Identifier: Apache-2.0
//
// ofdmeq: link-level MIMO-OFDM simulator over Fourier / Walsh-Hadamard
// transforms with LZF, LMMSE, MMSE-SIC and JLCOZF-SIC equalizers.
//
// Subcommands: ber, sweep, flops, interference. Exit codes: 0 success,
// 1 runtime failure, 2 usage/config error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ofdmeq/channel.hpp"
#include "ofdmeq/config.hpp"
#include "ofdmeq/flops.hpp"
#include "ofdmeq/harness.hpp"

namespace {

using namespace ofdmeq;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

std::string json_sidecar_path(const std::string& csv_path) {
    const auto dot = csv_path.rfind('.');
    if (dot == std::string::npos) return csv_path + ".json";
    return csv_path.substr(0, dot) + ".json";
}

std::string default_config_path() {
    if (const char* env = std::getenv("OFDMEQ_CONFIG")) return env;
    return {};
}

std::vector<double> parse_value_list(const std::string& csv) {
    std::vector<double> out;
    std::string tok;
    for (size_t i = 0; i <= csv.size(); ++i) {
        if (i == csv.size() || csv[i] == ',') {
            if (!tok.empty()) {
                if (tok == "inf") out.push_back(std::numeric_limits<double>::infinity());
                else out.push_back(std::stod(tok));
                tok.clear();
            }
        } else {
            tok += csv[i];
        }
    }
    if (out.empty()) throw ConfigError("empty value list");
    return out;
}

int cmd_ber(const std::string& cfg_path, const std::vector<std::string>& overrides,
            std::optional<std::uint64_t> seed, const std::string& out_path) {
    SimConfig cfg = load_sim_config(cfg_path, overrides);
    if (seed) cfg.master_seed = *seed;
    BerCurve curve = run_ber(cfg);
    const std::vector<BerCurve> curves{curve};
    write_file(out_path, curves_to_csv(curves));
    write_file(json_sidecar_path(out_path), curves_to_json(curves));
    for (const BerPoint& p : curve.points)
        std::printf("snr=%s dB  errors=%lld  bits=%lld  ber=%s  failed_trials=%lld\n",
                    fmt(p.snr_db).c_str(), p.errors, p.bits, fmt(p.ber).c_str(), p.failed_trials);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_sweep(const std::string& cfg_path, const std::vector<std::string>& overrides,
              std::optional<std::uint64_t> seed, const std::string& var,
              const std::string& values_csv, const std::string& out_path) {
    SimConfig cfg = load_sim_config(cfg_path, overrides);
    if (seed) cfg.master_seed = *seed;
    const SweepVar v = parse_sweep_var(var);
    const std::vector<double> values = parse_value_list(values_csv);
    const std::vector<BerCurve> curves = run_sweep(cfg, v, values);
    write_file(out_path, curves_to_csv(curves));
    write_file(json_sidecar_path(out_path), curves_to_json(curves));
    for (const BerCurve& c : curves)
        for (const BerPoint& p : c.points)
            std::printf("%s=%s  snr=%s dB  ber=%s  failed_trials=%lld\n", c.sweep_var.c_str(),
                        fmt(p.sweep_value).c_str(), fmt(p.snr_db).c_str(), fmt(p.ber).c_str(),
                        p.failed_trials);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_flops(const std::string& sigmas_csv, int n, int tau, const std::string& deltas_csv,
              bool eq56_n, bool half_dense, const std::string& out_path) {
    std::vector<int> sigmas;
    for (double v : parse_value_list(sigmas_csv)) sigmas.push_back(static_cast<int>(v));
    std::vector<std::optional<int>> deltas;
    for (double v : parse_value_list(deltas_csv)) {
        if (std::isinf(v)) deltas.push_back(std::nullopt);
        else deltas.push_back(static_cast<int>(v));
    }
    const auto rows = flops_table(sigmas, n, tau, deltas, eq56_n, half_dense);
    std::string csv = "equalizer,sigma,N,tau,delta,flops,efficiency_vs_proposed\n";
    for (const FlopRow& r : rows) {
        csv += r.equalizer + ',' + std::to_string(r.sigma) + ',' + std::to_string(r.n) + ',' +
               std::to_string(r.tau) + ',' + r.delta + ',' + fmt(r.flops) + ',' +
               fmt(r.efficiency_vs_proposed) + '\n';
        std::printf("%-10s sigma=%d delta=%-3s flops=%.4e eff=%.1f%%\n", r.equalizer.c_str(),
                    r.sigma, r.delta.c_str(), r.flops, r.efficiency_vs_proposed);
    }
    write_file(out_path, csv);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

int cmd_interference(const std::string& kind_name, int n, double epsilon,
                     const std::string& out_path) {
    const TransformKind kind = parse_transform(kind_name);
    const CMat eta = interference_matrix(kind, epsilon, n);
    // normalized magnitude: each row scaled by its diagonal entry
    std::string csv = "row,col,magnitude\n";
    csv.reserve(static_cast<size_t>(n) * n * 12);
    for (int r = 0; r < n; ++r) {
        const double d = std::abs(eta(r, r));
        for (int c = 0; c < n; ++c) {
            csv += std::to_string(r) + ',' + std::to_string(c) + ',' +
                   fmt(d > 0 ? std::abs(eta(r, c)) / d : std::abs(eta(r, c))) + '\n';
        }
    }
    write_file(out_path, csv);
    double peak = 0.0;
    int peak_off = 0;
    for (int r = 0; r < n; ++r) {
        const double d = std::abs(eta(r, r));
        for (int c = 0; c < n; ++c) {
            if (r == c || d == 0.0) continue;
            const double v = std::abs(eta(r, c)) / d;
            if (v > peak) {
                peak = v;
                peak_off = kind == TransformKind::Walsh ? (r ^ c) : (c - r + n) % n;
            }
        }
    }
    std::printf("N=%d epsilon=%s: max off-diagonal/diagonal ratio %.6f at %s offset %d\n", n,
                fmt(epsilon).c_str(), peak, kind == TransformKind::Walsh ? "xor" : "circulant",
                peak_off);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ofdmeq: MIMO-OFDM link simulator (Fourier / Walsh-Hadamard)"};
    app.require_subcommand(1);

    std::string cfg_path = default_config_path();
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::string out_path;

    auto add_common = [&](CLI::App* sub, const char* default_out) {
        sub->add_option("-c,--config", cfg_path,
                        "JSON config file (default: $OFDMEQ_CONFIG or built-in defaults)");
        sub->add_option("-D,--set", overrides,
                        "dotted-key override, e.g. channel.n_cp=64 or jlcozf.delta=inf");
        sub->add_option("--seed", seed, "master seed override");
        sub->add_option("-o,--out", out_path, "output CSV path")->default_val(default_out);
    };

    auto* ber = app.add_subcommand("ber", "Monte Carlo BER over the configured SNR list");
    add_common(ber, "ber.csv");

    auto* sweep = app.add_subcommand("sweep", "paired parameter sweep (common random numbers)");
    std::string var, values_csv;
    add_common(sweep, "sweep.csv");
    sweep->add_option("--var", var, "snr|re_xi|im_xi|tau|delta|cfo|est_error")->required();
    sweep->add_option("--values", values_csv, "comma-separated values (inf allowed)")->required();

    auto* flops = app.add_subcommand("flops", "closed-form flop table and efficiency");
    std::string sigmas_csv = "2,4,6", deltas_csv = "3,inf";
    int fl_n = 128, fl_tau = 80;
    bool eq56_n = false, half_dense = false;
    flops->add_option("--sigma", sigmas_csv, "comma-separated sigma list")->capture_default_str();
    flops->add_option("--n", fl_n, "subcarrier count")->capture_default_str();
    flops->add_option("--tau", fl_tau, "banded-matrix bandwidth")->capture_default_str();
    flops->add_option("--delta", deltas_csv, "comma-separated: 3 and/or inf")->capture_default_str();
    flops->add_flag("--eq56-times-n", eq56_n,
                    "scale the per-stream build cost by N (sensitivity switch)");
    flops->add_flag("--half-inversion-dense", half_dense,
                    "price half-size inversions with the dense inverse row");
    flops->add_option("-o,--out", out_path, "output CSV path")->default_val("flops.csv");

    auto* intf = app.add_subcommand("interference", "normalized CFO interference matrix");
    std::string kind_name = "walsh";
    int if_n = 128;
    double if_eps = 0.1;
    intf->add_option("--kind", kind_name, "walsh|fourier")->capture_default_str();
    intf->add_option("--n", if_n, "transform size")->capture_default_str();
    intf->add_option("--epsilon", if_eps, "normalized CFO")->capture_default_str();
    intf->add_option("-o,--out", out_path, "output CSV path")->default_val("interference.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // --help exits 0; any parse failure is a usage error
    }

    try {
        if (ber->parsed()) return cmd_ber(cfg_path, overrides, seed, out_path);
        if (sweep->parsed()) return cmd_sweep(cfg_path, overrides, seed, var, values_csv, out_path);
        if (flops->parsed())
            return cmd_flops(sigmas_csv, fl_n, fl_tau, deltas_csv, eq56_n, half_dense, out_path);
        if (intf->parsed()) return cmd_interference(kind_name, if_n, if_eps, out_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
