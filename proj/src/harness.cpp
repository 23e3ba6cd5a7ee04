// SPDX-License-Identifier: Apache-2.0
#include "ofdmeq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "ofdmeq/errors.hpp"
#include "ofdmeq/rng.hpp"

namespace ofdmeq {

namespace {

enum : std::uint64_t { kTagBits = 0x11, kTagNoise = 0x12, kTagEstCh = 0x13, kTagEstCfo = 0x14 };

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt_json_number(double v) {
    if (!std::isfinite(v)) return std::string("\"") + fmt_double(v) + "\"";
    return fmt_double(v);
}

struct TrialWork {
    const SimConfig* cfg;
    const TransformPlan* plan;
};

TrialResult run_trial_impl(const TrialWork& w, std::uint64_t trial, double snr_db) {
    const SimConfig& cfg = *w.cfg;
    const ChannelConfig& ch = cfg.channel;
    const int n = ch.n, ncp = ch.n_cp, ntx = ch.n_tx, nrx = ch.n_rx, l = ch.taps();
    const bool noiseless = std::isinf(snr_db);
    const double sigma_n2 = noiseless ? 0.0 : std::pow(10.0, -snr_db / 10.0);

    ChannelConfig chs = ch;
    chs.seed = cfg.master_seed;
    const ChannelRealization real = draw_channel(chs, trial);

    // source bits and BPSK symbols (0 -> +1, 1 -> -1)
    std::vector<std::vector<std::uint8_t>> tx_bits(ntx);
    std::vector<CVec> tx_sym(ntx);
    for (int i = 0; i < ntx; ++i) {
        Rng rb(Rng::mix(cfg.master_seed, kTagBits, trial, static_cast<std::uint64_t>(i)));
        tx_bits[i].resize(n);
        tx_sym[i].resize(n);
        for (int k = 0; k < n; ++k) {
            tx_bits[i][k] = static_cast<std::uint8_t>(rb.bit());
            tx_sym[i][k] = tx_bits[i][k] ? -1.0 : 1.0;
        }
    }

    // transmit: inverse transform + CP
    std::vector<CVec> tx_cp(ntx);
    for (int i = 0; i < ntx; ++i) {
        CVec mod = w.plan->apply(Direction::Inverse, tx_sym[i]);
        CVec& x = tx_cp[i];
        x.resize(n + ncp);
        for (int k = 0; k < ncp; ++k) x[k] = mod[n - ncp + k];
        for (int k = 0; k < n; ++k) x[ncp + k] = mod[k];
    }

    // channel + AWGN + CP removal + forward transform, stacked over antennas
    CVec ybar(static_cast<size_t>(nrx) * n);
    const double two_pi = 2.0 * std::numbers::pi;
    for (int j = 0; j < nrx; ++j) {
        CVec acc(n + ncp, 0.0);
        for (int i = 0; i < ntx; ++i) {
            const auto h = real.taps_of(j, i);
            const double eps = real.cfo_of(j, i);
            for (int t = 0; t < n + ncp; ++t) {
                cplx conv = 0.0;
                const int kmax = std::min(l - 1, t);
                for (int k = 0; k <= kmax; ++k) conv += h[k] * tx_cp[i][t - k];
                acc[t] += std::polar(1.0, two_pi * eps * t / n) * conv;
            }
        }
        if (!noiseless) {
            Rng rn(Rng::mix(cfg.master_seed, kTagNoise, trial, static_cast<std::uint64_t>(j)));
            const double s = std::sqrt(sigma_n2);
            for (int t = 0; t < n + ncp; ++t) acc[t] += s * rn.cgaussian();
        }
        CVec stripped(acc.begin() + ncp, acc.end());
        w.plan->apply_inplace(Direction::Forward, stripped.data());
        std::copy(stripped.begin(), stripped.end(), ybar.begin() + static_cast<size_t>(j) * n);
    }

    // receiver-side channel knowledge, optionally perturbed
    ChannelRealization known = real;
    if (cfg.est_error.sigma_ch > 0.0 || cfg.est_error.sigma_eps > 0.0) {
        for (int j = 0; j < nrx; ++j)
            for (int i = 0; i < ntx; ++i) {
                if (cfg.est_error.sigma_ch > 0.0) {
                    Rng rc(Rng::mix(cfg.master_seed, kTagEstCh, trial,
                                    static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(i)));
                    auto taps = known.taps_of(j, i);
                    for (int k = 0; k < l; ++k)
                        taps[k] += cplx(cfg.est_error.sigma_ch * rc.gaussian(),
                                        cfg.est_error.sigma_ch * rc.gaussian());
                }
                if (cfg.est_error.sigma_eps > 0.0) {
                    Rng re(Rng::mix(cfg.master_seed, kTagEstCfo, trial,
                                    static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(i)));
                    known.cfo_of(j, i) += cfg.est_error.sigma_eps * re.gaussian();
                }
            }
    }

    TrialResult res;
    res.bits = static_cast<long long>(ntx) * n;
    try {
        StackedModel model;
        model.n_rx = nrx;
        model.n_tx = ntx;
        model.n = n;
        model.pi.reserve(static_cast<size_t>(nrx) * ntx);
        for (int j = 0; j < nrx; ++j)
            for (int i = 0; i < ntx; ++i)
                model.pi.push_back(
                    effective_matrix(*w.plan, known.taps_of(j, i), known.cfo_of(j, i), n, ncp));
        model.received = ybar;
        model.noise_psd = sigma_n2;

        Detection det;
        switch (cfg.equalizer) {
            case EqualizerKind::LZF:
                det = lzf_detect(model);
                break;
            case EqualizerKind::LMMSE:
                det = lmmse_detect(model, noiseless ? std::numeric_limits<double>::infinity()
                                                    : 1.0 / sigma_n2);
                break;
            case EqualizerKind::MMSE_SIC:
                det = mmse_sic_detect(model);
                break;
            case EqualizerKind::JLCOZF_SIC: {
                JlcozfParams p = cfg.jlcozf;
                p.tau = std::min(p.tau, n - 1);  // tau = N means full compensation
                det = jlcozf_sic_detect(model, p);
                break;
            }
        }
        long long errs = 0;
        for (int i = 0; i < ntx; ++i)
            for (int k = 0; k < n; ++k) errs += det.bits[i][k] != tx_bits[i][k];
        res.errors = errs;
    } catch (const std::exception& e) {
        res.failed = true;
        res.failure = e.what();
    }
    return res;
}

BerPoint aggregate(const SimConfig& cfg, const TransformPlan& plan, double snr_db,
                   double sweep_value) {
    const int nthreads = cfg.threads > 0
                             ? cfg.threads
                             : std::max(1u, std::thread::hardware_concurrency());
    struct Partial {
        long long errors = 0, bits = 0, failed = 0;
    };
    std::vector<Partial> parts(nthreads);
    TrialWork work{&cfg, &plan};
    auto body = [&](int tid) {
        Partial& p = parts[tid];
        for (std::uint64_t t = tid; t < static_cast<std::uint64_t>(cfg.trials); t += nthreads) {
            const TrialResult r = run_trial_impl(work, t, snr_db);
            if (r.failed) {
                ++p.failed;
                if (!cfg.exclude_failed) p.bits += r.bits;  // counted, zero errors added
            } else {
                p.errors += r.errors;
                p.bits += r.bits;
            }
        }
    };
    if (nthreads == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(body, i);
        for (auto& th : pool) th.join();
    }
    BerPoint pt;
    pt.sweep_value = sweep_value;
    pt.snr_db = snr_db;
    for (const Partial& p : parts) {
        pt.errors += p.errors;
        pt.bits += p.bits;
        pt.failed_trials += p.failed;
    }
    pt.ber = pt.bits > 0 ? static_cast<double>(pt.errors) / static_cast<double>(pt.bits) : 0.0;
    return pt;
}

}  // namespace

void SimConfig::validate() const {
    channel.validate();
    if (transform == TransformKind::Walsh) {
        const int n = channel.n;
        if (n < 2 || (n & (n - 1)) != 0)
            throw std::invalid_argument("sim: Walsh transform requires N = 2^k");
    }
    if (trials < 1) throw std::invalid_argument("sim: trials must be >= 1");
    if (snr_db.empty()) throw std::invalid_argument("sim: SNR list is empty");
    if (est_error.sigma_eps < 0 || est_error.sigma_ch < 0)
        throw std::invalid_argument("sim: estimation-error std-devs must be >= 0");
    if (equalizer == EqualizerKind::JLCOZF_SIC) {
        JlcozfParams p = jlcozf;
        p.tau = std::min(p.tau, channel.n - 1);
        p.validate(channel.n);
    }
}

TrialResult run_trial(const SimConfig& cfg, std::uint64_t trial_index, double snr_db) {
    cfg.validate();
    TransformPlan plan(cfg.transform, cfg.channel.n);
    return run_trial_impl({&cfg, &plan}, trial_index, snr_db);
}

BerCurve run_ber(const SimConfig& cfg) {
    cfg.validate();
    TransformPlan plan(cfg.transform, cfg.channel.n);
    BerCurve curve;
    curve.sweep_var = "snr";
    for (double snr : cfg.snr_db) curve.points.push_back(aggregate(cfg, plan, snr, snr));
    return curve;
}

const char* sweep_var_name(SweepVar v) {
    switch (v) {
        case SweepVar::Snr: return "snr";
        case SweepVar::ReXi: return "re_xi";
        case SweepVar::ImXi: return "im_xi";
        case SweepVar::Tau: return "tau";
        case SweepVar::Delta: return "delta";
        case SweepVar::Cfo: return "cfo";
        case SweepVar::EstError: return "est_error";
    }
    return "?";
}

SweepVar parse_sweep_var(const std::string& name) {
    if (name == "snr") return SweepVar::Snr;
    if (name == "re_xi") return SweepVar::ReXi;
    if (name == "im_xi") return SweepVar::ImXi;
    if (name == "tau") return SweepVar::Tau;
    if (name == "delta") return SweepVar::Delta;
    if (name == "cfo") return SweepVar::Cfo;
    if (name == "est_error") return SweepVar::EstError;
    throw std::invalid_argument("unknown sweep variable '" + name + "'");
}

std::vector<BerCurve> run_sweep(const SimConfig& cfg, SweepVar variable,
                                const std::vector<double>& values) {
    cfg.validate();
    const bool jl_only = variable == SweepVar::ReXi || variable == SweepVar::ImXi ||
                         variable == SweepVar::Tau || variable == SweepVar::Delta;
    if (jl_only && cfg.equalizer != EqualizerKind::JLCOZF_SIC)
        throw std::invalid_argument(std::string("sweep variable '") + sweep_var_name(variable) +
                                    "' applies only to the JLCOZF-SIC equalizer");
    std::vector<BerCurve> out;
    for (double v : values) {
        SimConfig c = cfg;  // same master_seed: common random numbers across values
        switch (variable) {
            case SweepVar::Snr: c.snr_db = {v}; break;
            case SweepVar::ReXi: c.jlcozf.re_xi = v; break;
            case SweepVar::ImXi: c.jlcozf.im_xi = v; break;
            case SweepVar::Tau: c.jlcozf.tau = static_cast<int>(v); break;
            case SweepVar::Delta:
                if (v <= 0 || std::isinf(v)) c.jlcozf.delta.reset();
                else c.jlcozf.delta = static_cast<int>(v);
                break;
            case SweepVar::Cfo: c.channel.epsilon_max = v; break;
            case SweepVar::EstError:
                c.est_error.sigma_eps = v;
                c.est_error.sigma_ch = v;
                break;
        }
        BerCurve curve = run_ber(c);
        curve.sweep_var = sweep_var_name(variable);
        for (BerPoint& p : curve.points) p.sweep_value = v;
        out.push_back(std::move(curve));
    }
    return out;
}

std::string curves_to_csv(const std::vector<BerCurve>& curves) {
    std::string s = "sweep_var,sweep_value,snr_db,errors,bits,ber,failed_trials\n";
    for (const BerCurve& c : curves)
        for (const BerPoint& p : c.points) {
            s += c.sweep_var;
            s += ',';
            s += fmt_double(p.sweep_value);
            s += ',';
            s += fmt_double(p.snr_db);
            s += ',';
            s += std::to_string(p.errors);
            s += ',';
            s += std::to_string(p.bits);
            s += ',';
            s += fmt_double(p.ber);
            s += ',';
            s += std::to_string(p.failed_trials);
            s += '\n';
        }
    return s;
}

std::string curves_to_json(const std::vector<BerCurve>& curves) {
    std::string s = "{\"rows\":[";
    bool first = true;
    for (const BerCurve& c : curves)
        for (const BerPoint& p : c.points) {
            if (!first) s += ',';
            first = false;
            s += "{\"sweep_var\":\"" + c.sweep_var +
                 "\",\"sweep_value\":" + fmt_json_number(p.sweep_value) +
                 ",\"snr_db\":" + fmt_json_number(p.snr_db) + ",\"errors\":" + std::to_string(p.errors) +
                 ",\"bits\":" + std::to_string(p.bits) + ",\"ber\":" + fmt_double(p.ber) +
                 ",\"failed_trials\":" + std::to_string(p.failed_trials) + "}";
        }
    s += "]}\n";
    return s;
}

}  // namespace ofdmeq
