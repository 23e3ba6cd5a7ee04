// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ofdmeq/channel.hpp"
#include "ofdmeq/equalizers.hpp"

namespace ofdmeq {

enum class EqualizerKind { LZF, LMMSE, MMSE_SIC, JLCOZF_SIC };

struct EstErrorConfig {
    double sigma_eps = 0.0;  // std-dev of the additive CFO estimation error
    double sigma_ch = 0.0;   // std-dev per real tap component
};

struct SimConfig {
    ChannelConfig channel;
    TransformKind transform = TransformKind::Walsh;
    EqualizerKind equalizer = EqualizerKind::JLCOZF_SIC;
    JlcozfParams jlcozf;
    std::vector<double> snr_db = {0, 5, 10, 15, 20, 25};  // +infinity = noise off
    int trials = 10000;
    EstErrorConfig est_error;
    std::uint64_t master_seed = 1;
    int threads = 0;                  // 0 = hardware concurrency
    bool exclude_failed = false;      // drop failed trials from the BER denominator
    void validate() const;
};

struct TrialResult {
    long long errors = 0;
    long long bits = 0;
    bool failed = false;
    std::string failure;
};

// One full transmit -> channel -> equalize -> decide pass. Deterministic in
// (master_seed, trial_index, snr_db); detector conditioning failures are
// captured in the result, not thrown.
TrialResult run_trial(const SimConfig& cfg, std::uint64_t trial_index, double snr_db);

struct BerPoint {
    double sweep_value = 0.0;
    double snr_db = 0.0;
    long long errors = 0;
    long long bits = 0;
    long long failed_trials = 0;
    double ber = 0.0;
};

struct BerCurve {
    std::string sweep_var;
    std::vector<BerPoint> points;
};

// Monte Carlo BER over cfg.snr_db; trials run in parallel, aggregation is
// order-independent, results depend only on (cfg, master_seed).
BerCurve run_ber(const SimConfig& cfg);

enum class SweepVar { Snr, ReXi, ImXi, Tau, Delta, Cfo, EstError };

const char* sweep_var_name(SweepVar v);
SweepVar parse_sweep_var(const std::string& name);

// One curve per value with common random numbers across values (identical
// per-trial channel/bit/noise realizations), so comparisons are paired.
// tau/delta/re_xi/im_xi sweeps require the JLCOZF-SIC equalizer.
std::vector<BerCurve> run_sweep(const SimConfig& cfg, SweepVar variable,
                                const std::vector<double>& values);

// CSV with header sweep_var,sweep_value,snr_db,errors,bits,ber,failed_trials;
// JSON summary mirrors the same rows.
std::string curves_to_csv(const std::vector<BerCurve>& curves);
std::string curves_to_json(const std::vector<BerCurve>& curves);

}  // namespace ofdmeq
