// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "ofdmeq/cmat.hpp"
#include "ofdmeq/transforms.hpp"

namespace ofdmeq {

// Rayleigh MIMO channel with per-link normalized CFO. Defaults follow the
// simulation table: 2x2, N=128, CP 16, ITU Vehicular A power profile on six
// consecutive sample delays, 120 km/h at 2 GHz, uniform co-CFO up to 0.1.
struct ChannelConfig {
    int n_tx = 2;
    int n_rx = 2;
    int n = 128;
    int n_cp = 16;
    std::vector<double> pdp_db = {0.0, -1.0, -9.0, -10.0, -15.0, -20.0};
    double velocity_mps = 120.0 / 3.6;
    double carrier_hz = 2.0e9;
    double chip_s = 24.4e-6;
    double epsilon_max = 0.1;
    bool fading = true;  // false: every link is a fixed flat unit tap (AWGN reference)
    std::uint64_t seed = 1;

    int taps() const { return static_cast<int>(pdp_db.size()); }
    void validate() const;
};

// One Monte Carlo draw: per-(rx j, tx i) tap vectors and CFO values.
struct ChannelRealization {
    int n_rx = 0, n_tx = 0, l = 0;
    std::vector<cplx> taps;   // [j][i][l], flattened
    std::vector<double> cfo;  // [j][i]

    std::span<const cplx> taps_of(int j, int i) const {
        return {taps.data() + (static_cast<size_t>(j) * n_tx + i) * l, static_cast<size_t>(l)};
    }
    std::span<cplx> taps_of(int j, int i) {
        return {taps.data() + (static_cast<size_t>(j) * n_tx + i) * l, static_cast<size_t>(l)};
    }
    double cfo_of(int j, int i) const { return cfo[static_cast<size_t>(j) * n_tx + i]; }
    double& cfo_of(int j, int i) { return cfo[static_cast<size_t>(j) * n_tx + i]; }
};

// Deterministic in (cfg.seed, trial_index). Taps follow a sum-of-sinusoids
// Rayleigh model (64 oscillators per tap, classical Doppler spectrum)
// sampled at t = trial_index * symbol duration and held for the whole
// symbol; tap variances follow the PDP normalized to unit total power.
// CFO is uniform on [-epsilon_max, epsilon_max] per link per trial.
ChannelRealization draw_channel(const ChannelConfig& cfg, std::uint64_t trial_index);

// Lower-triangular Toeplitz convolution matrix of the taps: entry (m,p) is
// h[m-p] for 0 <= m-p < L, else 0.
CMat channel_irm(std::span<const cplx> h, int size);

// Diagonal phase ramp diag{ e^{j 2 pi eps n / N} }, n = 0 .. N+N_cp-1.
CMat cfo_matrix(double epsilon, int n, int n_cp);

// CP insertion (copies the last N_cp samples to the head) and removal
// ([0 | I]) matrices; remove * insert == I exactly.
std::pair<CMat, CMat> cp_matrices(int n, int n_cp);

// Transform-domain effective matrix of one link:
//   Gamma * P_cp- * Psi(eps) * H(h) * P_cp+ * Gamma^-1.
// Built structurally (O(N L) middle factor + fast transforms); matches the
// explicit five-factor product to rounding.
CMat effective_matrix(const TransformPlan& plan, std::span<const cplx> h, double epsilon,
                      int n, int n_cp);

// Gamma^-1 * diag{e^{j 2 pi eps n / N}} * Gamma: the pure-CFO inter-carrier
// interference matrix of the chosen transform.
CMat interference_matrix(TransformKind kind, double epsilon, int n);

}  // namespace ofdmeq
