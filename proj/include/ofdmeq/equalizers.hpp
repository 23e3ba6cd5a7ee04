// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ofdmeq/cmat.hpp"

namespace ofdmeq {

// Stacked transform-domain model: ybar = [Psi_1 ... Psi_i] [X^1; ...; X^i] + noise,
// where Psi_i vertically stacks the per-receive-antenna effective matrices of
// stream i.
struct StackedModel {
    int n_rx = 0, n_tx = 0, n = 0;
    std::vector<CMat> pi;               // [j * n_tx + i], each n x n
    CVec received;                      // length n_rx * n
    double noise_psd = 0.0;             // S0, per-sample complex noise variance
    std::vector<double> stream_powers;  // P_i (empty = all 1)

    const CMat& block(int j, int i) const { return pi[static_cast<size_t>(j) * n_tx + i]; }
    double power(int i) const { return stream_powers.empty() ? 1.0 : stream_powers[i]; }
    void validate() const;
};

struct JlcozfParams {
    double re_xi = 0.01;           // covariance weight Re(xi) >= 0
    double im_xi = 1.0;            // ridge Im(xi) >= 0
    int tau = 127;                 // band half-width, 0 <= tau <= N-1
    std::optional<int> delta = {}; // series terms incl. identity; nullopt = converge
    void validate(int n) const;
};

struct Detection {
    std::vector<CVec> soft;                    // per-stream soft vectors, length n
    std::vector<std::vector<std::uint8_t>> bits;  // hard BPSK decisions (0 <-> +1)
};

// Joint zero-forcing on the full stacked matrix: (pi^H pi)^-1 pi^H y.
Detection lzf_detect(const StackedModel& model);

// Joint LMMSE: (pi^H pi + (1/snr) I)^-1 pi^H y. snr = infinity degenerates to LZF.
Detection lmmse_detect(const StackedModel& model, double snr);

// Successive interference cancellation with exact covariance whitening:
// for each stream a in ascending order, whiten by K_a^{-1/2} where
// K_a = S0 I + sum_{b>a} P_b Psi_b Psi_b^H (Hermitian eigendecomposition),
// per-stream LMMSE, hard decision, reconstruct and subtract.
Detection mmse_sic_detect(const StackedModel& model);

// Same SIC skeleton with banded interferer stacks, the xi-weighted covariance
// K = I + Re(xi) sum Xi_b Xi_b^H, whitening through the truncated fractional
// power series for K^{+1/2} followed by recursive block inversion, and a
// ridge Im(xi) in every per-stream solve.
Detection jlcozf_sic_detect(const StackedModel& model, const JlcozfParams& params);

}  // namespace ofdmeq
