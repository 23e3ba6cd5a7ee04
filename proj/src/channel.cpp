// SPDX-License-Identifier: Apache-2.0
#include "ofdmeq/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ofdmeq/rng.hpp"

namespace ofdmeq {

namespace {

constexpr double kLightSpeed = 299792458.0;
constexpr int kOscillators = 64;

// stream tags for counter-based seeding
enum : std::uint64_t { kTagOsc = 0x0501, kTagCfo = 0x0502 };

}  // namespace

void ChannelConfig::validate() const {
    if (n_tx < 1 || n_rx < 1) throw std::invalid_argument("channel: antenna counts must be >= 1");
    if (n < 1) throw std::invalid_argument("channel: N must be >= 1");
    if (n_cp < 0 || n_cp >= n) throw std::invalid_argument("channel: require 0 <= N_cp < N");
    if (pdp_db.empty()) throw std::invalid_argument("channel: power-delay profile is empty");
    if (n_cp < taps() - 1)
        throw std::invalid_argument("channel: CP must cover the delay spread (N_cp >= L-1)");
    if (!(epsilon_max >= 0.0 && epsilon_max < 0.5))
        throw std::invalid_argument("channel: require 0 <= epsilon_max < 0.5");
    if (velocity_mps < 0.0 || carrier_hz <= 0.0 || chip_s <= 0.0)
        throw std::invalid_argument("channel: velocity/carrier/chip duration out of range");
}

ChannelRealization draw_channel(const ChannelConfig& cfg, std::uint64_t trial_index) {
    cfg.validate();
    const int l = cfg.taps();
    ChannelRealization out;
    out.n_rx = cfg.n_rx;
    out.n_tx = cfg.n_tx;
    out.l = l;
    out.taps.assign(static_cast<size_t>(cfg.n_rx) * cfg.n_tx * l, 0.0);
    out.cfo.assign(static_cast<size_t>(cfg.n_rx) * cfg.n_tx, 0.0);

    // normalized PDP: expected total power 1 per link
    std::vector<double> var(l);
    double tot = 0.0;
    for (int k = 0; k < l; ++k) {
        var[k] = std::pow(10.0, cfg.pdp_db[k] / 10.0);
        tot += var[k];
    }
    for (double& v : var) v /= tot;

    const double fd = cfg.velocity_mps * cfg.carrier_hz / kLightSpeed;
    const double t_sym = (cfg.n + cfg.n_cp) * cfg.chip_s;
    const double t = static_cast<double>(trial_index) * t_sym;
    const double two_pi = 2.0 * std::numbers::pi;

    for (int j = 0; j < cfg.n_rx; ++j) {
        for (int i = 0; i < cfg.n_tx; ++i) {
            if (cfg.fading) {
                for (int k = 0; k < l; ++k) {
                    // oscillator set fixed per (seed, link, tap); time advances per trial
                    Rng osc(Rng::mix(cfg.seed, kTagOsc, static_cast<std::uint64_t>(j),
                                     static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k)));
                    const double arrival_off = osc.uniform(0.0, two_pi);
                    cplx acc = 0.0;
                    for (int m = 1; m <= kOscillators; ++m) {
                        const double alpha = (two_pi * m - std::numbers::pi + arrival_off) /
                                             (4.0 * kOscillators);
                        const double beta = std::numbers::pi * m / kOscillators;
                        const double theta = osc.uniform(0.0, two_pi);
                        const double osc_val = std::cos(two_pi * fd * t * std::cos(alpha) + theta);
                        acc += cplx(std::cos(beta), std::sin(beta)) * osc_val;
                    }
                    acc *= std::sqrt(2.0 / kOscillators);
                    out.taps_of(j, i)[k] = std::sqrt(var[k]) * acc;
                }
            } else {
                out.taps_of(j, i)[0] = 1.0;  // flat unit link
            }
            Rng cr(Rng::mix(cfg.seed, kTagCfo, trial_index, static_cast<std::uint64_t>(j),
                            static_cast<std::uint64_t>(i)));
            out.cfo_of(j, i) = cfg.epsilon_max * cr.uniform(-1.0, 1.0);
        }
    }
    return out;
}

CMat channel_irm(std::span<const cplx> h, int size) {
    const int l = static_cast<int>(h.size());
    if (l > size) throw DimensionError("channel_irm: tap count exceeds matrix size");
    CMat m(size, size);
    for (int p = 0; p < size; ++p)
        for (int k = 0; k < l && p + k < size; ++k) m(p + k, p) = h[k];
    return m;
}

CMat cfo_matrix(double epsilon, int n, int n_cp) {
    const int total = n + n_cp;
    CMat m(total, total);
    for (int k = 0; k < total; ++k)
        m(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * epsilon * k / n);
    return m;
}

std::pair<CMat, CMat> cp_matrices(int n, int n_cp) {
    if (n_cp < 0 || n_cp >= n) throw std::invalid_argument("cp_matrices: require 0 <= N_cp < N");
    CMat insert(n + n_cp, n);
    for (int r = 0; r < n_cp; ++r) insert(r, n - n_cp + r) = 1.0;
    for (int r = 0; r < n; ++r) insert(n_cp + r, r) = 1.0;
    CMat remove(n, n + n_cp);
    for (int r = 0; r < n; ++r) remove(r, n_cp + r) = 1.0;
    return {std::move(insert), std::move(remove)};
}

CMat effective_matrix(const TransformPlan& plan, std::span<const cplx> h, double epsilon,
                      int n, int n_cp) {
    if (plan.size() != n) throw DimensionError("effective_matrix: plan size mismatch");
    if (static_cast<int>(h.size()) > n + n_cp)
        throw DimensionError("effective_matrix: tap count exceeds block length");
    if (n_cp < 0 || n_cp >= n) throw std::invalid_argument("effective_matrix: require 0 <= N_cp < N");
    const int l = static_cast<int>(h.size());

    // middle factor M = P_cp- Psi H P_cp+ :
    //   M(m,p) = e^{j 2 pi eps (m+Ncp)/N} * (h[m-p] + h[m-p+N])
    CMat mid(n, n);
    const double w = 2.0 * std::numbers::pi * epsilon / n;
    for (int m = 0; m < n; ++m) {
        const cplx ph = std::polar(1.0, w * (m + n_cp));
        for (int p = 0; p < n; ++p) {
            const int d = m - p;
            cplx v = 0.0;
            if (d >= 0 && d < l) v += h[d];
            // CP-copied head: column p also feeds time sample p - (N - Ncp)
            if (p >= n - n_cp && d + n >= 0 && d + n < l) v += h[d + n];
            if (v.real() != 0.0 || v.imag() != 0.0) mid(m, p) = ph * v;
        }
    }

    // pi = Gamma * (M * Gamma^-1): transform rows by Gamma^-1 (both transform
    // matrices are symmetric, so a row-apply equals right-multiplication),
    // then columns by Gamma.
    for (int r = 0; r < n; ++r) plan.apply_inplace(Direction::Inverse, mid.row(r));
    CVec col(n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) col[r] = mid(r, c);
        plan.apply_inplace(Direction::Forward, col.data());
        for (int r = 0; r < n; ++r) mid(r, c) = col[r];
    }
    return mid;
}

CMat interference_matrix(TransformKind kind, double epsilon, int n) {
    TransformPlan plan(kind, n);  // validates Walsh power-of-two
    CMat out(n, n);
    CVec col(n);
    const double w = 2.0 * std::numbers::pi * epsilon / n;
    for (int c = 0; c < n; ++c) {
        // column c of Gamma^-1 diag Gamma = Gamma^-1 (diag .* (Gamma e_c))
        for (int r = 0; r < n; ++r) col[r] = (r == c) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        plan.apply_inplace(Direction::Forward, col.data());
        for (int r = 0; r < n; ++r) col[r] *= std::polar(1.0, w * r);
        plan.apply_inplace(Direction::Inverse, col.data());
        for (int r = 0; r < n; ++r) out(r, c) = col[r];
    }
    return out;
}

}  // namespace ofdmeq
