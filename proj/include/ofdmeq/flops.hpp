// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ofdmeq {

// Closed-form flop model for a 2^sigma x 2^sigma MIMO configuration.
// Costs are modeled, never measured.
struct CostParams {
    int sigma = 2;
    int n = 128;
    int tau = 80;
    std::optional<int> delta = {};  // finite term count (3) or nullopt = infinity
    // The per-stream equalizer build cost is printed without a factor of N;
    // this switch multiplies it by N for sensitivity analysis.
    bool eq56_times_n = false;
    // Price the two half-size inversions of the block-inversion step with the
    // dense inverse row instead of the banded block-inversion rule. The
    // banded default reproduces the published delta=3 table; see README.
    bool half_inversion_dense = false;

    void validate() const;
};

struct SicFlopBreakdown {
    double cov_mul = 0;     // covariance matrix products
    double cov_add = 0;     // covariance additions
    double inv_sqrt = 0;    // negative-half powers (or series + block inversion)
    double sic = 0;         // SIC reconstruct/subtract
    double matvec = 0;      // covariance-vector products
    double per_stream = 0;  // per-stream equalizer builds
    double total() const { return cov_mul + cov_add + inv_sqrt + sic + matvec + per_stream; }
};

double flops_lzf(const CostParams& p);
double flops_lmmse(const CostParams& p);
double flops_mmse_sic(const CostParams& p);
double flops_jlcozf_sic(const CostParams& p);

SicFlopBreakdown flops_mmse_sic_components(const CostParams& p);
SicFlopBreakdown flops_jlcozf_sic_components(const CostParams& p);

// (n_compared - n_proposed) / n_proposed * 100; negative means the compared
// equalizer is cheaper.
double efficiency(double n_proposed, double n_compared);

struct FlopRow {
    std::string equalizer;
    int sigma;
    int n;
    int tau;
    std::string delta;  // "3" or "inf" (empty for the linear equalizers)
    double flops;
    double efficiency_vs_proposed;
};

// Full table over the requested grid: one proposed row per (sigma, delta)
// plus LZF/LMMSE/MMSE-SIC rows with efficiency against the proposed
// equalizer at the same sigma (and the given tau/delta).
std::vector<FlopRow> flops_table(const std::vector<int>& sigmas, int n, int tau,
                                 const std::vector<std::optional<int>>& deltas,
                                 bool eq56_times_n = false, bool half_inversion_dense = false);

}  // namespace ofdmeq
