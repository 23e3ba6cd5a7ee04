// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "ofdmeq/cmat.hpp"

namespace ofdmeq {

// Square complex matrix restricted to |row - col| <= tau. Storage is one
// (2 tau + 1)-wide window per row; entries outside the band read as exact
// zero. tau = N-1 is semantically a dense matrix.
class BandedMat {
public:
    BandedMat() = default;
    BandedMat(int n, int tau);

    int size() const { return n_; }
    int bandwidth() const { return tau_; }

    cplx get(int r, int c) const {
        const int d = c - r;
        if (d < -tau_ || d > tau_) return 0.0;
        return w_[static_cast<size_t>(r) * (2 * tau_ + 1) + (d + tau_)];
    }
    void set(int r, int c, cplx v);

    // window helpers: row r covers columns [lo(r), hi(r)]
    int lo(int r) const { return r - tau_ < 0 ? 0 : r - tau_; }
    int hi(int r) const { return r + tau_ >= n_ ? n_ - 1 : r + tau_; }
    cplx* window(int r) { return w_.data() + static_cast<size_t>(r) * (2 * tau_ + 1); }
    const cplx* window(int r) const { return w_.data() + static_cast<size_t>(r) * (2 * tau_ + 1); }

    CMat to_dense() const;

private:
    int n_ = 0, tau_ = 0;
    std::vector<cplx> w_;
};

// Zero everything outside |row - col| <= tau. tau must lie in [0, N-1].
BandedMat band_extract(const CMat& a, int tau);

// Product re-extracted at the operating bandwidth: the full product of two
// bandwidth-tau matrices has bandwidth 2 tau; intermediates are kept at tau
// so chained banded algebra stays closed under the operating bandwidth.
BandedMat banded_mul(const BandedMat& a, const BandedMat& b);

BandedMat banded_add(const BandedMat& a, const BandedMat& b);
BandedMat banded_sub(const BandedMat& a, const BandedMat& b);

CVec banded_matvec(const BandedMat& a, std::span<const cplx> u);

}  // namespace ofdmeq
