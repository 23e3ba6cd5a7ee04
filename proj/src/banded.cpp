// SPDX-License-Identifier: Apache-2.0
#include "ofdmeq/banded.hpp"

#include <stdexcept>

namespace ofdmeq {

BandedMat::BandedMat(int n, int tau) : n_(n), tau_(tau) {
    if (n < 1) throw std::invalid_argument("BandedMat: size must be >= 1");
    if (tau < 0 || tau > n - 1)
        throw std::invalid_argument("BandedMat: bandwidth must satisfy 0 <= tau <= N-1");
    w_.assign(static_cast<size_t>(n) * (2 * tau + 1), 0.0);
}

void BandedMat::set(int r, int c, cplx v) {
    const int d = c - r;
    if (d < -tau_ || d > tau_)
        throw std::invalid_argument("BandedMat::set: entry outside the band");
    w_[static_cast<size_t>(r) * (2 * tau_ + 1) + (d + tau_)] = v;
}

CMat BandedMat::to_dense() const {
    CMat d(n_, n_);
    for (int r = 0; r < n_; ++r)
        for (int c = lo(r); c <= hi(r); ++c) d(r, c) = get(r, c);
    return d;
}

BandedMat band_extract(const CMat& a, int tau) {
    if (!a.square()) throw DimensionError("band_extract: matrix must be square");
    const int n = a.rows();
    if (tau < 0 || tau > n - 1)
        throw std::invalid_argument("band_extract: bandwidth must satisfy 0 <= tau <= N-1");
    BandedMat b(n, tau);
    for (int r = 0; r < n; ++r)
        for (int c = b.lo(r); c <= b.hi(r); ++c) b.set(r, c, a(r, c));
    return b;
}

BandedMat banded_mul(const BandedMat& a, const BandedMat& b) {
    if (a.size() != b.size()) throw DimensionError("banded_mul: size mismatch");
    if (a.bandwidth() != b.bandwidth())
        throw DimensionError("banded_mul: operands must share the operating bandwidth");
    const int n = a.size();
    const int tau = a.bandwidth();
    BandedMat c(n, tau);
    for (int r = 0; r < n; ++r) {
        for (int col = c.lo(r); col <= c.hi(r); ++col) {
            const int klo = std::max(a.lo(r), col - tau < 0 ? 0 : col - tau);
            const int khi = std::min(a.hi(r), col + tau >= n ? n - 1 : col + tau);
            cplx acc = 0.0;
            for (int k = klo; k <= khi; ++k) acc += a.get(r, k) * b.get(k, col);
            c.set(r, col, acc);
        }
    }
    return c;
}

namespace {
BandedMat banded_axpby(const BandedMat& a, const BandedMat& b, double sign) {
    if (a.size() != b.size() || a.bandwidth() != b.bandwidth())
        throw DimensionError("banded add/sub: size or bandwidth mismatch");
    BandedMat c(a.size(), a.bandwidth());
    for (int r = 0; r < a.size(); ++r)
        for (int col = c.lo(r); col <= c.hi(r); ++col)
            c.set(r, col, a.get(r, col) + sign * b.get(r, col));
    return c;
}
}  // namespace

BandedMat banded_add(const BandedMat& a, const BandedMat& b) { return banded_axpby(a, b, +1.0); }
BandedMat banded_sub(const BandedMat& a, const BandedMat& b) { return banded_axpby(a, b, -1.0); }

CVec banded_matvec(const BandedMat& a, std::span<const cplx> u) {
    if (static_cast<int>(u.size()) != a.size())
        throw DimensionError("banded_matvec: vector length mismatch");
    CVec y(a.size(), 0.0);
    for (int r = 0; r < a.size(); ++r) {
        cplx acc = 0.0;
        for (int c = a.lo(r); c <= a.hi(r); ++c) acc += a.get(r, c) * u[c];
        y[r] = acc;
    }
    return y;
}

}  // namespace ofdmeq
