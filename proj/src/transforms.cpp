// SPDX-License-Identifier: Apache-2.0
#include "ofdmeq/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ofdmeq/kernels.hpp"

namespace ofdmeq {

namespace {

bool is_pow2(int n) { return n >= 1 && (n & (n - 1)) == 0; }

int ilog2(int n) {
    int k = 0;
    while ((1 << k) < n) ++k;
    return k;
}

// Iterative FWHT in natural (Kronecker) ordering; unnormalized +-1 sums.
void fwht_inplace(cplx* x, int n) {
    for (int h = 1; h < n; h <<= 1) {
        for (int i = 0; i < n; i += h << 1) {
            kernels::active().butterfly(static_cast<std::size_t>(h), x + i, x + i + h);
        }
    }
}

// Radix-2 DIT FFT, unnormalized. sign = -1 for the forward kernel
// e^{-j2pi/N}, +1 for the inverse.
void fft_inplace(cplx* x, int n, const std::vector<int>& brev, const CVec& tw, int sign) {
    for (int i = 0; i < n; ++i) {
        const int j = brev[i];
        if (j > i) std::swap(x[i], x[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const int half = len >> 1;
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < half; ++k) {
                cplx w = tw[static_cast<size_t>(k) * step];
                if (sign > 0) w = std::conj(w);
                const cplx u = x[i + k];
                const cplx v = x[i + k + half] * w;
                x[i + k] = u + v;
                x[i + k + half] = u - v;
            }
        }
    }
}

}  // namespace

CMat hadamard_core(int k) {
    if (k < 1) throw std::invalid_argument("hadamard_core: k must be >= 1");
    CMat h(2, 2);
    h(0, 0) = 1;
    h(0, 1) = 1;
    h(1, 0) = 1;
    h(1, 1) = -1;
    for (int s = 1; s < k; ++s) {
        const int m = 1 << s;
        CMat g(2 * m, 2 * m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                const cplx v = h(r, c);
                g(r, c) = v;
                g(r, c + m) = v;
                g(r + m, c) = v;
                g(r + m, c + m) = -v;
            }
        h = std::move(g);
    }
    return h;
}

CMat walsh_matrix(int k) {
    if (k < 1) throw std::invalid_argument("walsh_matrix: k must be >= 1");
    CMat w = hadamard_core(k);
    const double s = 1.0 / std::sqrt(static_cast<double>(1 << k));
    kernels::active().scale(w.size(), s, w.data());
    return w;
}

CMat fourier_matrix(int n) {
    if (n < 1) throw std::invalid_argument("fourier_matrix: N must be >= 1");
    CMat f(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    const double w = -2.0 * std::numbers::pi / n;
    for (int m = 0; m < n; ++m)
        for (int c = 0; c < n; ++c) {
            // reduce m*c mod n first to keep the phase argument small
            const long long mc = (static_cast<long long>(m) * c) % n;
            f(m, c) = std::polar(s, w * static_cast<double>(mc));
        }
    return f;
}

TransformPlan::TransformPlan(TransformKind kind, int n) : kind_(kind), n_(n) {
    if (n < 1) throw std::invalid_argument("TransformPlan: N must be >= 1");
    pow2_ = is_pow2(n);
    if (kind == TransformKind::Walsh && (!pow2_ || n < 2))
        throw std::invalid_argument("TransformPlan: Walsh requires N = 2^k, k >= 1");
    norm_ = 1.0 / std::sqrt(static_cast<double>(n));
    if (kind == TransformKind::Walsh) {
        auto w = std::make_shared<CMat>(walsh_matrix(ilog2(n)));
        fwd_ = w;
        inv_ = w;  // symmetric orthogonal: forward == inverse
        log2n_ = ilog2(n);
    } else {
        auto f = std::make_shared<CMat>(fourier_matrix(n));
        fwd_ = f;
        auto fi = std::make_shared<CMat>(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) (*fi)(r, c) = std::conj((*f)(c, r));
        inv_ = fi;
        if (pow2_) {
            log2n_ = ilog2(n);
            auto tw = std::make_shared<CVec>(n / 2 > 0 ? n / 2 : 1);
            for (int k = 0; k < n / 2; ++k)
                (*tw)[k] = std::polar(1.0, -2.0 * std::numbers::pi * k / n);
            twiddle_ = tw;
            auto br = std::make_shared<std::vector<int>>(n);
            for (int i = 0; i < n; ++i) {
                int r = 0;
                for (int b = 0; b < log2n_; ++b) r |= ((i >> b) & 1) << (log2n_ - 1 - b);
                (*br)[i] = r;
            }
            brev_ = br;
        }
    }
}

const CMat& TransformPlan::matrix(Direction dir) const {
    return dir == Direction::Forward ? *fwd_ : *inv_;
}

void TransformPlan::apply_inplace(Direction dir, cplx* x) const {
    if (kind_ == TransformKind::Walsh) {
        fwht_inplace(x, n_);
        kernels::active().scale(static_cast<std::size_t>(n_), norm_, x);
        return;
    }
    if (pow2_ && n_ >= 2) {
        fft_inplace(x, n_, *brev_, *twiddle_, dir == Direction::Forward ? -1 : +1);
        kernels::active().scale(static_cast<std::size_t>(n_), norm_, x);
        return;
    }
    // general-N Fourier: dense product
    const CMat& m = matrix(dir);
    CVec out(n_);
    for (int r = 0; r < n_; ++r) {
        cplx acc = 0.0;
        const cplx* row = m.row(r);
        for (int c = 0; c < n_; ++c) acc += row[c] * x[c];
        out[r] = acc;
    }
    for (int r = 0; r < n_; ++r) x[r] = out[r];
}

CVec TransformPlan::apply(Direction dir, std::span<const cplx> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw DimensionError("apply_transform: input length does not match plan size");
    CVec y(x.begin(), x.end());
    apply_inplace(dir, y.data());
    return y;
}

CVec apply_transform(const TransformPlan& plan, Direction dir, std::span<const cplx> x) {
    return plan.apply(dir, x);
}

}  // namespace ofdmeq
