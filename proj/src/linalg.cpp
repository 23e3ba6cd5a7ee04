// SPDX-License-Identifier: Apache-2.0
#include "ofdmeq/linalg.hpp"

#include <cmath>
#include <string>

#include "ofdmeq/errors.hpp"
#include "ofdmeq/kernels.hpp"

namespace ofdmeq {

namespace {
constexpr double kPivotRel = 1e-12;
constexpr int kSeriesCap = 200;
constexpr double kSeriesTol = 1e-12;
}  // namespace

CMat dense_mul(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw DimensionError("dense_mul: inner dimensions differ");
    const int m = a.rows(), k = a.cols(), n = b.cols();
    CMat c(m, n);
    const auto& ops = kernels::active();
    // k-tiled row updates: C[i,:] += A(i,kk) * B[kk,:]; the B tile stays hot.
    constexpr int KT = 64;
    for (int k0 = 0; k0 < k; k0 += KT) {
        const int k1 = std::min(k, k0 + KT);
        for (int i = 0; i < m; ++i) {
            cplx* ci = c.row(i);
            const cplx* ai = a.row(i);
            for (int kk = k0; kk < k1; ++kk) {
                const cplx v = ai[kk];
                if (v.real() != 0.0 || v.imag() != 0.0)
                    ops.caxpy(static_cast<std::size_t>(n), v, b.row(kk), ci);
            }
        }
    }
    return c;
}

CMat dense_hermitian(const CMat& a) {
    CMat h(a.cols(), a.rows());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) h(c, r) = std::conj(a(r, c));
    return h;
}

CMat dense_add(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("dense_add: shape mismatch");
    CMat c = a;
    kernels::active().caxpy(c.size(), cplx(1.0, 0.0), b.data(), c.data());
    return c;
}

CMat dense_sub(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("dense_sub: shape mismatch");
    CMat c = a;
    kernels::active().caxpy(c.size(), cplx(-1.0, 0.0), b.data(), c.data());
    return c;
}

CVec dense_matvec(const CMat& a, std::span<const cplx> x) {
    if (a.cols() != static_cast<int>(x.size())) throw DimensionError("dense_matvec: length mismatch");
    CVec y(a.rows(), 0.0);
    for (int r = 0; r < a.rows(); ++r) {
        const cplx* row = a.row(r);
        cplx acc = 0.0;
        for (int c = 0; c < a.cols(); ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

CVec dense_hermitian_matvec(const CMat& a, std::span<const cplx> x) {
    if (a.rows() != static_cast<int>(x.size()))
        throw DimensionError("dense_hermitian_matvec: length mismatch");
    CVec y(a.cols(), 0.0);
    const auto& ops = kernels::active();
    for (int r = 0; r < a.rows(); ++r)
        ops.caxpy(static_cast<std::size_t>(a.cols()), std::conj(x[r]), a.row(r), y.data());
    // y = sum_r conj(x_r) A[r,:]  ->  need conj of that to get A^H x
    for (cplx& v : y) v = std::conj(v);
    return y;
}

LuFactor::LuFactor(CMat a, const char* label) : lu_(std::move(a)) {
    if (!lu_.square()) throw DimensionError(std::string("LuFactor: ") + label + " must be square");
    const int n = lu_.rows();
    perm_.resize(n);
    const double tol = kPivotRel * lu_.max_abs();
    const auto& ops = kernels::active();
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(lu_(k, k));
        for (int r = k + 1; r < n; ++r) {
            const double v = std::abs(lu_(r, k));
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (!(best > tol))
            throw SingularityError(std::string("singular ") + label + ": pivot " +
                                   std::to_string(k) + " below relative threshold");
        perm_[k] = p;
        if (p != k)
            for (int c = 0; c < n; ++c) std::swap(lu_(k, c), lu_(p, c));
        const cplx inv_piv = 1.0 / lu_(k, k);
        for (int r = k + 1; r < n; ++r) {
            const cplx m = lu_(r, k) * inv_piv;
            lu_(r, k) = m;
            if (m.real() != 0.0 || m.imag() != 0.0)
                ops.caxpy(static_cast<std::size_t>(n - k - 1), -m, lu_.row(k) + k + 1,
                          lu_.row(r) + k + 1);
        }
    }
}

CVec LuFactor::solve(std::span<const cplx> b) const {
    const int n = size();
    if (static_cast<int>(b.size()) != n) throw DimensionError("LuFactor::solve: length mismatch");
    CVec x(b.begin(), b.end());
    // stored L/U rows are in final pivot order: permute the rhs first
    for (int k = 0; k < n; ++k) std::swap(x[k], x[perm_[k]]);
    for (int k = 0; k < n; ++k)
        for (int r = k + 1; r < n; ++r) x[r] -= lu_(r, k) * x[k];
    for (int k = n - 1; k >= 0; --k) {
        cplx acc = x[k];
        for (int c = k + 1; c < n; ++c) acc -= lu_(k, c) * x[c];
        x[k] = acc / lu_(k, k);
    }
    return x;
}

CMat LuFactor::solve(const CMat& b) const {
    const int n = size();
    if (b.rows() != n) throw DimensionError("LuFactor::solve: row count mismatch");
    CMat x = b;
    const int m = b.cols();
    const auto& ops = kernels::active();
    for (int k = 0; k < n; ++k)
        if (perm_[k] != k)
            for (int c = 0; c < m; ++c) std::swap(x(k, c), x(perm_[k], c));
    for (int k = 0; k < n; ++k) {
        for (int r = k + 1; r < n; ++r) {
            const cplx l = lu_(r, k);
            if (l.real() != 0.0 || l.imag() != 0.0)
                ops.caxpy(static_cast<std::size_t>(m), -l, x.row(k), x.row(r));
        }
    }
    for (int k = n - 1; k >= 0; --k) {
        for (int r = k + 1; r < n; ++r) {
            const cplx u = lu_(k, r);
            if (u.real() != 0.0 || u.imag() != 0.0)
                ops.caxpy(static_cast<std::size_t>(m), -u, x.row(r), x.row(k));
        }
        const cplx inv_piv = 1.0 / lu_(k, k);
        for (int c = 0; c < m; ++c) x(k, c) *= inv_piv;
    }
    return x;
}

CMat LuFactor::inverse() const { return solve(CMat::identity(size())); }

CMat dense_invert(const CMat& a) { return LuFactor(a, "matrix").inverse(); }

CMat fractional_power_series(const CMat& beta, const SeriesSpec& spec) {
    if (!beta.square()) throw DimensionError("fractional_power_series: beta must be square");
    if (spec.terms && *spec.terms < 1)
        throw std::invalid_argument("fractional_power_series: term count must be >= 1");
    const int n = beta.rows();
    CMat sum = CMat::identity(n);
    if (spec.terms && *spec.terms == 1) return sum;
    CMat power = CMat::identity(n);
    double coeff = 1.0;
    double prev_norm = 0.0;
    int growth_streak = 0;
    const int max_t = spec.terms ? *spec.terms - 1 : kSeriesCap;
    for (int t = 1; t <= max_t; ++t) {
        power = dense_mul(power, beta);
        coeff *= (spec.rho - (t - 1)) / t;
        double term_norm = 0.0;
        const std::size_t sz = sum.size();
        for (std::size_t i = 0; i < sz; ++i) {
            const cplx tv = coeff * power.data()[i];
            sum.data()[i] += tv;
            term_norm = std::max(term_norm, std::abs(tv));
        }
        if (!spec.terms && term_norm < kSeriesTol) return sum;
        if (t > 1 && term_norm > prev_norm) {
            if (++growth_streak >= 5)
                throw ConvergenceError("fractional_power_series: diverging (term norms grew for 5 consecutive terms)");
        } else {
            growth_streak = 0;
        }
        prev_norm = term_norm;
    }
    // convergence-mode runs stop at the 200-term cap
    return sum;
}

namespace {

CMat take_block(const CMat& a, int r0, int c0, int rows, int cols) {
    CMat b(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) b(r, c) = a(r0 + r, c0 + c);
    return b;
}

void put_block(CMat& a, int r0, int c0, const CMat& b) {
    for (int r = 0; r < b.rows(); ++r)
        for (int c = 0; c < b.cols(); ++c) a(r0 + r, c0 + c) = b(r, c);
}

template <typename InvFn>
CMat block_invert_impl(const CMat& a, int split, InvFn&& inv) {
    const int n = a.rows();
    const int m = n - split;
    const CMat a1 = take_block(a, 0, 0, split, split);
    const CMat a2 = take_block(a, 0, split, split, m);
    const CMat a3 = take_block(a, split, 0, m, split);
    const CMat a4 = take_block(a, split, split, m, m);

    CMat a4i;
    try {
        a4i = inv(a4);
    } catch (const SingularityError& e) {
        throw SingularityError(std::string("block_invert: A4 block is singular (") + e.what() + ")");
    }
    const CMat a2a4i = dense_mul(a2, a4i);
    const CMat schur = dense_sub(a1, dense_mul(a2a4i, a3));
    CMat phi;
    try {
        phi = inv(schur);
    } catch (const SingularityError& e) {
        throw SingularityError(std::string("block_invert: Schur complement is singular (") + e.what() + ")");
    }
    const CMat a4ia3 = dense_mul(a4i, a3);
    const CMat tr = dense_mul(phi, a2a4i);     // Phi A2 A4^-1
    const CMat bl = dense_mul(a4ia3, phi);     // A4^-1 A3 Phi

    CMat out(n, n);
    put_block(out, 0, 0, phi);
    for (int r = 0; r < split; ++r)
        for (int c = 0; c < m; ++c) out(r, split + c) = -tr(r, c);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < split; ++c) out(split + r, c) = -bl(r, c);
    put_block(out, split, split, dense_add(a4i, dense_mul(bl, dense_mul(a2, a4i))));
    return out;
}

}  // namespace

CMat block_invert_2x2(const CMat& a, int split) {
    if (!a.square()) throw DimensionError("block_invert_2x2: matrix must be square");
    if (split < 1 || split >= a.rows())
        throw std::invalid_argument("block_invert_2x2: split must lie strictly inside the matrix");
    return block_invert_impl(a, split, [](const CMat& m) { return dense_invert(m); });
}

CMat block_invert_recursive(const CMat& a, int min_block) {
    if (!a.square()) throw DimensionError("block_invert_recursive: matrix must be square");
    if (min_block < 1) throw std::invalid_argument("block_invert_recursive: min_block must be >= 1");
    const int n = a.rows();
    if (n <= min_block) return dense_invert(a);
    if (n % 2 != 0)
        throw DimensionError("block_invert_recursive: size must halve down to min_block");
    const int half = n / 2;
    return block_invert_impl(
        a, half, [min_block](const CMat& m) { return block_invert_recursive(m, min_block); });
}

}  // namespace ofdmeq
