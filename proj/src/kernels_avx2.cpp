// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA variants of the complex inner loops. Compiled as a separate
// translation unit with -mavx2 -mfma; only reached through the runtime
// dispatch table, so the rest of the binary stays baseline x86-64.

#include "ofdmeq/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace ofdmeq::kernels {

namespace {

// One __m256d holds two interleaved complex<double>: [re0 im0 re1 im1].
// (ar + j ai)(xr + j xi): with x = [xr im..], xs = [xi xr ..]:
//   fmaddsub(x, ar, xs*ai) = [xr*ar - xi*ai, xi*ar + xr*ai]  -- exactly c-mul.

void caxpy_avx2(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    std::size_t i = 0;
    const std::size_t n2 = 2 * n;
    for (; i + 8 <= n2; i += 8) {
        __m256d x0 = _mm256_loadu_pd(xd + i);
        __m256d x1 = _mm256_loadu_pd(xd + i + 4);
        __m256d s0 = _mm256_permute_pd(x0, 0x5);
        __m256d s1 = _mm256_permute_pd(x1, 0x5);
        __m256d p0 = _mm256_fmaddsub_pd(x0, ar, _mm256_mul_pd(s0, ai));
        __m256d p1 = _mm256_fmaddsub_pd(x1, ar, _mm256_mul_pd(s1, ai));
        _mm256_storeu_pd(yd + i, _mm256_add_pd(_mm256_loadu_pd(yd + i), p0));
        _mm256_storeu_pd(yd + i + 4, _mm256_add_pd(_mm256_loadu_pd(yd + i + 4), p1));
    }
    for (; i + 4 <= n2; i += 4) {
        __m256d x0 = _mm256_loadu_pd(xd + i);
        __m256d s0 = _mm256_permute_pd(x0, 0x5);
        __m256d p0 = _mm256_fmaddsub_pd(x0, ar, _mm256_mul_pd(s0, ai));
        _mm256_storeu_pd(yd + i, _mm256_add_pd(_mm256_loadu_pd(yd + i), p0));
    }
    if (i < n2) {  // one trailing complex
        const std::size_t k = i / 2;
        const double xr = x[k].real(), xi = x[k].imag();
        y[k] += cplx(a.real() * xr - a.imag() * xi, a.real() * xi + a.imag() * xr);
    }
}

cplx cdotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
    // accumulate [re im re im] lanes; conj(x)*y per lane pair
    __m256d acc_r = _mm256_setzero_pd();
    __m256d acc_i = _mm256_setzero_pd();
    auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<const double*>(y);
    std::size_t i = 0;
    const std::size_t n2 = 2 * n;
    for (; i + 4 <= n2; i += 4) {
        __m256d xv = _mm256_loadu_pd(xd + i);   // xr0 xi0 xr1 xi1
        __m256d yv = _mm256_loadu_pd(yd + i);   // yr0 yi0 yr1 yi1
        __m256d ys = _mm256_permute_pd(yv, 0x5);  // yi0 yr0 yi1 yr1
        // real: xr*yr + xi*yi ; imag: xr*yi - xi*yr
        acc_r = _mm256_fmadd_pd(xv, yv, acc_r);        // xr*yr | xi*yi pairs
        acc_i = _mm256_fmadd_pd(xv, ys, acc_i);        // xr*yi | xi*yr pairs
    }
    double br[4], bi[4];
    _mm256_storeu_pd(br, acc_r);
    _mm256_storeu_pd(bi, acc_i);
    double sr = br[0] + br[1] + br[2] + br[3];
    double si = (bi[0] - bi[1]) + (bi[2] - bi[3]);
    for (std::size_t k = i / 2; k < n; ++k) {
        const double xr = x[k].real(), xi = x[k].imag();
        const double yr = y[k].real(), yi = y[k].imag();
        sr += xr * yr + xi * yi;
        si += xr * yi - xi * yr;
    }
    return {sr, si};
}

void butterfly_avx2(std::size_t n, cplx* a, cplx* b) {
    auto* ad = reinterpret_cast<double*>(a);
    auto* bd = reinterpret_cast<double*>(b);
    std::size_t i = 0;
    const std::size_t n2 = 2 * n;
    for (; i + 4 <= n2; i += 4) {
        __m256d av = _mm256_loadu_pd(ad + i);
        __m256d bv = _mm256_loadu_pd(bd + i);
        _mm256_storeu_pd(ad + i, _mm256_add_pd(av, bv));
        _mm256_storeu_pd(bd + i, _mm256_sub_pd(av, bv));
    }
    for (std::size_t k = i / 2; k < n; ++k) {
        const cplx s = a[k] + b[k];
        const cplx d = a[k] - b[k];
        a[k] = s;
        b[k] = d;
    }
}

void scale_avx2(std::size_t n, double s, cplx* x) {
    const __m256d sv = _mm256_set1_pd(s);
    auto* xd = reinterpret_cast<double*>(x);
    std::size_t i = 0;
    const std::size_t n2 = 2 * n;
    for (; i + 4 <= n2; i += 4)
        _mm256_storeu_pd(xd + i, _mm256_mul_pd(_mm256_loadu_pd(xd + i), sv));
    for (std::size_t k = i / 2; k < n; ++k) x[k] *= s;
}

const Ops kAvx2 = {caxpy_avx2, cdotc_avx2, butterfly_avx2, scale_avx2, "avx2"};

}  // namespace

const Ops& avx2_ops() { return kAvx2; }

}  // namespace ofdmeq::kernels

#else

namespace ofdmeq::kernels {
const Ops& avx2_ops() { return scalar_ops(); }
}  // namespace ofdmeq::kernels

#endif
