// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>

namespace ofdmeq::kernels {

using cplx = std::complex<double>;

// Data-parallel inner loops shared by the dense/banded linear algebra and the
// fast transforms. Each operation has a scalar reference implementation and
// an AVX2+FMA variant; the active table is chosen once at startup from CPUID
// (override with OFDMEQ_KERNELS=scalar|avx2 or force()).
//
// The two variants agree to floating-point rounding, not bitwise: the FMA
// contraction in the AVX2 path reassociates the complex arithmetic.
struct Ops {
    // y[i] += a * x[i]
    void (*caxpy)(std::size_t n, cplx a, const cplx* x, cplx* y);
    // sum_i conj(x[i]) * y[i]
    cplx (*cdotc)(std::size_t n, const cplx* x, const cplx* y);
    // (a[i], b[i]) <- (a[i] + b[i], a[i] - b[i])   [Hadamard butterfly]
    void (*butterfly)(std::size_t n, cplx* a, cplx* b);
    // x[i] *= s   (real scale)
    void (*scale)(std::size_t n, double s, cplx* x);
    const char* name;
};

const Ops& scalar_ops();
const Ops& avx2_ops();  // valid only if avx2_supported()

bool avx2_supported();

// Active table (initialized on first use).
const Ops& active();

// Force a specific variant ("scalar" or "avx2"); throws std::invalid_argument
// for unknown names or when the requested ISA is unavailable. Test hook; not
// safe to call concurrently with running kernels.
void force(const char* name);

}  // namespace ofdmeq::kernels
