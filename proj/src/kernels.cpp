// SPDX-License-Identifier: Apache-2.0
#include "ofdmeq/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace ofdmeq::kernels {

namespace {

void caxpy_scalar(std::size_t n, cplx a, const cplx* x, cplx* y) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

cplx cdotc_scalar(std::size_t n, const cplx* x, const cplx* y) {
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        sr += xr * yr + xi * yi;
        si += xr * yi - xi * yr;
    }
    return {sr, si};
}

void butterfly_scalar(std::size_t n, cplx* a, cplx* b) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx s = a[i] + b[i];
        const cplx d = a[i] - b[i];
        a[i] = s;
        b[i] = d;
    }
}

void scale_scalar(std::size_t n, double s, cplx* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

const Ops kScalar = {caxpy_scalar, cdotc_scalar, butterfly_scalar, scale_scalar, "scalar"};

const Ops* select_default() {
    if (const char* env = std::getenv("OFDMEQ_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return &kScalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return &avx2_ops();
    }
    if (avx2_supported()) return &avx2_ops();
    return &kScalar;
}

std::atomic<const Ops*> g_active{nullptr};

}  // namespace

const Ops& scalar_ops() { return kScalar; }

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops& active() {
    const Ops* p = g_active.load(std::memory_order_acquire);
    if (!p) {
        p = select_default();
        g_active.store(p, std::memory_order_release);
    }
    return *p;
}

void force(const char* name) {
    if (std::strcmp(name, "scalar") == 0) {
        g_active.store(&kScalar, std::memory_order_release);
        return;
    }
    if (std::strcmp(name, "avx2") == 0) {
        if (!avx2_supported()) throw std::invalid_argument("kernels::force: avx2 not supported on this cpu");
        g_active.store(&avx2_ops(), std::memory_order_release);
        return;
    }
    throw std::invalid_argument(std::string("kernels::force: unknown variant '") + name + "'");
}

}  // namespace ofdmeq::kernels
