// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "ofdmeq/kernels.hpp"
#include "ofdmeq/rng.hpp"

using namespace ofdmeq;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::uint64_t seed) {
    Rng r(seed);
    std::vector<cplx> v(n);
    for (auto& x : v) x = r.cgaussian();
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("caxpy scalar semantics") {
    std::vector<cplx> x = {{1, 2}, {3, -1}};
    std::vector<cplx> y = {{0, 1}, {2, 0}};
    kernels::scalar_ops().caxpy(2, {2, -1}, x.data(), y.data());
    // (2-j)(1+2j) = 4+3j ; (2-j)(3-j) = 5-5j
    CHECK(std::abs(y[0] - cplx(4, 4)) < 1e-15);
    CHECK(std::abs(y[1] - cplx(7, -5)) < 1e-15);
}

TEST_CASE("cdotc scalar semantics") {
    std::vector<cplx> x = {{1, 1}, {0, 2}};
    std::vector<cplx> y = {{2, 0}, {1, -1}};
    const cplx d = kernels::scalar_ops().cdotc(2, x.data(), y.data());
    // conj(1+j)(2) + conj(2j)(1-j) = (2-2j) + (-2-2j) = -4j
    CHECK(std::abs(d - cplx(0, -4)) < 1e-15);
}

TEST_CASE("butterfly pairs") {
    std::vector<cplx> a = {{1, 0}, {2, 1}};
    std::vector<cplx> b = {{3, 0}, {-1, 1}};
    kernels::scalar_ops().butterfly(2, a.data(), b.data());
    CHECK(std::abs(a[0] - cplx(4, 0)) < 1e-15);
    CHECK(std::abs(b[0] - cplx(-2, 0)) < 1e-15);
    CHECK(std::abs(a[1] - cplx(1, 2)) < 1e-15);
    CHECK(std::abs(b[1] - cplx(3, 0)) < 1e-15);
}

TEST_CASE("avx2 variants agree with scalar reference") {
    if (!kernels::avx2_supported()) return;
    const auto& sc = kernels::scalar_ops();
    const auto& vx = kernels::avx2_ops();
    // odd and even lengths, including remainders around the vector width
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 15u, 64u, 129u, 1000u}) {
        auto x = random_vec(n, 10 + n);
        auto y0 = random_vec(n, 20 + n);
        auto y1 = y0;
        Rng r(30 + n);
        const cplx a = r.cgaussian();

        sc.caxpy(n, a, x.data(), y0.data());
        vx.caxpy(n, a, x.data(), y1.data());
        CHECK(max_diff(y0, y1) < 1e-13);

        const cplx d0 = sc.cdotc(n, x.data(), y0.data());
        const cplx d1 = vx.cdotc(n, x.data(), y0.data());
        CHECK(std::abs(d0 - d1) < 1e-10 * (1.0 + std::abs(d0)));

        auto p0 = random_vec(n, 40 + n), q0 = random_vec(n, 50 + n);
        auto p1 = p0, q1 = q0;
        sc.butterfly(n, p0.data(), q0.data());
        vx.butterfly(n, p1.data(), q1.data());
        CHECK(max_diff(p0, p1) == 0.0);
        CHECK(max_diff(q0, q1) == 0.0);

        auto s0 = random_vec(n, 60 + n);
        auto s1 = s0;
        sc.scale(n, 0.8371, s0.data());
        vx.scale(n, 0.8371, s1.data());
        CHECK(max_diff(s0, s1) == 0.0);
    }
}

TEST_CASE("dispatch force and restore") {
    kernels::force("scalar");
    CHECK(std::string(kernels::active().name) == "scalar");
    if (kernels::avx2_supported()) {
        kernels::force("avx2");
        CHECK(std::string(kernels::active().name) == "avx2");
    }
    CHECK_THROWS_AS(kernels::force("sse9"), std::invalid_argument);
}
