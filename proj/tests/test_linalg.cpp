// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ofdmeq/banded.hpp"
#include "ofdmeq/kernels.hpp"
#include "ofdmeq/linalg.hpp"
#include "ofdmeq/rng.hpp"

using namespace ofdmeq;

namespace {

CMat random_cmat(int r, int c, std::uint64_t seed) {
    Rng rng(seed);
    CMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng.cgaussian();
    return m;
}

// random Hermitian PSD with spectral norm <= bound
CMat random_hermitian_psd(int n, double bound, std::uint64_t seed) {
    CMat g = random_cmat(n, n, seed);
    CMat h = dense_mul(g, dense_hermitian(g));
    // scale by bound / lambda_max
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> eh(
        h.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(eh);
    const double s = bound / es.eigenvalues().maxCoeff();
    for (size_t i = 0; i < h.size(); ++i) h.data()[i] *= s;
    return h;
}

CMat eigen_power(const CMat& h, double expo) {
    const int n = h.rows();
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> em(
        h.data(), n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(em);
    Eigen::MatrixXcd out = es.eigenvectors() *
                           es.eigenvalues().array().pow(expo).matrix().asDiagonal() *
                           es.eigenvectors().adjoint();
    CMat r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = out(i, j);
    return r;
}

}  // namespace

TEST_CASE("band_extract basics") {
    CMat a = random_cmat(6, 6, 1);
    // full bandwidth reproduces the matrix
    CHECK(max_abs_diff(band_extract(a, 5).to_dense(), a) == 0.0);
    // tau=0 keeps only the diagonal
    BandedMat d = band_extract(a, 0);
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c)
            CHECK(d.get(r, c) == (r == c ? a(r, c) : cplx(0, 0)));
    CHECK_THROWS_AS(band_extract(a, 6), std::invalid_argument);
    CHECK_THROWS_AS(band_extract(a, -1), std::invalid_argument);
    CHECK_THROWS_AS(band_extract(random_cmat(3, 4, 2), 1), DimensionError);
}

TEST_CASE("band_extract against tridiagonal mask oracle") {
    CMat a = random_cmat(4, 4, 3);
    BandedMat b = band_extract(a, 1);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const cplx want = std::abs(r - c) <= 1 ? a(r, c) : cplx(0, 0);
            CHECK(std::abs(b.get(r, c) - want) == 0.0);
        }
}

TEST_CASE("band_extract idempotence and monotonicity") {
    CMat a = random_cmat(12, 12, 4);
    for (int tau : {0, 2, 5, 11}) {
        BandedMat b1 = band_extract(a, tau);
        BandedMat b2 = band_extract(b1.to_dense(), tau);
        CHECK(max_abs_diff(b1.to_dense(), b2.to_dense()) == 0.0);
    }
    for (int t1 = 0; t1 <= 8; t1 += 2)
        for (int t2 = t1; t2 <= 8; t2 += 2) {
            CMat lhs = band_extract(a, t1).to_dense();
            CMat rhs = band_extract(band_extract(a, t2).to_dense(), t1).to_dense();
            CHECK(max_abs_diff(lhs, rhs) == 0.0);
        }
}

TEST_CASE("banded_mul diagonal and full cases") {
    Rng r(9);
    const int n = 8;
    BandedMat a(n, 0), b(n, 0);
    for (int i = 0; i < n; ++i) {
        a.set(i, i, r.cgaussian());
        b.set(i, i, r.cgaussian());
    }
    BandedMat c = banded_mul(a, b);
    for (int i = 0; i < n; ++i) CHECK(std::abs(c.get(i, i) - a.get(i, i) * b.get(i, i)) < 1e-14);

    CMat fa = random_cmat(n, n, 10), fb = random_cmat(n, n, 11);
    BandedMat pa = band_extract(fa, n - 1), pb = band_extract(fb, n - 1);
    CHECK(max_abs_diff(banded_mul(pa, pb).to_dense(), dense_mul(fa, fb)) < 1e-12);
}

TEST_CASE("banded_mul matches dense-multiply-then-extract oracle") {
    const int n = 16, tau = 3;
    CMat fa = random_cmat(n, n, 20), fb = random_cmat(n, n, 21);
    BandedMat a = band_extract(fa, tau), b = band_extract(fb, tau);
    CMat oracle = band_extract(dense_mul(a.to_dense(), b.to_dense()), tau).to_dense();
    CHECK(max_abs_diff(banded_mul(a, b).to_dense(), oracle) < 1e-12);
    BandedMat wrong(n + 1, tau);
    CHECK_THROWS_AS(banded_mul(a, wrong), DimensionError);
}

TEST_CASE("banded ops randomized against dense oracles") {
    // 200 randomized cases across sizes and bandwidths
    int case_id = 0;
    for (int rep = 0; rep < 25; ++rep) {
        for (int n : {4, 9, 16, 32}) {
            Rng pick(7000 + case_id);
            const int tau = static_cast<int>(pick.uniform() * n);
            const int t = std::min(tau, n - 1);
            CMat fa = random_cmat(n, n, 8000 + case_id);
            CMat fb = random_cmat(n, n, 9000 + case_id);
            BandedMat a = band_extract(fa, t), b = band_extract(fb, t);

            CMat mul_oracle = band_extract(dense_mul(a.to_dense(), b.to_dense()), t).to_dense();
            CHECK(max_abs_diff(banded_mul(a, b).to_dense(), mul_oracle) < 1e-12);

            CMat sum_oracle = dense_add(a.to_dense(), b.to_dense());
            CHECK(max_abs_diff(banded_add(a, b).to_dense(), sum_oracle) < 1e-14);

            CVec u(n);
            Rng ur(10000 + case_id);
            for (auto& v : u) v = ur.cgaussian();
            const CVec mv = banded_matvec(a, u);
            const CVec mv_oracle = dense_matvec(a.to_dense(), u);
            for (int i = 0; i < n; ++i) CHECK(std::abs(mv[i] - mv_oracle[i]) < 1e-12);
            ++case_id;
        }
    }
}

TEST_CASE("banded add/sub and matvec specifics") {
    const int n = 32, tau = 5;
    CMat fa = random_cmat(n, n, 31);
    BandedMat a = band_extract(fa, tau);
    BandedMat z = banded_sub(a, a);
    CHECK(z.to_dense().max_abs() == 0.0);

    // tau = 0 matvec is elementwise diagonal scaling
    BandedMat d = band_extract(fa, 0);
    CVec u(n);
    Rng r(33);
    for (auto& v : u) v = r.cgaussian();
    const CVec y = banded_matvec(d, u);
    for (int i = 0; i < n; ++i) CHECK(std::abs(y[i] - fa(i, i) * u[i]) < 1e-14);

    const CVec y5 = banded_matvec(a, u);
    const CVec oracle = dense_matvec(a.to_dense(), u);
    for (int i = 0; i < n; ++i) CHECK(std::abs(y5[i] - oracle[i]) < 1e-12);

    CVec bad(n + 1);
    CHECK_THROWS_AS(banded_matvec(a, bad), DimensionError);
}

TEST_CASE("series trivial cases") {
    CMat zero(5, 5);
    CMat s = fractional_power_series(zero, {0.7, std::nullopt});
    CHECK(max_abs_diff(s, CMat::identity(5)) == 0.0);
    CMat b = random_cmat(5, 5, 40);
    CHECK(max_abs_diff(fractional_power_series(b, {0.5, 1}), CMat::identity(5)) == 0.0);
    CHECK_THROWS_AS(fractional_power_series(random_cmat(3, 4, 41), {0.5, 2}), DimensionError);
    CHECK_THROWS_AS(fractional_power_series(b, {0.5, 0}), std::invalid_argument);
}

TEST_CASE("series matches eigendecomposition square root") {
    const int n = 12;
    CMat beta = random_hermitian_psd(n, 0.3, 50);
    CMat s = fractional_power_series(beta, {0.5, std::nullopt});
    CMat ipb = dense_add(CMat::identity(n), beta);
    CMat oracle = eigen_power(ipb, 0.5);
    CHECK(max_abs_diff(s, oracle) < 1e-8 * oracle.max_abs());
}

TEST_CASE("series squared returns I+beta (property)") {
    for (int rep = 0; rep < 5; ++rep) {
        const int n = 8;
        CMat beta = random_hermitian_psd(n, 0.45, 60 + rep);
        CMat s = fractional_power_series(beta, {0.5, std::nullopt});
        CMat sq = dense_mul(s, s);
        CMat ipb = dense_add(CMat::identity(n), beta);
        CHECK(max_abs_diff(sq, ipb) < 1e-6 * ipb.max_abs());
    }
}

TEST_CASE("series divergence detection") {
    CMat beta = random_hermitian_psd(6, 3.0, 70);
    CHECK_THROWS_AS(fractional_power_series(beta, {0.5, std::nullopt}), ConvergenceError);
}

TEST_CASE("block inversion basics") {
    CHECK(max_abs_diff(block_invert_2x2(CMat::identity(6), 2), CMat::identity(6)) < 1e-14);

    // block-diagonal: inverse is blockwise
    CMat a(6, 6);
    CMat a1 = random_cmat(3, 3, 80), a4 = random_cmat(3, 3, 81);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            a(r, c) = a1(r, c);
            a(3 + r, 3 + c) = a4(r, c);
        }
    CMat inv = block_invert_2x2(a, 3);
    CMat want(6, 6);
    CMat i1 = dense_invert(a1), i4 = dense_invert(a4);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            want(r, c) = i1(r, c);
            want(3 + r, 3 + c) = i4(r, c);
        }
    CHECK(max_abs_diff(inv, want) < 1e-10);
}

TEST_CASE("block inversion matches LU oracle on 8x8") {
    CMat a = random_cmat(8, 8, 90);
    CMat b1 = block_invert_2x2(a, 4);
    CMat b2 = dense_invert(a);
    CHECK(max_abs_diff(b1, b2) < 1e-10 * b2.max_abs());
}

TEST_CASE("block inversion equivalence on 200 random matrices") {
    int id = 0;
    for (int rep = 0; rep < 67; ++rep) {
        for (int n : {4, 8, 16}) {
            if (id >= 200) break;
            CMat a = random_cmat(n, n, 100 + id);
            // push away from singularity
            for (int d = 0; d < n; ++d) a(d, d) += 3.0;
            CMat b1 = block_invert_2x2(a, n / 2);
            CMat b2 = dense_invert(a);
            CHECK(max_abs_diff(b1, b2) < 1e-8 * b2.max_abs());
            ++id;
        }
    }
}

TEST_CASE("block inversion names the failing block") {
    CMat a = random_cmat(6, 6, 300);
    for (int r = 3; r < 6; ++r)
        for (int c = 3; c < 6; ++c) a(r, c) = 0.0;  // singular A4
    try {
        block_invert_2x2(a, 3);
        FAIL("expected SingularityError");
    } catch (const SingularityError& e) {
        CHECK(std::string(e.what()).find("A4") != std::string::npos);
    }
    CHECK_THROWS_AS(block_invert_2x2(a, 0), std::invalid_argument);
}

TEST_CASE("block_invert_recursive equals dense inverse") {
    CMat a = random_cmat(16, 16, 310);
    for (int d = 0; d < 16; ++d) a(d, d) += 3.0;
    CMat r1 = block_invert_recursive(a, 4);
    CMat r2 = dense_invert(a);
    CHECK(max_abs_diff(r1, r2) < 1e-8 * r2.max_abs());
}

TEST_CASE("dense ops") {
    CHECK(max_abs_diff(dense_invert(CMat::identity(7)), CMat::identity(7)) == 0.0);

    CMat a = random_cmat(9, 5, 320);
    CHECK(max_abs_diff(dense_hermitian(dense_hermitian(a)), a) == 0.0);

    CMat s = random_cmat(16, 16, 321);
    CMat resid = dense_mul(s, dense_invert(s));
    CHECK(max_abs_diff(resid, CMat::identity(16)) < 1e-10);

    CMat sing(4, 4);
    for (int c = 0; c < 4; ++c) {
        sing(0, c) = cplx(1, 1);
        sing(1, c) = cplx(2, 2);  // row 1 = 2 * row 0
        sing(2, c) = random_cmat(1, 1, 400 + c)(0, 0);
        sing(3, c) = random_cmat(1, 1, 500 + c)(0, 0);
    }
    CHECK_THROWS_AS(dense_invert(sing), SingularityError);
    CHECK_THROWS_AS(dense_mul(random_cmat(3, 4, 1), random_cmat(3, 4, 2)), DimensionError);
}

TEST_CASE("scalar and avx2 kernels give matching linalg results") {
    if (!kernels::avx2_supported()) return;
    CMat a = random_cmat(24, 24, 600);
    CMat b = random_cmat(24, 24, 601);
    kernels::force("scalar");
    CMat m1 = dense_mul(a, b);
    CMat i1 = dense_invert(a);
    kernels::force("avx2");
    CMat m2 = dense_mul(a, b);
    CMat i2 = dense_invert(a);
    CHECK(max_abs_diff(m1, m2) < 1e-11);
    CHECK(max_abs_diff(i1, i2) < 1e-9);
}
