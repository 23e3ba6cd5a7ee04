// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ofdmeq/channel.hpp"
#include "ofdmeq/linalg.hpp"
#include "ofdmeq/rng.hpp"

using namespace ofdmeq;

TEST_CASE("cp matrices structure") {
    auto [ins, rem] = cp_matrices(8, 2);
    CHECK(max_abs_diff(dense_mul(rem, ins), CMat::identity(8)) == 0.0);

    // counting vector: insertion prepends the tail
    CVec x(8);
    for (int i = 0; i < 8; ++i) x[i] = cplx(i, 0);
    CVec y = dense_matvec(ins, x);
    CHECK(y[0] == cplx(6, 0));
    CHECK(y[1] == cplx(7, 0));
    for (int i = 0; i < 8; ++i) CHECK(y[2 + i] == cplx(i, 0));

    auto [i0, r0] = cp_matrices(5, 0);
    CHECK(max_abs_diff(i0, CMat::identity(5)) == 0.0);
    CHECK(max_abs_diff(r0, CMat::identity(5)) == 0.0);

    CHECK_THROWS_AS(cp_matrices(4, 4), std::invalid_argument);
}

TEST_CASE("cp round trip across shapes") {
    for (int n : {4, 8, 16})
        for (int ncp = 0; ncp < n; ncp += 3) {
            auto [ins, rem] = cp_matrices(n, ncp);
            CHECK(max_abs_diff(dense_mul(rem, ins), CMat::identity(n)) == 0.0);
        }
}

TEST_CASE("cfo matrix") {
    CHECK(max_abs_diff(cfo_matrix(0.0, 16, 4), CMat::identity(20)) == 0.0);

    CMat m = cfo_matrix(0.37, 16, 4);
    CHECK(std::abs(m(0, 0) - cplx(1, 0)) == 0.0);  // leading entry is always 1

    CMat f = cfo_matrix(0.1, 128, 0);
    for (int k = 0; k < 128; ++k) {
        const cplx want = std::polar(1.0, 2.0 * std::numbers::pi * 0.1 * k / 128.0);
        CHECK(std::abs(f(k, k) - want) < 1e-14);
    }

    // cfo(eps) cfo(-eps) = I
    CMat a = cfo_matrix(0.23, 32, 8), b = cfo_matrix(-0.23, 32, 8);
    CHECK(max_abs_diff(dense_mul(a, b), CMat::identity(40)) < 1e-14);
}

TEST_CASE("channel irm") {
    CVec one = {cplx(1, 0)};
    CHECK(max_abs_diff(channel_irm(one, 5), CMat::identity(5)) == 0.0);

    CVec shift = {cplx(0, 0), cplx(1, 0)};
    CMat s = channel_irm(shift, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(s(r, c) == (r == c + 1 ? cplx(1, 0) : cplx(0, 0)));

    Rng rng(4);
    CVec h(3);
    for (auto& v : h) v = rng.cgaussian();
    CMat m = channel_irm(h, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            const int d = r - c;
            const cplx want = (d >= 0 && d < 3) ? h[d] : cplx(0, 0);
            CHECK(std::abs(m(r, c) - want) == 0.0);
        }

    CVec big(10);
    CHECK_THROWS_AS(channel_irm(big, 5), DimensionError);
}

TEST_CASE("effective matrix trivial and circulant cases") {
    CVec one = {cplx(1, 0)};
    for (auto kind : {TransformKind::Walsh, TransformKind::Fourier}) {
        TransformPlan plan(kind, 16);
        CMat pi = effective_matrix(plan, one, 0.0, 16, 4);
        CHECK(max_abs_diff(pi, CMat::identity(16)) < 1e-13);
    }

    // Fourier, eps=0: diagonal with DFT of zero-padded taps
    TransformPlan fp(TransformKind::Fourier, 16);
    CVec h = {cplx(1, 0), cplx(0.5, 0)};
    CMat pi = effective_matrix(fp, h, 0.0, 16, 4);
    double offdiag = 0;
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            if (r != c) offdiag = std::max(offdiag, std::abs(pi(r, c)));
    CHECK(offdiag < 1e-10);
    for (int k = 0; k < 16; ++k) {
        cplx dft = 0.0;
        for (int l = 0; l < 2; ++l)
            dft += h[l] * std::polar(1.0, -2.0 * std::numbers::pi * k * l / 16.0);
        CHECK(std::abs(pi(k, k) - dft) < 1e-12);
    }

    // Walsh with the same taps is NOT diagonal
    TransformPlan wp(TransformKind::Walsh, 16);
    CMat wpi = effective_matrix(wp, h, 0.0, 16, 4);
    double woff = 0;
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            if (r != c) woff = std::max(woff, std::abs(wpi(r, c)));
    CHECK(woff > 1e-3);
}

TEST_CASE("effective matrix equals explicit five-factor product") {
    Rng rng(11);
    CVec h(4);
    for (auto& v : h) v = rng.cgaussian();
    const double eps = 0.083;
    for (auto kind : {TransformKind::Walsh, TransformKind::Fourier}) {
        TransformPlan plan(kind, 16);
        auto [ins, rem] = cp_matrices(16, 5);
        CMat ref = dense_mul(
            plan.matrix(Direction::Forward),
            dense_mul(rem, dense_mul(cfo_matrix(eps, 16, 5),
                                     dense_mul(channel_irm(h, 21),
                                               dense_mul(ins, plan.matrix(Direction::Inverse))))));
        CMat fast = effective_matrix(plan, h, eps, 16, 5);
        CHECK(max_abs_diff(fast, ref) < 1e-13);
    }
}

TEST_CASE("effective matrix linear in taps") {
    Rng rng(12);
    CVec h1(3), h2(3), hs(3);
    for (int i = 0; i < 3; ++i) {
        h1[i] = rng.cgaussian();
        h2[i] = rng.cgaussian();
        hs[i] = h1[i] + h2[i];
    }
    TransformPlan plan(TransformKind::Walsh, 16);
    CMat sum = dense_add(effective_matrix(plan, h1, 0.05, 16, 4),
                         effective_matrix(plan, h2, 0.05, 16, 4));
    CMat direct = effective_matrix(plan, hs, 0.05, 16, 4);
    CHECK(max_abs_diff(sum, direct) < 1e-12);
}

TEST_CASE("fourier diagonality holds whenever CP covers the delay spread") {
    Rng rng(13);
    TransformPlan plan(TransformKind::Fourier, 32);
    for (int l : {1, 3, 5}) {
        CVec h(l);
        for (auto& v : h) v = rng.cgaussian();
        CMat pi = effective_matrix(plan, h, 0.0, 32, 4);  // l-1 <= 4
        double off = 0;
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 32; ++c)
                if (r != c) off = std::max(off, std::abs(pi(r, c)));
        CHECK(off < 1e-10);
    }
}

TEST_CASE("interference matrix identity at zero offset") {
    for (auto kind : {TransformKind::Walsh, TransformKind::Fourier}) {
        CMat eta = interference_matrix(kind, 0.0, 32);
        CHECK(max_abs_diff(eta, CMat::identity(32)) < 1e-13);
    }
}

TEST_CASE("fourier interference is circulant") {
    CMat eta = interference_matrix(TransformKind::Fourier, 0.1, 128);
    for (int r = 0; r < 128; ++r)
        for (int c = 0; c < 128; ++c) {
            const int d = (c - r + 128) % 128;
            CHECK(std::abs(eta(r, c) - eta(0, d)) < 1e-10);
        }
}

TEST_CASE("walsh interference is constant on xor classes with the documented peak") {
    CMat eta = interference_matrix(TransformKind::Walsh, 0.1, 64);
    for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 64; ++c) CHECK(std::abs(eta(r, c) - eta(0, r ^ c)) < 1e-12);

    CMat big = interference_matrix(TransformKind::Walsh, 0.1, 128);
    double peak = 0;
    int peak_off = -1;
    const double diag = std::abs(big(0, 0));
    for (int c = 1; c < 128; ++c) {
        const double v = std::abs(big(0, c)) / diag;
        if (v > peak) {
            peak = v;
            peak_off = c;
        }
    }
    CHECK(peak_off == 64);
    CHECK(peak == doctest::Approx(0.1584).epsilon(0.005));

    CHECK_THROWS_AS(interference_matrix(TransformKind::Walsh, 0.1, 48), std::invalid_argument);
}

TEST_CASE("draw_channel determinism and degenerate cfo") {
    ChannelConfig cfg;
    cfg.epsilon_max = 0.0;
    ChannelRealization a = draw_channel(cfg, 7);
    for (double e : a.cfo) CHECK(e == 0.0);

    cfg.epsilon_max = 0.1;
    ChannelRealization b1 = draw_channel(cfg, 7);
    ChannelRealization b2 = draw_channel(cfg, 7);
    CHECK(b1.taps == b2.taps);
    CHECK(b1.cfo == b2.cfo);

    ChannelRealization b3 = draw_channel(cfg, 8);
    CHECK(b1.taps != b3.taps);
}

TEST_CASE("draw_channel tap powers follow the normalized profile") {
    ChannelConfig cfg;  // Vehicular A defaults
    const int trials = 10000;
    std::vector<double> acc(cfg.taps(), 0.0);
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
        ChannelRealization r = draw_channel(cfg, t);
        auto h = r.taps_of(0, 0);
        for (int l = 0; l < cfg.taps(); ++l) {
            acc[l] += std::norm(h[l]);
            total += std::norm(h[l]);
        }
    }
    double psum = 0.0;
    for (double p : cfg.pdp_db) psum += std::pow(10.0, p / 10.0);
    for (int l = 0; l < cfg.taps(); ++l) {
        const double want = std::pow(10.0, cfg.pdp_db[l] / 10.0) / psum;
        const double got = acc[l] / trials;
        CHECK(got == doctest::Approx(want).epsilon(0.05));
    }
    CHECK(total / trials == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("config validation") {
    ChannelConfig cfg;
    cfg.epsilon_max = 0.6;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ChannelConfig{};
    cfg.n_cp = 3;  // below L-1 = 5
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
