// SPDX-License-Identifier: Apache-2.0
#include "ofdmeq/equalizers.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "ofdmeq/banded.hpp"
#include "ofdmeq/errors.hpp"
#include "ofdmeq/kernels.hpp"
#include "ofdmeq/linalg.hpp"

namespace ofdmeq {

namespace {

using EigMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigMat> as_eigen(const CMat& m) {
    return {m.data(), m.rows(), m.cols()};
}

std::vector<std::uint8_t> hard_bits(const CVec& soft) {
    std::vector<std::uint8_t> b(soft.size());
    for (size_t k = 0; k < soft.size(); ++k) b[k] = soft[k].real() >= 0.0 ? 0 : 1;
    return b;
}

CVec hard_symbols(const CVec& soft) {
    CVec s(soft.size());
    for (size_t k = 0; k < soft.size(); ++k) s[k] = soft[k].real() >= 0.0 ? 1.0 : -1.0;
    return s;
}

// Vertical stack of stream i's per-antenna blocks (the composite matrix).
CMat stream_stack(const StackedModel& m, int i) {
    CMat s(m.n_rx * m.n, m.n);
    for (int j = 0; j < m.n_rx; ++j) {
        const CMat& b = m.block(j, i);
        for (int r = 0; r < m.n; ++r)
            for (int c = 0; c < m.n; ++c) s(j * m.n + r, c) = b(r, c);
    }
    return s;
}

CMat stream_stack_banded(const StackedModel& m, int i, int tau) {
    CMat s(m.n_rx * m.n, m.n);
    for (int j = 0; j < m.n_rx; ++j) {
        const CMat& b = m.block(j, i);
        for (int r = 0; r < m.n; ++r) {
            const int lo = r - tau < 0 ? 0 : r - tau;
            const int hi = r + tau >= m.n ? m.n - 1 : r + tau;
            for (int c = lo; c <= hi; ++c) s(j * m.n + r, c) = b(r, c);
        }
    }
    return s;
}

CMat joint_stack(const StackedModel& m) {
    CMat s(m.n_rx * m.n, m.n_tx * m.n);
    for (int j = 0; j < m.n_rx; ++j)
        for (int i = 0; i < m.n_tx; ++i) {
            const CMat& b = m.block(j, i);
            for (int r = 0; r < m.n; ++r)
                for (int c = 0; c < m.n; ++c) s(j * m.n + r, i * m.n + c) = b(r, c);
        }
    return s;
}

// A += scale * G G^H for a tall stack G.
void add_scaled_gram(CMat& a, const CMat& g, double scale) {
    const CMat gh = dense_hermitian(g);
    const auto& ops = kernels::active();
    for (int r = 0; r < a.rows(); ++r) {
        cplx* arow = a.row(r);
        const cplx* grow = g.row(r);
        for (int k = 0; k < g.cols(); ++k) {
            const cplx v = scale * grow[k];
            if (v.real() != 0.0 || v.imag() != 0.0)
                ops.caxpy(static_cast<std::size_t>(a.cols()), v, gh.row(k), arow);
        }
    }
}

// Exact K^{-1/2} for K = s0 I + sum_b P_b G_b G_b^H, by Hermitian
// eigendecomposition. When the combined interferer stack is thin, the
// eigendecomposition runs on its Gram matrix (same operator, smaller solve);
// otherwise directly on K. Eigenvalues are floored at
// max(s0, lambda_max * 1e-13, 1e-60) so the noiseless limit degrades into an
// exact interference-nulling whitener instead of dividing by rounding noise.
CMat inv_sqrt_covariance(const StackedModel& m, int first_interferer) {
    const int dim = m.n_rx * m.n;
    const double s0 = m.noise_psd;
    const int n_int = m.n_tx - first_interferer;

    if (n_int <= 0) {
        CMat w = CMat::identity(dim);
        const double floor_val = std::max(s0, 1e-60);
        kernels::active().scale(w.size(), 1.0 / std::sqrt(floor_val), w.data());
        return w;
    }

    const int cols = n_int * m.n;
    if (cols <= dim / 2) {
        // Gram route: K = s0 I + G G^H with G = [sqrt(P_b) Xi_b ...]
        CMat g(dim, cols);
        for (int b = first_interferer; b < m.n_tx; ++b) {
            const CMat s = stream_stack(m, b);
            const double sp = std::sqrt(m.power(b));
            const int c0 = (b - first_interferer) * m.n;
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < m.n; ++c) g(r, c0 + c) = sp * s(r, c);
        }
        const CMat gram = dense_mul(dense_hermitian(g), g);
        Eigen::SelfAdjointEigenSolver<EigMat> es(as_eigen(gram));
        if (es.info() != Eigen::Success)
            throw ConditioningError("mmse_sic: eigendecomposition of interferer Gram failed");
        const auto& lam = es.eigenvalues();
        const double lmax = std::max(lam.maxCoeff(), 0.0);
        if (lam.minCoeff() < -1e-10 * std::max(lmax, 1.0))
            throw ConditioningError("mmse_sic: covariance is numerically indefinite");
        const double rank_tol = std::max(lmax * 1e-13, 1e-60);
        const double floor_val = std::max({s0, lmax * 1e-13, 1e-60});
        // Nonzero eigenpairs of G G^H: u_k = G v_k / sqrt(lam_k).
        // K^{-1/2} = base (I - U U^H) + U diag((s0+lam)^{-1/2}) U^H
        //          = base I + U diag((s0+lam)^{-1/2} - base) U^H
        EigMat gv = as_eigen(g) * es.eigenvectors();
        const double base = 1.0 / std::sqrt(std::max(s0, floor_val));
        CMat w(dim, dim);
        for (int r = 0; r < dim; ++r) w(r, r) = base;
        const auto& ops = kernels::active();
        CVec u(dim), uc(dim);
        for (int k = 0; k < cols; ++k) {
            const double lk = lam(k);
            if (lk <= rank_tol) continue;  // direction carries no interferer energy
            const double inv_norm = 1.0 / std::sqrt(lk);
            for (int r = 0; r < dim; ++r) {
                u[r] = gv(r, k) * inv_norm;
                uc[r] = std::conj(u[r]);
            }
            const double coef = 1.0 / std::sqrt(std::max(s0 + lk, floor_val)) - base;
            for (int r = 0; r < dim; ++r)
                ops.caxpy(static_cast<std::size_t>(dim), coef * u[r], uc.data(), w.row(r));
        }
        return w;
    }

    CMat k = CMat::identity(dim);
    kernels::active().scale(k.size(), s0, k.data());
    for (int b = first_interferer; b < m.n_tx; ++b)
        add_scaled_gram(k, stream_stack(m, b), m.power(b));
    Eigen::SelfAdjointEigenSolver<EigMat> es(as_eigen(k));
    if (es.info() != Eigen::Success)
        throw ConditioningError("mmse_sic: eigendecomposition of covariance failed");
    const auto& lam = es.eigenvalues();
    const double lmax = std::max(lam.maxCoeff(), 0.0);
    if (lam.minCoeff() < -1e-10 * std::max(lmax, 1.0))
        throw ConditioningError("mmse_sic: covariance is numerically indefinite");
    const double floor_val = std::max({s0, lmax * 1e-13, 1e-60});
    EigMat scaled = es.eigenvectors();
    for (int c = 0; c < dim; ++c)
        scaled.col(c) *= 1.0 / std::sqrt(std::max(lam(c), floor_val));
    EigMat w = scaled * es.eigenvectors().adjoint();
    CMat out(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) out(r, c) = w(r, c);
    return out;
}

// Ridge-regularized pseudo-inverse applied to a vector:
// (Omega^H Omega + ridge I)^-1 Omega^H y.
CVec ridge_solve(const CMat& omega, double ridge, std::span<const cplx> y, const char* label) {
    CMat g = dense_mul(dense_hermitian(omega), omega);
    for (int d = 0; d < g.rows(); ++d) g(d, d) += ridge;
    const CVec rhs = dense_hermitian_matvec(omega, y);
    return LuFactor(std::move(g), label).solve(rhs);
}

}  // namespace

void StackedModel::validate() const {
    if (n_rx < 1 || n_tx < 1 || n < 1) throw DimensionError("StackedModel: bad dimensions");
    if (static_cast<int>(pi.size()) != n_rx * n_tx)
        throw DimensionError("StackedModel: block grid size mismatch");
    for (const CMat& b : pi)
        if (b.rows() != n || b.cols() != n) throw DimensionError("StackedModel: block shape mismatch");
    if (static_cast<int>(received.size()) != n_rx * n)
        throw DimensionError("StackedModel: received vector length mismatch");
    if (!stream_powers.empty() && static_cast<int>(stream_powers.size()) != n_tx)
        throw DimensionError("StackedModel: stream power count mismatch");
    if (noise_psd < 0.0) throw std::invalid_argument("StackedModel: noise PSD must be >= 0");
}

void JlcozfParams::validate(int n) const {
    if (re_xi < 0.0 || im_xi < 0.0)
        throw std::invalid_argument("jlcozf: Re(xi) and Im(xi) must be >= 0");
    if (tau < 0 || tau > n - 1)
        throw std::invalid_argument("jlcozf: require 0 <= tau <= N-1");
    if (delta && *delta < 1) throw std::invalid_argument("jlcozf: delta must be >= 1");
}

Detection lzf_detect(const StackedModel& model) {
    model.validate();
    const CMat pi = joint_stack(model);
    CVec soft = ridge_solve(pi, 0.0, model.received, "LZF normal equations");
    Detection det;
    for (int i = 0; i < model.n_tx; ++i) {
        CVec s(soft.begin() + static_cast<size_t>(i) * model.n,
               soft.begin() + static_cast<size_t>(i + 1) * model.n);
        det.bits.push_back(hard_bits(s));
        det.soft.push_back(std::move(s));
    }
    return det;
}

Detection lmmse_detect(const StackedModel& model, double snr) {
    model.validate();
    if (!(snr > 0.0)) throw std::invalid_argument("lmmse_detect: snr must be > 0");
    const double ridge = std::isinf(snr) ? 0.0 : 1.0 / snr;
    const CMat pi = joint_stack(model);
    CVec soft = ridge_solve(pi, ridge, model.received, "LMMSE normal equations");
    Detection det;
    for (int i = 0; i < model.n_tx; ++i) {
        CVec s(soft.begin() + static_cast<size_t>(i) * model.n,
               soft.begin() + static_cast<size_t>(i + 1) * model.n);
        det.bits.push_back(hard_bits(s));
        det.soft.push_back(std::move(s));
    }
    return det;
}

Detection mmse_sic_detect(const StackedModel& model) {
    model.validate();
    Detection det;
    CVec running = model.received;
    const auto& ops = kernels::active();
    for (int a = 0; a < model.n_tx; ++a) {
        const CMat w = inv_sqrt_covariance(model, a + 1);
        const CMat psi_a = stream_stack(model, a);
        const CMat omega = dense_mul(w, psi_a);
        const CVec wy = dense_matvec(w, running);
        // whitened noise+interference has unit variance: ridge = 1/P_a
        const CVec soft = ridge_solve(omega, 1.0 / model.power(a), wy, "MMSE-SIC per-stream solve");
        const CVec sym = hard_symbols(soft);
        const CVec recon = dense_matvec(psi_a, sym);
        ops.caxpy(running.size(), cplx(-1.0, 0.0), recon.data(), running.data());
        det.bits.push_back(hard_bits(soft));
        det.soft.push_back(soft);
    }
    return det;
}

Detection jlcozf_sic_detect(const StackedModel& model, const JlcozfParams& params) {
    model.validate();
    params.validate(model.n);
    const int dim = model.n_rx * model.n;
    Detection det;
    CVec running = model.received;
    const auto& ops = kernels::active();

    std::vector<CMat> xi;
    xi.reserve(model.n_tx);
    for (int b = 0; b < model.n_tx; ++b) xi.push_back(stream_stack_banded(model, b, params.tau));

    for (int a = 0; a < model.n_tx; ++a) {
        CMat omega;
        CVec wy;
        if (a + 1 < model.n_tx) {
            // beta = Re(xi) * sum_{b>a} Xi_b Xi_b^H ; K = I + beta
            CMat beta(dim, dim);
            for (int b = a + 1; b < model.n_tx; ++b) add_scaled_gram(beta, xi[b], params.re_xi);
            const CMat k_half =
                fractional_power_series(beta, SeriesSpec{0.5, params.delta});
            const CMat w = block_invert_recursive(k_half, model.n);
            omega = dense_mul(w, xi[a]);
            wy = dense_matvec(w, running);
        } else {
            // last stream: K = I, whitening drops out (direct banded solve)
            omega = xi[a];
            wy = running;
        }
        const CVec soft = ridge_solve(omega, params.im_xi, wy, "JLCOZF per-stream solve");
        const CVec sym = hard_symbols(soft);
        const CVec recon = dense_matvec(xi[a], sym);
        ops.caxpy(running.size(), cplx(-1.0, 0.0), recon.data(), running.data());
        det.bits.push_back(hard_bits(soft));
        det.soft.push_back(soft);
    }
    return det;
}

}  // namespace ofdmeq
