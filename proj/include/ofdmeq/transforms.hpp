// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ofdmeq/cmat.hpp"

namespace ofdmeq {

enum class TransformKind { Fourier, Walsh };
enum class Direction { Forward, Inverse };

// Unnormalized Hadamard matrix by Kronecker recursion; entries are +-1.
// k >= 1, size 2^k.
CMat hadamard_core(int k);

// Normalized Walsh-Hadamard matrix (1/sqrt(N)) * phi(2^k); symmetric and
// orthogonal, so it is its own inverse. Natural (Kronecker) ordering.
CMat walsh_matrix(int k);

// Unitary DFT matrix, (m,n) entry (1/sqrt(N)) e^{-j 2 pi m n / N}.
// The inverse transform is the Hermitian transpose (entrywise conjugate,
// since the matrix is symmetric).
CMat fourier_matrix(int n);

// Precomputed plan for an N-point modulator/demodulator pair. Both
// directions carry the 1/sqrt(N) unitary normalization, so
// forward(inverse(x)) == x without extra scaling.
class TransformPlan {
public:
    TransformPlan(TransformKind kind, int n);

    TransformKind kind() const { return kind_; }
    int size() const { return n_; }
    double normalization() const { return norm_; }

    // Dense matrix of the requested direction (reference path).
    const CMat& matrix(Direction dir) const;

    // Fast apply; equals the dense matrix-vector product to rounding.
    CVec apply(Direction dir, std::span<const cplx> x) const;

    // In-place apply on a contiguous buffer of length size().
    void apply_inplace(Direction dir, cplx* x) const;

private:
    TransformKind kind_;
    int n_;
    double norm_;
    bool pow2_;
    int log2n_ = 0;
    std::shared_ptr<const CMat> fwd_, inv_;        // dense references
    std::shared_ptr<const CVec> twiddle_;          // FFT twiddles (forward sign)
    std::shared_ptr<const std::vector<int>> brev_; // bit-reversal permutation
};

CVec apply_transform(const TransformPlan& plan, Direction dir, std::span<const cplx> x);

}  // namespace ofdmeq
