// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>

#include "ofdmeq/cmat.hpp"

namespace ofdmeq {

// Truncated binomial series for (I + beta)^rho. `terms` counts series terms
// including the identity term: terms = 1 gives I, terms = 3 gives
// I + rho*beta + rho(rho-1)/2 beta^2. Empty terms = converge until the next
// term's max-norm drops below 1e-12 (capped at 200 terms).
struct SeriesSpec {
    double rho = 0.5;
    std::optional<int> terms;  // nullopt = iterate to convergence
};

CMat dense_mul(const CMat& a, const CMat& b);
CMat dense_hermitian(const CMat& a);
CMat dense_add(const CMat& a, const CMat& b);
CMat dense_sub(const CMat& a, const CMat& b);
CVec dense_matvec(const CMat& a, std::span<const cplx> x);
// y = A^H x without forming A^H
CVec dense_hermitian_matvec(const CMat& a, std::span<const cplx> x);

// LU factorization with partial pivoting. Relative pivot threshold:
// a pivot below 1e-12 * max|A| raises SingularityError.
class LuFactor {
public:
    explicit LuFactor(CMat a, const char* label = "matrix");
    CVec solve(std::span<const cplx> b) const;
    CMat solve(const CMat& b) const;
    CMat inverse() const;
    int size() const { return lu_.rows(); }

private:
    CMat lu_;
    std::vector<int> perm_;
};

CMat dense_invert(const CMat& a);

CMat fractional_power_series(const CMat& beta, const SeriesSpec& spec);

// Eq-style 2x2 block inversion at the given split:
//   [A1 A2; A3 A4]^-1 = [Phi, -Phi A2 A4^-1; -A4^-1 A3 Phi, A4^-1 + A4^-1 A3 Phi A2 A4^-1]
// with Phi = (A1 - A2 A4^-1 A3)^-1. Inner inverses are dense LU;
// SingularityError names the failing block.
CMat block_invert_2x2(const CMat& a, int split);

// Recursive driver: halve until blocks reach min_block, then dense LU.
// Requires size = min_block * 2^s for some s >= 0.
CMat block_invert_recursive(const CMat& a, int min_block);

}  // namespace ofdmeq
