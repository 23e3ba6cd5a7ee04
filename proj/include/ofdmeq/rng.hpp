// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace ofdmeq {

// Counter-based deterministic RNG. Every consumer derives an independent
// stream from (master_seed, trial, tags...) so trials can run in any order,
// on any thread, and still produce identical draws on every platform.
// splitmix64 core; Box-Muller for gaussians (libstdc++ distributions are
// implementation-defined, which would break cross-compiler reproducibility).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds
        next_u64();
        next_u64();
    }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    template <typename... Rest>
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b, Rest... rest) {
        return mix(mix(a, b), static_cast<std::uint64_t>(rest)...);
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform on [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform on [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint32_t bit() { return static_cast<std::uint32_t>(next_u64() >> 63); }

    // standard normal, Box-Muller (uses both outputs)
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // CN(0, 1): complex gaussian with unit total variance
    std::complex<double> cgaussian() {
        const double s = 0.70710678118654752440;
        return {s * gaussian(), s * gaussian()};
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace ofdmeq
