#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mmimo/linalg.hpp"

namespace mmimo {

// xoshiro256++ stream seeded through SplitMix64. The (master_seed, stream_id)
// pair fully determines the sequence; distinct ids give statistically
// independent streams (the id is folded into the SplitMix64 state with a
// golden-ratio multiplier before the state words are generated).
struct RngStream {
    std::array<uint64_t, 4> s{};
    uint64_t stream_id = 0;
    // Box-Muller cache: both outputs of a pair are consumed in order.
    bool have_spare = false;
    double spare = 0.0;

    uint64_t next_u64();
    // Uniform in [0, 1), 53-bit resolution.
    double next_double();
    // Uniform in (0, 1]; used as the log argument in Box-Muller.
    double next_double_open();
    // Standard normal via Box-Muller, pair cached.
    double next_normal();
    // CN(0,1): (x + iy)/sqrt(2) with x, y consecutive normals.
    cplx next_cnormal();
    // Exponential with given mean (inverse CDF on next_double_open).
    double next_exponential(double mean);
    // Uniform integer in [0, n).
    uint64_t next_below(uint64_t n);
};

RngStream derive_stream(uint64_t master_seed, uint64_t stream_id);

// SplitMix64 finalizer, exposed for seed plumbing elsewhere.
uint64_t mix64(uint64_t x);

std::vector<double> draw_std_normal(RngStream& rng, size_t count);

// J0 to < 1e-7 absolute on |x| <= 50: power series for |x| < 9, Hankel
// asymptotic expansion beyond. Throws on non-finite input.
double bessel_j0(double x);

// Lower-triangular L with L L^H = R. Adds a diagonal jitter of
// 1e-12 * trace(R) / order once if a pivot underflows; throws
// std::runtime_error("not PSD") if a pivot is still negative afterwards.
CMat cholesky_psd(const CMat& R);

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double reg_incomplete_beta(double a, double b, double x);

// ln Gamma via Lanczos (g=7, 9 terms); kept in-house so results do not
// depend on the platform libm.
double lgamma_lanczos(double x);

}  // namespace mmimo
