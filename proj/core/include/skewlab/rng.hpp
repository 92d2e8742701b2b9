#pragma once

#include "skewlab/dyadic.hpp"
#include "skewlab/rect.hpp"

#include <cstdint>
#include <random>

namespace skewlab {

// Deterministic RNG stream addressed by (seed, stream index). Worker w of
// a sampling job draws from stream w, so results are reproducible for a
// fixed worker count and the merge order is fixed by the index.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return eng_(); }
    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, bound), rejection-free bias via wide masking.
    BigUint uniform_below(const BigUint& bound);
    // Uniform dyadic with `bits` fraction bits.
    DyadicX uniform_dyadic(unsigned bits = kDefaultPrecisionBits);
    // Uniform over the dyadics of `bits` fraction bits inside [lo, hi).
    DyadicX uniform_dyadic_in(double lo, double hi, unsigned bits = kDefaultPrecisionBits);

private:
    std::mt19937_64 eng_;
};

// Repeated uniform draws from one dyadic interval; quantizes the interval
// bounds once instead of per draw.
class DyadicSampler {
public:
    DyadicSampler(double lo, double hi, unsigned bits = kDefaultPrecisionBits);
    DyadicX draw(RngStream& rng) const;

private:
    BigUint base_, range_;
    unsigned bits_;
};

}  // namespace skewlab
