#include "skewlab/rng.hpp"

#include <stdexcept>

namespace skewlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : eng_(splitmix64(splitmix64(seed) ^ splitmix64(stream * 0xA24BAED4963EE407ull + 1))) {}

BigUint RngStream::uniform_below(const BigUint& bound) {
    if (bound <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
    unsigned words = (bits + 63) / 64;
    for (;;) {
        BigUint r = 0;
        for (unsigned w = 0; w < words; ++w) {
            r <<= 64;
            r += eng_();
        }
        r >>= (words * 64 - bits);
        if (r < bound) return r;
    }
}

DyadicX RngStream::uniform_dyadic(unsigned bits) {
    BigUint num = 0;
    unsigned words = (bits + 63) / 64;
    for (unsigned w = 0; w < words; ++w) {
        num <<= 64;
        num += eng_();
    }
    num >>= (words * 64 - bits);
    return DyadicX(std::move(num), bits);
}

DyadicX RngStream::uniform_dyadic_in(double lo, double hi, unsigned bits) {
    return DyadicSampler(lo, hi, bits).draw(*this);
}

DyadicSampler::DyadicSampler(double lo, double hi, unsigned bits) : bits_(bits) {
    if (!(lo < hi)) throw std::invalid_argument("DyadicSampler: empty interval");
    base_ = DyadicX::from_double(lo, bits).numerator();
    BigUint b = DyadicX::from_double(hi, bits).numerator();
    if (hi >= 1.0) {
        b = 1;
        b <<= bits;
    }
    range_ = b - base_;
    if (range_ <= 0) throw std::invalid_argument("DyadicSampler: interval below resolution");
}

DyadicX DyadicSampler::draw(RngStream& rng) const {
    return DyadicX(base_ + rng.uniform_below(range_), bits_);
}

}  // namespace skewlab
