#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace skewlab {

using BigUint = boost::multiprecision::cpp_int;

inline constexpr unsigned kDefaultPrecisionBits = 256;

// An x-coordinate on the circle stored as an exact binary fraction
// numerator / 2^bits, reduced mod 1 (0 <= numerator < 2^bits).
//
// The base dynamics x -> 2x mod 1 shifts one bit out per step, so a
// floating representation silently degrades while this one stays exact:
// doubling, halving with a prefix bit, and the equality test against 1/2
// are all decidable bit operations. The precision budget `bits` bounds
// how many forward steps carry information.
class DyadicX {
public:
    DyadicX() : num_(0), bits_(1) {}
    DyadicX(BigUint numerator, unsigned bits);

    // Truncates x (reduced mod 1) to `bits` fraction bits.
    static DyadicX from_double(double x, unsigned bits = kDefaultPrecisionBits);
    // Parses a fraction written as its bit string, e.g. "0110" -> 0.0110.
    static DyadicX from_bits(std::string_view bits01);

    unsigned precision_bits() const { return bits_; }
    const BigUint& numerator() const { return num_; }

    // Nearest-below double using the leading 64 fraction bits.
    double to_double() const;
    std::string to_bit_string() const;

    bool is_zero() const { return num_ == 0; }
    bool is_half() const;
    // 1-indexed digit of the binary expansion; digits past the precision are 0.
    int bit(unsigned i) const;

    // 2x mod 1, exact, same precision.
    DyadicX doubled() const;
    void double_inplace();
    // (b + x)/2, exact, precision grows by one bit.
    DyadicX halved_with_prefix(int b) const;

    DyadicX add_mod1(const DyadicX& o) const;
    DyadicX sub_mod1(const DyadicX& o) const;
    // min(|x-y|, 1-|x-y|) as an exact dyadic in [0, 1/2].
    DyadicX circle_distance(const DyadicX& o) const;
    // |x - 1/2| as an exact dyadic in [0, 1/2].
    DyadicX dist_to_half_exact() const;
    // x * 2^e for e >= 0; requires the scaled value to stay below 1.
    DyadicX scaled_pow2(unsigned e) const;

    // |x - 1/2| evaluated through a truncated bit window (see BitView).
    double dist_to_half() const;

    // Exact value comparison across mixed precisions.
    int compare(const DyadicX& o) const;
    bool operator==(const DyadicX& o) const { return compare(o) == 0; }
    bool operator!=(const DyadicX& o) const { return compare(o) != 0; }
    bool operator<(const DyadicX& o) const { return compare(o) < 0; }
    bool operator<=(const DyadicX& o) const { return compare(o) <= 0; }
    bool operator>(const DyadicX& o) const { return compare(o) > 0; }
    bool operator>=(const DyadicX& o) const { return compare(o) >= 0; }

private:
    BigUint num_;
    unsigned bits_;
};

// Read-only snapshot of a DyadicX as 64-bit words, MSB-aligned at the
// binary point. Lets forward-orbit kernels read the j-th iterate's
// coordinate in O(1) without touching the big integer again: after j
// doublings the fraction bits of x are just the original bits shifted
// left by j.
class BitView {
public:
    explicit BitView(const DyadicX& x);

    unsigned precision_bits() const { return bits_; }

    // Fraction bits offset+1 .. offset+64 as one word (zero padded).
    std::uint64_t window64(unsigned offset) const;

    // Exact test: does the orbit coordinate at `offset` equal 1/2?
    bool is_half_at(unsigned offset) const;

    // |x_offset - 1/2| where x_offset = 2^offset * x mod 1.
    //
    // Evaluated as |window64 - 2^63| * 2^-64, extending the window only in
    // the vanishing-window case. The truncation (<= 2^-64 absolute) is the
    // canonical rounding used by every map evaluation in the lab, so
    // forward and inverse pulls reproduce each other's fiber translation
    // bit for bit.
    double dist_to_half_at(unsigned offset) const;

    // Orbit coordinate at `offset` truncated to a double in [0, 1).
    double value_at(unsigned offset) const { return window_value(window64(offset)); }

    static double window_value(std::uint64_t w);

private:
    std::uint64_t word(unsigned idx) const { return idx < words_.size() ? words_[idx] : 0; }
    bool zero_from(unsigned bit_offset) const;

    std::vector<std::uint64_t> words_;
    unsigned bits_;
};

}  // namespace skewlab
