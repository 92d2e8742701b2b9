#pragma once

#include "skewlab/dyadic.hpp"
#include "skewlab/errors.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace skewlab {

// Parameters of the skew product f(x, y) = (2x mod 1, y + c/|x - 1/2| mod 1).
// c is construction-time state; every operation takes the params explicitly.
struct MapParams {
    double c;
    explicit MapParams(double c_) : c(c_) {
        if (!(c > 0.0)) throw std::invalid_argument("MapParams: c must be positive");
    }
    // Measure-theoretic mixing guarantees need c > 1/4.
    bool mixing_regime() const { return c > 0.25; }
};

// A point of the 2-torus: exact dyadic base coordinate, floating fiber.
struct TorusPoint {
    DyadicX x;
    double y;

    TorusPoint() : x(), y(0.0) {}
    TorusPoint(DyadicX x_, double y_);

    bool is_singular() const { return x.is_half(); }
};

// Reduce to [0, 1) with floor semantics; an exact 1.0 wraps to 0.0.
double mod1(double y);

// A finite binary word b1 b2 ... bn selecting one composition of inverse
// branches (the empty word is the identity branch).
class BranchWord {
public:
    BranchWord() = default;
    explicit BranchWord(std::vector<std::uint8_t> bits);
    static BranchWord from_string(std::string_view s);  // e.g. "0110"
    // Word of the given length spelling `value` in binary, MSB first.
    static BranchWord from_value(std::uint64_t value, unsigned length);

    unsigned length() const { return static_cast<unsigned>(bits_.size()); }
    bool empty() const { return bits_.empty(); }
    int bit(unsigned i) const { return bits_.at(i - 1); }  // 1-indexed
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    BranchWord prepend(int b) const;
    BranchWord append(int b) const;

    // The word read as an integer (b1 most significant).
    BigUint value() const;
    // Left endpoint 0.b1...bn of the word's dyadic cell.
    DyadicX cell_lo() const;

    std::string to_string() const;
    bool all_bits_equal() const;

private:
    std::vector<std::uint8_t> bits_;
};

// Derivative of f at a point; depends only on x. Eigenvalues are 2 and 1,
// the eigenvector of 1 is vertical.
struct Jacobian {
    double m00, m01, m10, m11;
    double trace() const { return m00 + m11; }
    double det() const { return m00 * m11 - m01 * m10; }
};

// One application of f. Throws SingularInput on x = 1/2 (exact test).
TorusPoint apply_map(const TorusPoint& p, const MapParams& params);

// n-fold composition; the base coordinate stays exact, the fiber
// accumulates one floating translation error per step.
// Throws PrecisionExhausted when the dyadic budget cannot cover n steps,
// SingularOrbit when an intermediate iterate lands on x = 1/2.
TorusPoint apply_map_n(const TorusPoint& p, unsigned n, const MapParams& params);

// The inverse branch selected by one bit:
//   bit 0: (x/2,       y - 2c/(1-x))
//   bit 1: ((1+x)/2,   y - 2c/x)
// Throws SingularPreimage when bit = 1 and x = 0.
TorusPoint preimage_branch(const TorusPoint& p, int bit, const MapParams& params);

// The inverse-branch composition Z_b: bits are consumed last-to-first so
// that applying f |b| times recovers p. SingularPreimage carries the
// 1-indexed position of the offending suffix bit.
TorusPoint preimage_word(const TorusPoint& p, const BranchWord& b, const MapParams& params);

// All 2^n base preimages of x under doubling: exactly (x + j)/2^n for
// j = 0..2^n-1, ascending. Throws CardinalityOverflow past the cap.
std::vector<DyadicX> preimage_level_set(const DyadicX& x, unsigned n,
                                        std::size_t cap = std::size_t{1} << 22);

// [[2, 0], [s*c/(x-1/2)^2, 1]] with s = +1 left of the singular line and
// s = -1 right of it.
Jacobian jacobian_at(const TorusPoint& p, const MapParams& params);

}  // namespace skewlab
