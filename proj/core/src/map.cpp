#include "skewlab/map.hpp"

#include <cmath>

namespace skewlab {

TorusPoint::TorusPoint(DyadicX x_, double y_) : x(std::move(x_)), y(mod1(y_)) {}

double mod1(double y) {
    double r = y - std::floor(y);
    if (r >= 1.0) r = 0.0;  // rounding can push y - floor(y) up to 1.0
    return r;
}

BranchWord::BranchWord(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_)
        if (b > 1) throw std::invalid_argument("BranchWord: bits must be 0 or 1");
}

BranchWord BranchWord::from_string(std::string_view s) {
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("BranchWord: expected 0/1 string");
        bits.push_back(ch == '1' ? 1 : 0);
    }
    return BranchWord(std::move(bits));
}

BranchWord BranchWord::from_value(std::uint64_t value, unsigned length) {
    if (length > 64) throw std::invalid_argument("BranchWord::from_value: length > 64");
    std::vector<std::uint8_t> bits(length);
    for (unsigned i = 0; i < length; ++i)
        bits[i] = static_cast<std::uint8_t>((value >> (length - 1 - i)) & 1u);
    return BranchWord(std::move(bits));
}

BranchWord BranchWord::prepend(int b) const {
    std::vector<std::uint8_t> bits;
    bits.reserve(bits_.size() + 1);
    bits.push_back(static_cast<std::uint8_t>(b));
    bits.insert(bits.end(), bits_.begin(), bits_.end());
    return BranchWord(std::move(bits));
}

BranchWord BranchWord::append(int b) const {
    std::vector<std::uint8_t> bits = bits_;
    bits.push_back(static_cast<std::uint8_t>(b));
    return BranchWord(std::move(bits));
}

BigUint BranchWord::value() const {
    BigUint v = 0;
    for (auto b : bits_) {
        v <<= 1;
        v += b;
    }
    return v;
}

DyadicX BranchWord::cell_lo() const {
    if (bits_.empty()) return DyadicX(BigUint(0), 1);
    return DyadicX(value(), length());
}

std::string BranchWord::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) s[i] = '1';
    return s;
}

bool BranchWord::all_bits_equal() const {
    for (auto b : bits_)
        if (b != bits_.front()) return false;
    return true;
}

TorusPoint apply_map(const TorusPoint& p, const MapParams& params) {
    if (p.x.is_half()) throw SingularInput("apply_map: x = 1/2");
    double t = params.c / p.x.dist_to_half();
    return TorusPoint(p.x.doubled(), mod1(p.y + t));
}

TorusPoint apply_map_n(const TorusPoint& p, unsigned n, const MapParams& params) {
    if (n > p.x.precision_bits())
        throw PrecisionExhausted("apply_map_n: " + std::to_string(n) + " steps exceed the " +
                                 std::to_string(p.x.precision_bits()) + "-bit budget");
    BitView bv(p.x);
    double y = p.y;
    for (unsigned j = 0; j < n; ++j) {
        if (bv.is_half_at(j)) throw SingularOrbit(j);
        y = mod1(y + params.c / bv.dist_to_half_at(j));
    }
    DyadicX x = p.x;
    for (unsigned j = 0; j < n; ++j) x.double_inplace();
    TorusPoint out;
    out.x = std::move(x);
    out.y = y;
    return out;
}

TorusPoint preimage_branch(const TorusPoint& p, int bit, const MapParams& params) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("preimage_branch: bit must be 0 or 1");
    if (bit == 1 && p.x.is_zero()) throw SingularPreimage(1);
    DyadicX xb = p.x.halved_with_prefix(bit);
    // Undo exactly the translation apply_map would add at the new point.
    double t = params.c / xb.dist_to_half();
    return TorusPoint(std::move(xb), mod1(p.y - t));
}

TorusPoint preimage_word(const TorusPoint& p, const BranchWord& b, const MapParams& params) {
    TorusPoint q = p;
    for (unsigned i = b.length(); i >= 1; --i) {
        try {
            q = preimage_branch(q, b.bit(i), params);
        } catch (const SingularPreimage&) {
            throw SingularPreimage(i);
        }
    }
    return q;
}

std::vector<DyadicX> preimage_level_set(const DyadicX& x, unsigned n, std::size_t cap) {
    if (n == 0) return {x};
    if (n >= 63 || (std::size_t{1} << n) > cap)
        throw CardinalityOverflow("preimage_level_set: 2^" + std::to_string(n) +
                                  " points exceed the cap");
    std::size_t count = std::size_t{1} << n;
    std::vector<DyadicX> out;
    out.reserve(count);
    unsigned bits = x.precision_bits() + n;
    for (std::size_t j = 0; j < count; ++j) {
        BigUint num = BigUint(j);
        num <<= x.precision_bits();
        num += x.numerator();
        out.emplace_back(std::move(num), bits);
    }
    return out;
}

Jacobian jacobian_at(const TorusPoint& p, const MapParams& params) {
    if (p.x.is_half()) throw SingularInput("jacobian_at: x = 1/2");
    double d = p.x.dist_to_half();
    double mag = params.c / (d * d);
    DyadicX half = DyadicX::from_bits("1");
    double sign = (p.x < half) ? 1.0 : -1.0;
    return Jacobian{2.0, 0.0, sign * mag, 1.0};
}

}  // namespace skewlab
