#include "skewlab/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace skewlab {

namespace {

BigUint pow2(unsigned e) {
    BigUint r = 1;
    r <<= e;
    return r;
}

}  // namespace

DyadicX::DyadicX(BigUint numerator, unsigned bits) : num_(std::move(numerator)), bits_(bits) {
    if (bits_ == 0) throw std::invalid_argument("DyadicX: precision must be at least one bit");
    if (num_ < 0) throw std::invalid_argument("DyadicX: numerator must be non-negative");
    BigUint mask = pow2(bits_) - 1;
    num_ &= mask;
}

DyadicX DyadicX::from_double(double x, unsigned bits) {
    if (!std::isfinite(x)) throw std::invalid_argument("DyadicX: non-finite input");
    x -= std::floor(x);
    if (x >= 1.0) x = 0.0;
    BigUint num = 0;
    unsigned produced = 0;
    double r = x;
    while (produced < bits) {
        unsigned chunk = std::min(32u, bits - produced);
        r = std::ldexp(r, static_cast<int>(chunk));
        double ip = std::floor(r);
        r -= ip;
        num <<= chunk;
        num += static_cast<std::uint32_t>(ip);
        produced += chunk;
    }
    return DyadicX(std::move(num), bits);
}

DyadicX DyadicX::from_bits(std::string_view bits01) {
    if (bits01.empty()) throw std::invalid_argument("DyadicX: empty bit string");
    BigUint num = 0;
    for (char ch : bits01) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("DyadicX: bit string must be 0/1");
        num <<= 1;
        num += (ch == '1') ? 1 : 0;
    }
    return DyadicX(std::move(num), static_cast<unsigned>(bits01.size()));
}

double DyadicX::to_double() const {
    return BitView(*this).value_at(0);
}

std::string DyadicX::to_bit_string() const {
    std::string s(bits_, '0');
    for (unsigned i = 1; i <= bits_; ++i)
        if (bit(i)) s[i - 1] = '1';
    return s;
}

bool DyadicX::is_half() const {
    if (bits_ == 1) return num_ == 1;
    return num_ == pow2(bits_ - 1);
}

int DyadicX::bit(unsigned i) const {
    if (i == 0 || i > bits_) return 0;
    return boost::multiprecision::bit_test(num_, bits_ - i) ? 1 : 0;
}

DyadicX DyadicX::doubled() const {
    DyadicX r = *this;
    r.double_inplace();
    return r;
}

void DyadicX::double_inplace() {
    num_ <<= 1;
    if (boost::multiprecision::bit_test(num_, bits_)) boost::multiprecision::bit_unset(num_, bits_);
}

DyadicX DyadicX::halved_with_prefix(int b) const {
    if (b != 0 && b != 1) throw std::invalid_argument("DyadicX: prefix bit must be 0 or 1");
    BigUint num = num_;
    if (b) num += pow2(bits_);
    return DyadicX(std::move(num), bits_ + 1);
}

DyadicX DyadicX::add_mod1(const DyadicX& o) const {
    unsigned k = std::max(bits_, o.bits_);
    BigUint a = num_ << (k - bits_);
    BigUint b = o.num_ << (k - o.bits_);
    return DyadicX(a + b, k);
}

DyadicX DyadicX::sub_mod1(const DyadicX& o) const {
    unsigned k = std::max(bits_, o.bits_);
    BigUint a = num_ << (k - bits_);
    BigUint b = o.num_ << (k - o.bits_);
    a += pow2(k);
    a -= b;
    return DyadicX(std::move(a), k);
}

DyadicX DyadicX::circle_distance(const DyadicX& o) const {
    DyadicX d = sub_mod1(o);
    BigUint half = pow2(d.bits_ - 1);
    if (d.num_ <= half) return d;
    BigUint n = pow2(d.bits_);
    n -= d.num_;
    return DyadicX(std::move(n), d.bits_);
}

DyadicX DyadicX::dist_to_half_exact() const {
    BigUint half = pow2(bits_ - 1);
    BigUint d = (num_ >= half) ? BigUint(num_ - half) : BigUint(half - num_);
    return DyadicX(std::move(d), bits_);
}

DyadicX DyadicX::scaled_pow2(unsigned e) const {
    BigUint n = num_ << e;
    if (n >= pow2(bits_))
        throw std::domain_error("DyadicX::scaled_pow2: scaled value reaches 1");
    return DyadicX(std::move(n), bits_);
}

double DyadicX::dist_to_half() const {
    return BitView(*this).dist_to_half_at(0);
}

int DyadicX::compare(const DyadicX& o) const {
    unsigned k = std::max(bits_, o.bits_);
    BigUint a = num_ << (k - bits_);
    BigUint b = o.num_ << (k - o.bits_);
    return a.compare(b);
}

// --- BitView ---------------------------------------------------------------

BitView::BitView(const DyadicX& x) : bits_(x.precision_bits()) {
    unsigned nwords = (bits_ + 63) / 64;
    words_.resize(nwords, 0);
    // Word w holds fraction bits 64w+1 .. 64w+64, MSB first.
    const BigUint& num = x.numerator();
    for (unsigned w = 0; w < nwords; ++w) {
        int shift = static_cast<int>(bits_) - 64 * static_cast<int>(w + 1);
        BigUint piece = (shift >= 0) ? BigUint(num >> shift) : BigUint(num << -shift);
        piece &= BigUint(~std::uint64_t{0});
        words_[w] = piece.convert_to<std::uint64_t>();
    }
}

std::uint64_t BitView::window64(unsigned offset) const {
    unsigned q = offset / 64;
    unsigned r = offset % 64;
    if (r == 0) return word(q);
    return (word(q) << r) | (word(q + 1) >> (64 - r));
}

bool BitView::zero_from(unsigned bit_offset) const {
    if (bit_offset >= bits_) return true;
    unsigned q = bit_offset / 64;
    unsigned r = bit_offset % 64;
    std::uint64_t first = word(q) << r;  // discard the bits before the offset
    if (first != 0) return false;
    for (unsigned w = q + 1; w < words_.size(); ++w)
        if (words_[w] != 0) return false;
    return true;
}

bool BitView::is_half_at(unsigned offset) const {
    if (offset >= bits_) return false;  // coordinate is exactly 0 from here on
    return window64(offset) == (std::uint64_t{1} << 63) && zero_from(offset + 64);
}

double BitView::window_value(std::uint64_t w) {
    return std::ldexp(static_cast<double>(w), -64);
}

double BitView::dist_to_half_at(unsigned offset) const {
    constexpr std::uint64_t kHalf = std::uint64_t{1} << 63;
    std::uint64_t w = window64(offset);
    std::uint64_t d = (w >= kHalf) ? (w - kHalf) : (kHalf - w);
    if (d != 0) return window_value(d);
    // Window indistinguishable from 1/2: the coordinate sits above 1/2 by
    // whatever tail bits remain. Widen until a set bit appears. The caller
    // is expected to have ruled out the exact x = 1/2 case.
    double scale = std::ldexp(1.0, -64);
    for (unsigned o = offset + 64; o < bits_; o += 64) {
        std::uint64_t tail = window64(o);
        scale = std::ldexp(scale, -64);
        if (tail != 0) return static_cast<double>(tail) * scale;
    }
    return 0.0;
}

}  // namespace skewlab
