#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skewlab/map.hpp"

#include <cmath>
#include <random>

using namespace skewlab;

namespace {

DyadicX random_x(std::mt19937_64& rng, unsigned bits = 256) {
    BigUint num = 0;
    for (unsigned w = 0; w < (bits + 63) / 64; ++w) {
        num <<= 64;
        num += rng();
    }
    return DyadicX(std::move(num), bits);
}

// Independent fiber oracle: long-double composition of the translation.
double orbit_y_oracle(const TorusPoint& p, unsigned n, double c) {
    long double y = p.y;
    DyadicX x = p.x;
    for (unsigned j = 0; j < n; ++j) {
        long double d = static_cast<long double>(x.dist_to_half_exact().to_double());
        y += static_cast<long double>(c) / d;
        y -= std::floor(y);
        x.double_inplace();
    }
    return static_cast<double>(y);
}

}  // namespace

TEST_CASE("apply_map on hand-checked points") {
    MapParams mp(0.25);
    TorusPoint a(DyadicX::from_double(0.0, 64), 0.0);
    TorusPoint fa = apply_map(a, mp);
    CHECK(fa.x.is_zero());
    CHECK(fa.y == 0.5);

    TorusPoint b(DyadicX::from_double(0.75, 64), 0.5);
    TorusPoint fb = apply_map(b, mp);
    CHECK(fb.x.is_half());
    CHECK(fb.y == 0.5);

    TorusPoint s(DyadicX::from_double(0.5, 64), 0.3);
    CHECK_THROWS_AS(apply_map(s, mp), SingularInput);
}

TEST_CASE("apply_map_n identity and two-step wrap") {
    MapParams mp(0.25);
    TorusPoint p(DyadicX::from_double(0.0, 64), 0.0);
    TorusPoint q = apply_map_n(p, 0, mp);
    CHECK(q.x == p.x);
    CHECK(q.y == p.y);
    // (0,0) -> (0, 0.5) -> (0, 1.0 mod 1 = 0)
    TorusPoint r = apply_map_n(p, 2, mp);
    CHECK(r.x.is_zero());
    CHECK(r.y == 0.0);
}

TEST_CASE("apply_map_n matches a long-double composition oracle") {
    const double c = M_PI - 3.0;
    MapParams mp(c);
    DyadicX x0 = DyadicX::from_double(0.25, 64).add_mod1(DyadicX(BigUint(1), 10));
    TorusPoint p(x0, 0.7);
    TorusPoint q = apply_map_n(p, 5, mp);
    CHECK(q.x == DyadicX(BigUint(1), 5));  // 1/32, exactly
    double expect = orbit_y_oracle(p, 5, c);
    CHECK(std::abs(q.y - expect) <= 5e-12);
}

TEST_CASE("stepwise and streaming iteration agree bit for bit") {
    // apply_map re-windows the doubled numerator each step; apply_map_n
    // slides a window over the original bits. Both must see the same
    // truncated distances, so the fiber trajectories coincide exactly.
    MapParams mp(0.3);
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        TorusPoint p(random_x(rng), std::ldexp(static_cast<double>(rng() >> 11), -53));
        TorusPoint stepping = p;
        for (unsigned n = 1; n <= 30; ++n) {
            stepping = apply_map(stepping, mp);
            TorusPoint streamed = apply_map_n(p, n, mp);
            REQUIRE(streamed.x == stepping.x);
            REQUIRE(streamed.y == stepping.y);
        }
    }
}

TEST_CASE("precision budget boundary") {
    MapParams mp(0.3);
    std::mt19937_64 rng(607);
    TorusPoint p(random_x(rng, 256), 0.25);
    CHECK_THROWS_AS(apply_map_n(p, 257, mp), PrecisionExhausted);

    // Any dyadic passes through exactly 1/2 one step before its bits run
    // out: an odd numerator keeps its last set bit at position 256, so
    // the orbit dies singular at step 255 — detected exactly. This is
    // why callers need guard bits beyond the intended depth.
    BigUint odd = p.x.numerator();
    if (!boost::multiprecision::bit_test(odd, 0)) odd += 1;
    TorusPoint q(DyadicX(odd, 256), 0.25);
    try {
        apply_map_n(q, 256, mp);
        FAIL("expected SingularOrbit");
    } catch (const SingularOrbit& e) {
        CHECK(e.step == 255);
    }

    // The fixed point x = 0 never meets the singular line and survives
    // its whole budget.
    TorusPoint zero(DyadicX(BigUint(0), 256), 0.25);
    CHECK_NOTHROW(apply_map_n(zero, 256, mp));
}

TEST_CASE("apply_map_n error paths") {
    MapParams mp(0.3);
    TorusPoint p(DyadicX::from_bits("0110"), 0.2);
    CHECK_THROWS_AS(apply_map_n(p, 5, mp), PrecisionExhausted);
    // 0.0110 doubles to 1/2 after two steps.
    try {
        apply_map_n(p, 4, mp);
        FAIL("expected SingularOrbit");
    } catch (const SingularOrbit& e) {
        CHECK(e.step == 2);
    }
}

TEST_CASE("preimage_branch on hand-checked points") {
    MapParams mp(0.25);
    TorusPoint p(DyadicX::from_double(0.0, 64), 0.0);
    TorusPoint z0 = preimage_branch(p, 0, mp);
    CHECK(z0.x.is_zero());
    CHECK(z0.y == 0.5);

    TorusPoint h(DyadicX::from_double(0.5, 64), 0.0);
    TorusPoint z1 = preimage_branch(h, 1, mp);
    CHECK(z1.x.to_double() == 0.75);
    CHECK(z1.y == 0.0);
    TorusPoint back = apply_map(z1, mp);
    CHECK(back.x == h.x);
    CHECK(back.y == h.y);

    CHECK_THROWS_AS(preimage_branch(p, 1, mp), SingularPreimage);
}

TEST_CASE("preimage_word base cases") {
    MapParams mp(0.25);
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        TorusPoint p(random_x(rng), std::ldexp(static_cast<double>(rng() >> 11), -53));
        int b = static_cast<int>(rng() & 1);
        TorusPoint via_word = preimage_word(p, BranchWord::from_value(b, 1), mp);
        TorusPoint via_branch = preimage_branch(p, b, mp);
        CHECK(via_word.x == via_branch.x);
        CHECK(via_word.y == via_branch.y);
    }
    TorusPoint p(DyadicX::from_double(0.0, 64), 0.0);
    TorusPoint z = preimage_word(p, BranchWord::from_string("00"), mp);
    CHECK(z.x.is_zero());
    CHECK(z.y == 0.0);
}

TEST_CASE("preimage_word matches chained branch pulls") {
    MapParams mp(0.25);
    TorusPoint p(DyadicX::from_double(0.5, 64), 0.5);
    BranchWord w = BranchWord::from_string("0110");
    TorusPoint via_word = preimage_word(p, w, mp);
    TorusPoint q = p;
    for (unsigned i = 4; i >= 1; --i) q = preimage_branch(q, w.bit(i), mp);
    CHECK(via_word.x == q.x);
    CHECK(via_word.y == q.y);
    // Round trip recovers the start bit-exactly in x.
    TorusPoint back = apply_map_n(via_word, 4, mp);
    CHECK(back.x == p.x);
    CHECK(std::abs(back.y - p.y) <= 4e-12);
}

TEST_CASE("preimage_word reports the offending suffix index") {
    MapParams mp(0.3);
    TorusPoint zero(DyadicX::from_double(0.0, 64), 0.4);
    try {
        preimage_word(zero, BranchWord::from_string("0100"), mp);
        FAIL("expected SingularPreimage");
    } catch (const SingularPreimage& e) {
        // bits are pulled 4,3,2,1; x stays 0 under the 0-pulls and the
        // bit at position 2 is the first 1 reached.
        CHECK(e.suffix_index == 2);
    }
}

TEST_CASE("round trip property over random words") {
    MapParams mp(0.3);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        TorusPoint p(random_x(rng), std::ldexp(static_cast<double>(rng() >> 11), -53));
        unsigned n = 1 + static_cast<unsigned>(rng() % 32);
        BranchWord w = BranchWord::from_value(rng() & ((1ull << n) - 1), n);
        TorusPoint z = preimage_word(p, w, mp);
        TorusPoint back = apply_map_n(z, n, mp);
        CHECK(back.x == p.x);
        double dy = std::abs(back.y - p.y);
        dy = std::min(dy, 1.0 - dy);
        CHECK(dy <= n * 1e-12);
    }
}

TEST_CASE("preimage_level_set structure") {
    DyadicX zero = DyadicX::from_double(0.0, 16);
    auto s1 = preimage_level_set(zero, 1);
    REQUIRE(s1.size() == 2);
    CHECK(s1[0].is_zero());
    CHECK(s1[1].is_half());

    DyadicX third = DyadicX::from_double(1.0 / 3.0, 24);
    auto s2 = preimage_level_set(third, 2);
    REQUIRE(s2.size() == 4);
    DyadicX quarter = DyadicX::from_bits("01");
    for (std::size_t i = 0; i + 1 < s2.size(); ++i) {
        CHECK(s2[i] < s2[i + 1]);
        CHECK(s2[i + 1].sub_mod1(s2[i]) == quarter);
    }

    CHECK_THROWS_AS(preimage_level_set(zero, 12, 1000), CardinalityOverflow);
}

TEST_CASE("preimage_level_set equidistributes") {
    std::mt19937_64 rng(7);
    DyadicX x = random_x(rng, 64);
    const unsigned n = 16;
    auto s = preimage_level_set(x, n);
    DyadicX half = DyadicX::from_bits("1");
    std::size_t count = 0;
    for (const auto& p : s)
        if (p < half) ++count;
    double frac = static_cast<double>(count) / std::ldexp(1.0, n);
    CHECK(std::abs(frac - 0.5) <= std::ldexp(1.0, -static_cast<int>(n)));
}

TEST_CASE("jacobian entries and eigenstructure") {
    MapParams mp(0.25);
    Jacobian j0 = jacobian_at(TorusPoint(DyadicX::from_double(0.0, 64), 0.1), mp);
    CHECK(j0.m10 == 1.0);  // 0.25 / 0.25
    Jacobian j1 = jacobian_at(TorusPoint(DyadicX::from_double(0.75, 64), 0.1), mp);
    CHECK(j1.m10 == -4.0);  // -0.25 / 0.0625
    CHECK_THROWS_AS(jacobian_at(TorusPoint(DyadicX::from_double(0.5, 64), 0.1), mp), SingularInput);

    // (0,1) is fixed and the characteristic polynomial is (t-2)(t-1).
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10000; ++trial) {
        Jacobian J = jacobian_at(TorusPoint(random_x(rng, 64), 0.0), MapParams(0.7));
        CHECK(J.m01 * 1.0 == 0.0);
        CHECK(J.m11 * 1.0 == 1.0);
        CHECK(J.trace() == 3.0);
        CHECK(J.det() == 2.0);
    }
}

TEST_CASE("horizontal separation doubles exactly, vertical stays isometric") {
    MapParams mp(0.3);
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
        DyadicX x = random_x(rng);
        DyadicX dx(BigUint(1 + (rng() % 1000)), 64);  // offset below 2^-54+
        DyadicX x2 = x.add_mod1(dx);
        DyadicX a = x, b = x2;
        DyadicX gap = a.circle_distance(b);
        for (unsigned n = 1; n <= 20; ++n) {
            a.double_inplace();
            b.double_inplace();
            CHECK(a.circle_distance(b) == gap.scaled_pow2(n));
        }
    }
    // Same base coordinate: fiber distance is preserved.
    DyadicX x = random_x(rng);
    TorusPoint p(x, 0.25), q(x, 0.6875);
    double gap0 = std::abs(p.y - q.y);
    for (unsigned n : {1u, 5u, 17u}) {
        TorusPoint pn = apply_map_n(p, n, mp);
        TorusPoint qn = apply_map_n(q, n, mp);
        double g = std::abs(pn.y - qn.y);
        g = std::min(g, 1.0 - g);
        double g0 = std::min(gap0, 1.0 - gap0);
        CHECK(std::abs(g - g0) <= n * 1e-12);
    }
}
