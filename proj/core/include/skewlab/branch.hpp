#pragma once

#include "skewlab/map.hpp"
#include "skewlab/rect.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace skewlab {

// A horizontal segment [x_lo, x_hi] x {y} with exact dyadic endpoints.
struct HSegment {
    DyadicX x_lo, x_hi;
    double y;

    HSegment(DyadicX lo, DyadicX hi, double y_);
    static HSegment from_doubles(double lo, double hi, double y,
                                 unsigned bits = kDefaultPrecisionBits);

    DyadicX width_exact() const { return x_hi.sub_mod1(x_lo); }
    double width() const { return width_exact().to_double(); }
};

// One pole of the lifted preimage curve: at 0.b1..b_{j-1} + 2^-j, with the
// sign 2*b_j - 1 of the term it belongs to.
struct Asymptote {
    DyadicX position;
    int sign;
    unsigned index;
};

struct AsymptoteSet {
    std::vector<Asymptote> all;       // one per digit, index-ordered
    std::vector<Asymptote> in_domain; // at most two, on the cell boundary
    std::optional<DyadicX> max_positive;
    std::optional<DyadicX> min_negative;
};

// Poles of the lift of y_b(x_b). At most two touch the word's own dyadic
// cell, every positive-sign pole lies left of every negative-sign pole,
// and the closest opposite-sign pair is exactly 2^-N apart.
AsymptoteSet asymptotes(const BranchWord& word);

// The graph of the |b|-fold inverse pull of a horizontal line through the
// anchor, as a function of the pulled coordinate x_b over the cell
// [0.b1..bN, 0.b1..bN + 2^-N]. All evaluation happens in the lift; reduce
// mod 1 only for presentation.
class BranchCurve {
public:
    BranchCurve(BranchWord word, TorusPoint anchor, MapParams params);

    const BranchWord& word() const { return word_; }
    const TorusPoint& anchor() const { return anchor_; }
    const MapParams& params() const { return params_; }

    double domain_lo() const { return domain_lo_; }
    double domain_hi() const { return domain_hi_; }
    DyadicX domain_lo_exact() const;

    // anchor.y - sum_j c(2b_j - 1) / (2^(j-1) (x - x_j)), in the lift.
    double eval_lift(double x_b) const;
    double eval_mod1(double x_b) const;
    // Derivative of the lift: sum_j c(2b_j - 1) / (2^(j-1) (x - x_j)^2).
    double derivative_lift(double x_b) const;

    // Limit of the non-singular part of the lift at the last digit's pole
    // (the in-cell pole the curve descends into). The curve behaves like
    // this level plus the pole term alone once it dives; wrap labels and
    // width estimates are anchored here.
    double tail_limit_level() const;

private:
    void check_domain(double x_b) const;

    BranchWord word_;
    TorusPoint anchor_;
    MapParams params_;
    std::vector<double> poles_;   // asymptote positions (exact doubles)
    std::vector<double> coefs_;   // c (2 b_j - 1) 2^(1-j)
    double domain_lo_, domain_hi_;
};

// Location of the unique zero of the curve derivative, when the word
// mixes both digits. The zero is bracketed by the closest opposite-sign
// asymptote pair, which is the closure of the word's own dyadic cell.
struct CriticalPointReport {
    bool exists;
    double location;
    DyadicX bracket_lo;
    DyadicX bracket_hi;   // bracket_lo + 2^-N, stored unreduced via flag below
    bool bracket_hi_is_one;
};

CriticalPointReport critical_point(const BranchCurve& curve);

// Stage lower bound for the length of an n-fold pull of a width-dx
// segment: 2c dx, 3c dx, then (3 + (1 - 2^-(n-2))) c dx. The chain
// approaches 4c dx from below, so the reported threshold_length is the
// first n at which the bound is within 2^-6 of that limit.
//
// The bound holds away from the curve's derivative zero: a segment whose
// pull covers the flat neighbourhood of the critical point comes out
// nearly horizontal and can undershoot every stage. Callers quantifying
// expansion should gate on pull_avoids_critical_strip.
double chain_lower_bound(unsigned n, double c, double dx);
unsigned expansion_threshold_length();

// True when the pulled image of `seg` under `word` stays at least
// `margin_cells` cell-widths away from the curve's critical point (always
// true for uniform words, which have none). Failures of the stage bounds
// concentrate within ~0.013 cell-widths of the critical point; the
// default margin keeps a 5x safety factor.
bool pull_avoids_critical_strip(const HSegment& seg, const BranchWord& word,
                                const MapParams& params, double margin_cells = 0.0625);

struct ExpansionReport {
    unsigned word_length;
    double measured_length;
    double lower_bound;
    unsigned threshold_length;
};

// Arc length of Z_word(seg) by adaptive quadrature of sqrt(1 + y'^2),
// split at the critical point when the strip is crossed.
ExpansionReport preimage_segment_length(const HSegment& seg, const BranchWord& word,
                                        const MapParams& params, double abs_tol = 1e-9);

struct GrowthReport {
    double measured_length;
    double envelope;       // ((4c+1) delta / (eps^2 - delta^2))^|word|
    bool within_envelope;
};

// Measures the pulled length of a segment whose pull history stays outside
// the strip [1/2 - eps/2, 1/2 + eps/2], and compares it against the
// strip-avoiding growth envelope. Requires width < delta < eps.
// Throws StripViolation (with the pull step) if the avoidance fails.
GrowthReport bounded_growth_check(const HSegment& seg, const BranchWord& word, double eps,
                                  double delta, const MapParams& params);

// A vertex of a monotone arc given in lift coordinates (x may leave [0,1)).
struct LiftPoint {
    double x, y;
};

// Total variation of the fiber projection of f(arc) in the lift. Returns
// +infinity when the arc's horizontal extent contains a half-integer.
// Throws NonMonotoneArc if either coordinate fails to be monotone.
double vertical_projection_span(const std::vector<LiftPoint>& arc, const MapParams& params);

using StripWidthProfile = std::vector<std::pair<unsigned, double>>;

// Horizontal distance between the pulled top and bottom sides of `rect`,
// measured at mid-height of each vertical wrap. Wrap n is the n-th whole
// unit band of the lift below the bottom curve's pole-limit level (the
// arc sits many units below the fiber origin for long words, so labels
// anchored at 0 would start in the hundreds); both positions are solved
// on the exact curve by bisection toward the in-cell asymptote.
StripWidthProfile strip_width_profile(const Rectangle& rect, const BranchWord& word,
                                      const MapParams& params, unsigned n_lo, unsigned n_hi);

struct PowerLawFit {
    double exponent;   // p in width ~ K n^-p
    double amplitude;  // K
    double r_squared;
    unsigned points;
};

PowerLawFit fit_power_law(const StripWidthProfile& profile, unsigned n_from, unsigned n_to);

}  // namespace skewlab
