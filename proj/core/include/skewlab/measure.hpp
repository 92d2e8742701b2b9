#pragma once

#include "skewlab/map.hpp"
#include "skewlab/rect.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace skewlab {

// Exact and sampled area of one inverse-branch region of a rectangle.
// The analytic value is measure/2: each vertical fiber over the halved
// x-interval carries the same fiber length, the translation being an
// isometry mod 1. The sampled value integrates the broken-hyperbola
// membership test directly, as an independent cross-check.
struct RegionAreaReport {
    double analytic;
    double mc_estimate;
    double mc_stderr;
    std::uint64_t samples;
};

RegionAreaReport preimage_region_area(const Rectangle& rect, int bit, const MapParams& params,
                                      std::uint64_t samples, std::uint64_t seed);

struct InvarianceEntry {
    Rectangle rect;
    double residual;      // |area(A0) + area(A1) - m(A)|
    double mc_fraction;   // fraction of uniform points with f(p) in rect
    double mc_stderr;
    bool within_3sigma;
};

struct InvarianceReport {
    std::vector<InvarianceEntry> entries;
    std::uint64_t samples_per_rect;
    std::uint64_t resampled;
    std::uint64_t seed;
    unsigned workers;
};

// Lebesgue invariance check: exact two-branch area identity per rectangle
// plus a push-forward hit-fraction test. Singular samples are redrawn and
// counted.
InvarianceReport verify_invariance(const std::vector<Rectangle>& rects, const MapParams& params,
                                   std::uint64_t samples_per_rect, std::uint64_t seed,
                                   unsigned workers = 1);

struct CorrelationEntry {
    unsigned n;
    double estimate;   // of m(f^-n A  intersect  B)
    double std_error;
    std::uint64_t samples;
};

struct CorrelationSeries {
    double c;
    Rectangle A, B;
    std::vector<CorrelationEntry> entries;
    std::uint64_t samples;
    std::uint64_t seed;
    unsigned workers;
    std::uint64_t resampled;
    bool mixing_regime;
};

// Estimates m(f^-n A intersect B) for every n <= n_max by forward
// iteration of uniform samples of B with exact dyadic base coordinates.
// Requires precision_bits >= n_max + 64 (guard bits for the surviving
// window), else PrecisionExhausted.
CorrelationSeries correlation_series(const Rectangle& A, const Rectangle& B, unsigned n_max,
                                     std::uint64_t samples, std::uint64_t seed,
                                     const MapParams& params, unsigned workers = 1,
                                     unsigned precision_bits = kDefaultPrecisionBits);

struct DecayFit {
    double lambda;      // exp(slope) of log|correlation| vs n
    double amplitude;
    double r_squared;
    unsigned n_min, n_max;  // fitted window actually used
    unsigned points;
    bool accepted;          // lambda in (0,1) with enough signal
    std::string status;
};

// Least squares on log|m(f^-n A intersect B) - m(A)m(B)| over the entries
// of the window whose correlation exceeds 3 standard errors. Too few
// usable points is reported through the status, not thrown.
DecayFit fit_exponential_rate(const CorrelationSeries& series, unsigned window_lo,
                              unsigned window_hi);

// Block bookkeeping for the return-time estimates: n0 is the first pull
// depth at which a steered inverse branch stretches the rectangle's base
// side to length >= 1, k0 the extra depth that doubles that length.
struct RecurrenceParams {
    unsigned n0;
    unsigned k0;
    unsigned h;
    unsigned block_length;  // n0 + k0 h
};

RecurrenceParams recurrence_params_for(const Rectangle& A, const MapParams& params,
                                       unsigned h = 0);

struct FractionEntry {
    unsigned block;
    double not_yet;  // mass that has not visited the target by block * N
};

struct FractionSeries {
    RecurrenceParams block_params;
    std::vector<FractionEntry> entries;  // block 0..depth
    double theta_hat;                    // 1 - max_k not_yet(k)^(1/k)
    std::uint64_t samples;
    std::uint64_t seed;
    unsigned workers;
    std::uint64_t resampled;
};

// Mass of A that has not re-entered A within k blocks of N iterates,
// k = 0..depth_blocks, with the tightest geometric envelope rate
// theta_hat such that not_yet(k) <= (1 - theta_hat)^k.
FractionSeries recurrence_fraction(const Rectangle& A, unsigned depth_blocks,
                                   const MapParams& params, std::uint64_t samples,
                                   std::uint64_t seed, unsigned workers = 1, unsigned h = 0);

// Same estimate against a separate target rectangle B.
FractionSeries visit_fraction(const Rectangle& A, const Rectangle& B, unsigned depth_blocks,
                              const MapParams& params, std::uint64_t samples, std::uint64_t seed,
                              unsigned workers = 1, unsigned h = 0);

}  // namespace skewlab
