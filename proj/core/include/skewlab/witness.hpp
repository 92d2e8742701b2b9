#pragma once

#include "skewlab/map.hpp"
#include "skewlab/rect.hpp"

#include <vector>

namespace skewlab {

// Constructive plan for the forward-mixing check between two open
// rectangles. The word r = a1..aN 0 1..1 0 b1..bN splices the N leading
// expansion digits of the two centers around a block that steers the
// orbit next to the singular line, where one step smears the fiber over
// the whole circle.
struct WitnessPlan {
    Rectangle A, B;
    unsigned N;           // smallest N with 2^-N < min(half-widths)
    BranchWord r;         // length 3N + 2
    unsigned threshold;   // 2N + 2
    unsigned cover_time;  // first n with 2^n width(A) >= 1
    DyadicX x_r;          // 0.r, exact
    double y_r;           // fiber anchor, the center height of A
};

WitnessPlan build_witness(const Rectangle& A, const Rectangle& B);

// Smallest n with 2^n * width(A) >= 1.
unsigned horizontal_cover_time(const Rectangle& A);

struct WitnessHit {
    unsigned n;
    double x, y;           // a point of f^n(A) found inside B
    std::uint64_t tested;  // grid points consumed before the hit
};

struct WitnessReport {
    WitnessPlan plan;
    double c;
    unsigned grid_used;        // per-axis resolution after refinements
    unsigned singular_points;  // grid points discarded on the singular pre-orbit
    std::vector<WitnessHit> hits;
};

// Confirms f^n(A) intersects B at n = threshold and at
// n = cover_time + threshold + k for k = 0..k_max, by exact forward
// iteration of a stratified dyadic grid in A (one jittered sample per
// cell; aligned grid coordinates would collapse to x = 0 after
// ~log2(grid) doublings). A miss refines the grid 4x per axis up to
// `refinements` times before WitnessFailed is thrown.
WitnessReport verify_witness(const WitnessPlan& plan, const MapParams& params,
                             unsigned grid = 64, unsigned k_max = 6, unsigned refinements = 2);

}  // namespace skewlab
