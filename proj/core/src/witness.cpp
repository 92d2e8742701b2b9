#include "skewlab/witness.hpp"

#include "skewlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace skewlab {

unsigned horizontal_cover_time(const Rectangle& A) {
    double w = A.width();
    unsigned n = 0;
    while (std::ldexp(w, static_cast<int>(n)) < 1.0) ++n;
    return n;
}

WitnessPlan build_witness(const Rectangle& A, const Rectangle& B) {
    double delta = std::min(0.5 * A.width(), 0.5 * B.width());
    unsigned N = 1;
    while (!(std::ldexp(1.0, -static_cast<int>(N)) < delta)) {
        ++N;
        if (N > 1024) throw DegenerateRectangle("build_witness: rectangles too thin");
    }

    unsigned digits = std::max(N, 53u);
    DyadicX xa = DyadicX::from_double(A.center_x(), digits);
    DyadicX xb = DyadicX::from_double(B.center_x(), digits);

    std::vector<std::uint8_t> bits;
    bits.reserve(3 * N + 2);
    for (unsigned i = 1; i <= N; ++i) bits.push_back(static_cast<std::uint8_t>(xa.bit(i)));
    bits.push_back(0);
    for (unsigned i = 0; i < N; ++i) bits.push_back(1);
    bits.push_back(0);
    for (unsigned i = 1; i <= N; ++i) bits.push_back(static_cast<std::uint8_t>(xb.bit(i)));

    BranchWord r(std::move(bits));
    WitnessPlan plan{A, B, N, r, 2 * N + 2, horizontal_cover_time(A), r.cell_lo(),
                     A.center_y()};
    return plan;
}

WitnessReport verify_witness(const WitnessPlan& plan, const MapParams& params, unsigned grid,
                             unsigned k_max, unsigned refinements) {
    if (grid * grid < 1000)
        throw std::invalid_argument("verify_witness: need at least ~10^3 grid points");

    std::set<unsigned> times{plan.threshold};
    for (unsigned k = 0; k <= k_max; ++k) times.insert(plan.cover_time + plan.threshold + k);
    const unsigned max_t = *times.rbegin();
    const unsigned precision = std::max(kDefaultPrecisionBits, max_t + 64u);

    WitnessReport report{plan, params.c, grid, 0, {}};

    for (unsigned attempt = 0; attempt <= refinements; ++attempt) {
        report.grid_used = grid;
        report.singular_points = 0;
        report.hits.clear();

        // Stratified dyadic sampling: one point per grid cell with a
        // random dyadic tail. An aligned grid would be fatal here: its
        // coordinates carry ~log2(grid) bits, so their base orbits
        // collapse to x = 0 after that many doublings and can never meet
        // B at later times. The jitter keeps orbits generic while the
        // cells keep the coverage; the fixed stream keeps runs
        // reproducible (refinement attempts draw fresh streams).
        RngStream rng(0x5EED, attempt);

        std::set<unsigned> unhit = times;
        std::vector<WitnessHit> hits;
        std::uint64_t tested = 0;

        for (unsigned i = 0; i < grid && !unhit.empty(); ++i) {
            double cell_x = plan.A.x_lo + i * plan.A.width() / grid;
            double cell_x_hi = plan.A.x_lo + (i + 1.0) * plan.A.width() / grid;
            for (unsigned j = 0; j < grid && !unhit.empty(); ++j) {
                DyadicX x0 = rng.uniform_dyadic_in(cell_x, cell_x_hi, precision);
                BitView bv(x0);
                double y0 = plan.A.y_lo + (j + rng.uniform01()) * plan.A.height() / grid;
                ++tested;
                double yt = y0;
                for (unsigned t = 1; t <= max_t && !unhit.empty(); ++t) {
                    if (bv.is_half_at(t - 1)) {
                        ++report.singular_points;
                        break;
                    }
                    yt = mod1(yt + params.c / bv.dist_to_half_at(t - 1));
                    if (unhit.count(t)) {
                        double xt = bv.value_at(t);
                        if (plan.B.contains(xt, yt)) {
                            hits.push_back(WitnessHit{t, xt, yt, tested});
                            unhit.erase(t);
                        }
                    }
                }
            }
        }

        if (unhit.empty()) {
            std::sort(hits.begin(), hits.end(),
                      [](const WitnessHit& a, const WitnessHit& b) { return a.n < b.n; });
            report.hits = std::move(hits);
            return report;
        }
        if (attempt == refinements) throw WitnessFailed(*unhit.begin());
        grid *= 4;
    }
    throw WitnessFailed(0);  // unreachable
}

}  // namespace skewlab
