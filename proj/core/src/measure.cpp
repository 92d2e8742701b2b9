#include "skewlab/measure.hpp"

#include "skewlab/branch.hpp"
#include "skewlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace skewlab {

namespace {

void require_interior(const Rectangle& r, const char* who) {
    if (!(r.x_lo > 0.0 && r.x_hi < 1.0 && r.y_lo >= 0.0 && r.y_hi <= 1.0))
        throw DegenerateRectangle(std::string(who) + ": rectangle must avoid x = 0 and x = 1");
}

// Splits `samples` across workers and runs fn(worker, chunk) on each.
template <class Fn>
void run_workers(std::uint64_t samples, unsigned workers, Fn&& fn) {
    if (workers <= 1) {
        fn(0u, samples);
        return;
    }
    std::vector<std::thread> pool;
    std::uint64_t base = samples / workers;
    std::uint64_t extra = samples % workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t chunk = base + (w < extra ? 1 : 0);
        pool.emplace_back([&fn, w, chunk] { fn(w, chunk); });
    }
    for (auto& t : pool) t.join();
}

double binom_stderr(double frac, std::uint64_t samples) {
    return std::sqrt(std::max(frac * (1.0 - frac), 0.0) / static_cast<double>(samples));
}

}  // namespace

RegionAreaReport preimage_region_area(const Rectangle& rect, int bit, const MapParams& params,
                                      std::uint64_t samples, std::uint64_t seed) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("preimage_region_area: bit must be 0/1");
    require_interior(rect, "preimage_region_area");
    double analytic = 0.5 * rect.measure();

    double strip_lo = 0.5 * (bit + rect.x_lo);
    double strip_hi = 0.5 * (bit + rect.x_hi);
    std::uint64_t hits = 0;
    if (samples > 0) {
        RngStream rng(seed, 0);
        for (std::uint64_t i = 0; i < samples; ++i) {
            double x = rng.uniform(strip_lo, strip_hi);
            double y = rng.uniform01();
            double fy = mod1(y + params.c / std::abs(x - 0.5));
            if (fy >= rect.y_lo && fy < rect.y_hi) ++hits;
        }
    }
    double strip_area = strip_hi - strip_lo;  // fiber direction has length 1
    double frac = samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
    return RegionAreaReport{analytic, frac * strip_area,
                            samples ? binom_stderr(frac, samples) * strip_area : 0.0, samples};
}

InvarianceReport verify_invariance(const std::vector<Rectangle>& rects, const MapParams& params,
                                   std::uint64_t samples_per_rect, std::uint64_t seed,
                                   unsigned workers) {
    InvarianceReport report;
    report.samples_per_rect = samples_per_rect;
    report.resampled = 0;
    report.seed = seed;
    report.workers = workers;

    for (std::size_t ri = 0; ri < rects.size(); ++ri) {
        const Rectangle& rect = rects[ri];
        double m = rect.measure();
        double residual = std::abs((0.5 * m + 0.5 * m) - m);

        std::vector<std::uint64_t> hits(workers, 0), redraws(workers, 0);
        run_workers(samples_per_rect, workers, [&](unsigned w, std::uint64_t chunk) {
            RngStream rng(seed, ri * workers + w);
            std::uint64_t h = 0, rs = 0;
            for (std::uint64_t i = 0; i < chunk; ++i) {
                for (;;) {
                    DyadicX x = rng.uniform_dyadic();
                    double y = rng.uniform01();
                    if (x.is_half()) {
                        ++rs;
                        continue;
                    }
                    BitView bv(x);
                    double fy = mod1(y + params.c / bv.dist_to_half_at(0));
                    double fx = bv.value_at(1);
                    if (rect.contains(fx, fy)) ++h;
                    break;
                }
            }
            hits[w] = h;
            redraws[w] = rs;
        });

        std::uint64_t total_hits = 0;
        for (unsigned w = 0; w < workers; ++w) {
            total_hits += hits[w];
            report.resampled += redraws[w];
        }
        double frac = static_cast<double>(total_hits) / static_cast<double>(samples_per_rect);
        double se = binom_stderr(frac, samples_per_rect);
        bool ok = std::abs(frac - m) <= 3.0 * se || se == 0.0;
        report.entries.push_back(InvarianceEntry{rect, residual, frac, se, ok});
    }
    return report;
}

CorrelationSeries correlation_series(const Rectangle& A, const Rectangle& B, unsigned n_max,
                                     std::uint64_t samples, std::uint64_t seed,
                                     const MapParams& params, unsigned workers,
                                     unsigned precision_bits) {
    if (samples == 0) throw std::invalid_argument("correlation_series: samples must be positive");
    if (workers == 0) workers = 1;
    if (precision_bits < n_max + 64)
        throw PrecisionExhausted("correlation_series: need precision_bits >= n_max + 64");

    std::vector<std::vector<std::uint64_t>> counts(workers,
                                                   std::vector<std::uint64_t>(n_max + 1, 0));
    std::vector<std::uint64_t> redraws(workers, 0);

    DyadicSampler base_x(B.x_lo, B.x_hi, precision_bits);
    run_workers(samples, workers, [&](unsigned w, std::uint64_t chunk) {
        RngStream rng(seed, w);
        auto& count = counts[w];
        std::vector<std::uint8_t> hit(n_max + 1);
        for (std::uint64_t i = 0; i < chunk; ++i) {
            for (;;) {
                DyadicX x = base_x.draw(rng);
                double y = rng.uniform(B.y_lo, B.y_hi);
                BitView bv(x);
                bool singular = false;
                double yt = y;
                for (unsigned t = 0;; ++t) {
                    double xt = bv.value_at(t);
                    hit[t] = A.contains(xt, yt) ? 1 : 0;
                    if (t == n_max) break;
                    if (bv.is_half_at(t)) {
                        singular = true;
                        break;
                    }
                    yt = mod1(yt + params.c / bv.dist_to_half_at(t));
                }
                if (singular) {
                    ++redraws[w];
                    continue;
                }
                for (unsigned t = 0; t <= n_max; ++t) count[t] += hit[t];
                break;
            }
        }
    });

    CorrelationSeries series{params.c, A,       B, {}, samples, seed, workers, 0,
                             params.mixing_regime()};
    double mB = B.measure();
    for (unsigned n = 0; n <= n_max; ++n) {
        std::uint64_t total = 0;
        for (unsigned w = 0; w < workers; ++w) total += counts[w][n];
        double frac = static_cast<double>(total) / static_cast<double>(samples);
        series.entries.push_back(
            CorrelationEntry{n, frac * mB, binom_stderr(frac, samples) * mB, samples});
    }
    for (unsigned w = 0; w < workers; ++w) series.resampled += redraws[w];
    return series;
}

DecayFit fit_exponential_rate(const CorrelationSeries& series, unsigned window_lo,
                              unsigned window_hi) {
    double mAmB = series.A.measure() * series.B.measure();
    std::vector<std::pair<double, double>> pts;  // (n, log |corr|)
    unsigned used_lo = 0, used_hi = 0;
    for (const auto& e : series.entries) {
        if (e.n < window_lo || e.n > window_hi) continue;
        double corr = std::abs(e.estimate - mAmB);
        if (corr <= 3.0 * e.std_error || corr <= 0.0) continue;  // indistinguishable from noise
        if (pts.empty()) used_lo = e.n;
        used_hi = e.n;
        pts.emplace_back(static_cast<double>(e.n), std::log(corr));
    }

    DecayFit fit{0.0, 0.0, 0.0, used_lo, used_hi, static_cast<unsigned>(pts.size()), false, ""};
    if (pts.size() < 4) {
        fit.status = "insufficient signal: fewer than 4 entries above 3 standard errors";
        return fit;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double m = static_cast<double>(pts.size());
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double intercept = (sy - slope * sx) / m;
    double ss_res = 0.0;
    for (auto [x, y] : pts) {
        double r = y - (slope * x + intercept);
        ss_res += r * r;
    }
    double mean_y = sy / m;
    double ss_tot = 0.0;
    for (auto [x, y] : pts) {
        (void)x;
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    fit.lambda = std::exp(slope);
    fit.amplitude = std::exp(intercept);
    fit.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    if (fit.lambda > 0.0 && fit.lambda < 1.0) {
        fit.accepted = true;
        fit.status = "ok";
    } else {
        fit.status = "fitted rate not inside (0,1)";
    }
    return fit;
}

RecurrenceParams recurrence_params_for(const Rectangle& A, const MapParams& params, unsigned h) {
    require_interior(A, "recurrence_params_for");
    HSegment bottom = HSegment::from_doubles(A.x_lo, A.x_hi, A.y_lo, 64);

    // Steer the pull next to the singular line: the word 0 1 1 ... 1
    // addresses the cell just left of x = 1/2, where one pull step gains
    // a factor ~ c 2^n in vertical stretch. The stretch is measured as
    // the pulled arc's vertical variation (split at the derivative zero),
    // which is what wrapping the fiber requires and is exact to evaluate.
    auto steered_stretch = [&](unsigned n) {
        BranchWord w = BranchWord::from_string("0" + std::string(n - 1, '1'));
        TorusPoint lo_pt(bottom.x_lo, bottom.y);
        TorusPoint plo = preimage_word(lo_pt, w, params);
        TorusPoint phi = preimage_word(TorusPoint(bottom.x_hi, bottom.y), w, params);
        BranchCurve curve(w, lo_pt, params);
        double a = plo.x.to_double(), b = phi.x.to_double();
        CriticalPointReport cp = critical_point(curve);
        if (cp.exists && cp.location > a && cp.location < b)
            return std::abs(curve.eval_lift(cp.location) - curve.eval_lift(a)) +
                   std::abs(curve.eval_lift(b) - curve.eval_lift(cp.location));
        return std::abs(curve.eval_lift(b) - curve.eval_lift(a));
    };

    unsigned n0 = 0;
    for (unsigned n = 1; n <= 48; ++n) {
        if (steered_stretch(n) >= 1.0) {
            n0 = n;
            break;
        }
    }
    if (n0 == 0)
        throw Error("recurrence_params_for: steered pulls never reached unit length");
    double base = steered_stretch(n0);
    unsigned k0 = 0;
    for (unsigned j = 1; n0 + j <= 48; ++j) {
        if (steered_stretch(n0 + j) >= 2.0 * base) {
            k0 = j;
            break;
        }
    }
    if (k0 == 0) throw Error("recurrence_params_for: steered pulls never doubled");
    return RecurrenceParams{n0, k0, h, n0 + k0 * h};
}

namespace {

FractionSeries first_visit_series(const Rectangle& source, const Rectangle& target,
                                  unsigned depth_blocks, const MapParams& params,
                                  std::uint64_t samples, std::uint64_t seed, unsigned workers,
                                  unsigned h) {
    if (samples == 0) throw std::invalid_argument("fraction series: samples must be positive");
    if (workers == 0) workers = 1;
    RecurrenceParams rp = recurrence_params_for(source, params, h);
    const unsigned N = rp.block_length;
    const unsigned max_t = depth_blocks * N;
    const unsigned precision = kDefaultPrecisionBits;
    if (precision < max_t + 64)
        throw PrecisionExhausted("fraction series: depth needs more than the dyadic budget");

    // hist[k] = samples whose first visit lands in block k (1-based);
    // hist[depth+1] collects the never-visited remainder.
    std::vector<std::vector<std::uint64_t>> hists(
        workers, std::vector<std::uint64_t>(depth_blocks + 2, 0));
    std::vector<std::uint64_t> redraws(workers, 0);

    DyadicSampler base_x(source.x_lo, source.x_hi, precision);
    run_workers(samples, workers, [&](unsigned w, std::uint64_t chunk) {
        RngStream rng(seed, w);
        auto& hist = hists[w];
        for (std::uint64_t i = 0; i < chunk; ++i) {
            for (;;) {
                DyadicX x = base_x.draw(rng);
                double y = rng.uniform(source.y_lo, source.y_hi);
                BitView bv(x);
                double yt = y;
                bool singular = false;
                unsigned visit_block = depth_blocks + 1;
                for (unsigned t = 1; t <= max_t; ++t) {
                    if (bv.is_half_at(t - 1)) {
                        singular = true;
                        break;
                    }
                    yt = mod1(yt + params.c / bv.dist_to_half_at(t - 1));
                    if (target.contains(bv.value_at(t), yt)) {
                        visit_block = (t + N - 1) / N;
                        break;
                    }
                }
                if (singular) {
                    ++redraws[w];
                    continue;
                }
                ++hist[visit_block];
                break;
            }
        }
    });

    FractionSeries out{rp, {}, 1.0, samples, seed, workers, 0};
    std::vector<std::uint64_t> hist(depth_blocks + 2, 0);
    for (unsigned w = 0; w < workers; ++w) {
        for (std::size_t k = 0; k < hist.size(); ++k) hist[k] += hists[w][k];
        out.resampled += redraws[w];
    }
    double remaining = static_cast<double>(samples);
    out.entries.push_back(FractionEntry{0, 1.0});
    double max_root = 0.0;
    for (unsigned k = 1; k <= depth_blocks; ++k) {
        remaining -= static_cast<double>(hist[k]);
        double frac = remaining / static_cast<double>(samples);
        out.entries.push_back(FractionEntry{k, frac});
        if (frac > 0.0) max_root = std::max(max_root, std::pow(frac, 1.0 / k));
    }
    out.theta_hat = 1.0 - max_root;
    return out;
}

}  // namespace

FractionSeries recurrence_fraction(const Rectangle& A, unsigned depth_blocks,
                                   const MapParams& params, std::uint64_t samples,
                                   std::uint64_t seed, unsigned workers, unsigned h) {
    return first_visit_series(A, A, depth_blocks, params, samples, seed, workers, h);
}

FractionSeries visit_fraction(const Rectangle& A, const Rectangle& B, unsigned depth_blocks,
                              const MapParams& params, std::uint64_t samples, std::uint64_t seed,
                              unsigned workers, unsigned h) {
    return first_visit_series(A, B, depth_blocks, params, samples, seed, workers, h);
}

}  // namespace skewlab
