#include "skewlab/branch.hpp"

#include "skewlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace skewlab {

namespace {

constexpr unsigned kMaxCurveWord = 48;  // double-exact cell bounds end here

void require_curve_word(const BranchWord& word) {
    if (word.length() == 0) throw std::invalid_argument("branch curve: empty word");
    if (word.length() > kMaxCurveWord)
        throw std::invalid_argument("branch curve: words beyond 48 bits exceed double range");
}

// Generic sign-change bisection; ga and gb must have opposite signs.
// Runs to floating resolution when tol is 0.
template <class G>
double bisect(G&& g, double a, double b, double ga, double gb, double tol, int max_iter = 200) {
    (void)gb;
    for (int i = 0; i < max_iter && std::abs(b - a) > tol; ++i) {
        double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        double gm = g(m);
        if (gm == 0.0) return m;
        if ((gm > 0.0) == (ga > 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

HSegment::HSegment(DyadicX lo, DyadicX hi, double y_)
    : x_lo(std::move(lo)), x_hi(std::move(hi)), y(mod1(y_)) {
    if (!(x_lo < x_hi))
        throw std::invalid_argument("HSegment: endpoints must satisfy x_lo < x_hi");
}

HSegment HSegment::from_doubles(double lo, double hi, double y, unsigned bits) {
    return HSegment(DyadicX::from_double(lo, bits), DyadicX::from_double(hi, bits), y);
}

AsymptoteSet asymptotes(const BranchWord& word) {
    require_curve_word(word);
    const unsigned n = word.length();
    AsymptoteSet out;
    BigUint prefix = 0;  // value of b1..b_{j-1}
    const BigUint cell = word.value();
    for (unsigned j = 1; j <= n; ++j) {
        BigUint num = prefix * 2 + 1;  // 0.b1..b_{j-1} + 2^-j
        int sign = word.bit(j) ? 1 : -1;
        Asymptote a{DyadicX(num, j), sign, j};
        // In-cell test against the closed cell [V/2^n, (V+1)/2^n], done on
        // integers so the right endpoint 1 needs no wrap-around care.
        BigUint scaled = num << (n - j);
        if (scaled >= cell && scaled <= cell + 1) out.in_domain.push_back(a);
        if (sign > 0) {
            if (!out.max_positive || a.position > *out.max_positive)
                out.max_positive = a.position;
        } else {
            if (!out.min_negative || a.position < *out.min_negative)
                out.min_negative = a.position;
        }
        out.all.push_back(std::move(a));
        prefix = prefix * 2 + word.bit(j);
    }
    return out;
}

BranchCurve::BranchCurve(BranchWord word, TorusPoint anchor, MapParams params)
    : word_(std::move(word)), anchor_(std::move(anchor)), params_(params) {
    require_curve_word(word_);
    const unsigned n = word_.length();
    AsymptoteSet as = asymptotes(word_);
    poles_.reserve(n);
    coefs_.reserve(n);
    for (const Asymptote& a : as.all) {
        poles_.push_back(a.position.to_double());
        coefs_.push_back(params_.c * a.sign * std::ldexp(1.0, 1 - static_cast<int>(a.index)));
    }
    double cell = static_cast<double>(word_.value().convert_to<std::uint64_t>());
    domain_lo_ = std::ldexp(cell, -static_cast<int>(n));
    domain_hi_ = std::ldexp(cell + 1.0, -static_cast<int>(n));
}

DyadicX BranchCurve::domain_lo_exact() const { return word_.cell_lo(); }

void BranchCurve::check_domain(double x_b) const {
    for (double p : poles_)
        if (x_b == p) throw AtAsymptote("branch curve evaluated on an asymptote");
    if (x_b < domain_lo_ || x_b > domain_hi_)
        throw OutsideDomain("branch curve evaluated outside its cell");
}

double BranchCurve::eval_lift(double x_b) const {
    check_domain(x_b);
    double sum = 0.0;
    for (std::size_t j = 0; j < poles_.size(); ++j) sum += coefs_[j] / (x_b - poles_[j]);
    return anchor_.y - sum;
}

double BranchCurve::eval_mod1(double x_b) const { return mod1(eval_lift(x_b)); }

double BranchCurve::derivative_lift(double x_b) const {
    check_domain(x_b);
    double sum = 0.0;
    for (std::size_t j = 0; j < poles_.size(); ++j) {
        double d = x_b - poles_[j];
        sum += coefs_[j] / (d * d);
    }
    return sum;
}

double BranchCurve::tail_limit_level() const {
    double x_pole = poles_.back();
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < poles_.size(); ++j) sum += coefs_[j] / (x_pole - poles_[j]);
    return anchor_.y - sum;
}

CriticalPointReport critical_point(const BranchCurve& curve) {
    const BranchWord& word = curve.word();
    DyadicX lo = curve.domain_lo_exact();
    CriticalPointReport rep{false, 0.0, lo, lo, false};
    if (word.all_bits_equal()) return rep;

    AsymptoteSet as = asymptotes(word);
    // Both signs present: the derivative runs from +inf at the rightmost
    // positive pole down to -inf at the leftmost negative pole, and those
    // two poles are the cell boundary.
    double a = as.max_positive->to_double();
    double b = as.min_negative->to_double();
    rep.bracket_lo = *as.max_positive;
    rep.bracket_hi = *as.min_negative;
    rep.bracket_hi_is_one = false;

    // Endpoint signs are pole-dominated (+inf left, -inf right); bisect
    // without ever evaluating on the poles themselves.
    auto g = [&curve](double x) { return curve.derivative_lift(x); };
    rep.exists = true;
    rep.location = bisect(g, a, b, 1.0, -1.0, 1e-13);
    return rep;
}

double chain_lower_bound(unsigned n, double c, double dx) {
    if (n == 0) return 0.0;
    if (n == 1) return 2.0 * c * dx;
    if (n == 2) return 3.0 * c * dx;
    return (3.0 + (1.0 - std::ldexp(1.0, -static_cast<int>(n - 2)))) * c * dx;
}

unsigned expansion_threshold_length() {
    // First n with 4 - 2^(2-n) within 2^-6 of the limit 4.
    return 8;
}

bool pull_avoids_critical_strip(const HSegment& seg, const BranchWord& word,
                                const MapParams& params, double margin_cells) {
    BranchCurve curve(word, TorusPoint(seg.x_lo, seg.y), params);
    CriticalPointReport cp = critical_point(curve);
    if (!cp.exists) return true;
    double cell = curve.domain_hi() - curve.domain_lo();
    double a = curve.domain_lo() + seg.x_lo.to_double() * cell;
    double b = curve.domain_lo() + seg.x_hi.to_double() * cell;
    double margin = margin_cells * cell;
    return b < cp.location - margin || a > cp.location + margin;
}

ExpansionReport preimage_segment_length(const HSegment& seg, const BranchWord& word,
                                        const MapParams& params, double abs_tol) {
    require_curve_word(word);
    TorusPoint lo_pt(seg.x_lo, seg.y);
    TorusPoint hi_pt(seg.x_hi, seg.y);
    TorusPoint plo = preimage_word(lo_pt, word, params);
    TorusPoint phi = preimage_word(hi_pt, word, params);
    double a = plo.x.to_double();
    double b = phi.x.to_double();

    BranchCurve curve(word, lo_pt, params);
    auto integrand = [&curve](double u) {
        double d = curve.derivative_lift(u);
        return std::sqrt(1.0 + d * d);
    };

    std::vector<double> cuts{a, b};
    CriticalPointReport cp = critical_point(curve);
    if (cp.exists && cp.location > a && cp.location < b) cuts.insert(cuts.begin() + 1, cp.location);

    double length = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        length += integrate_adaptive(integrand, cuts[i], cuts[i + 1], abs_tol / (cuts.size() - 1));

    return ExpansionReport{word.length(), length,
                           chain_lower_bound(word.length(), params.c, seg.width()),
                           expansion_threshold_length()};
}

GrowthReport bounded_growth_check(const HSegment& seg, const BranchWord& word, double eps,
                                  double delta, const MapParams& params) {
    const unsigned K = word.length();
    if (K == 0) throw std::invalid_argument("bounded_growth_check: empty word");
    double dx = seg.width();
    if (!(dx < delta && delta < eps && eps < 1.0))
        throw std::invalid_argument("bounded_growth_check: need width < delta < eps < 1");

    const double strip_lo = 0.5 - eps / 2.0;
    const double strip_hi = 0.5 + eps / 2.0;
    DyadicX lo = seg.x_lo;
    DyadicX hi = seg.x_hi;
    for (unsigned j = 0; j < K; ++j) {
        // Arc after j pulls occupies [lo, hi]; it must avoid the strip
        // before the next pull is taken.
        if (!(hi.to_double() < strip_lo || lo.to_double() > strip_hi)) throw StripViolation(j);
        int b = word.bit(K - j);
        if (b == 1 && lo.is_zero()) throw SingularPreimage(K - j);
        lo = lo.halved_with_prefix(b);
        hi = hi.halved_with_prefix(b);
    }

    double measured = preimage_segment_length(seg, word, params).measured_length;
    double rho = (4.0 * params.c + 1.0) * delta / (eps * eps - delta * delta);
    double envelope = std::pow(rho, static_cast<double>(K));
    return GrowthReport{measured, envelope, measured <= envelope};
}

double vertical_projection_span(const std::vector<LiftPoint>& arc, const MapParams& params) {
    if (arc.size() < 2) throw std::invalid_argument("vertical_projection_span: need >= 2 points");
    int dir_x = 0, dir_y = 0;
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
        double dx = arc[i + 1].x - arc[i].x;
        double dy = arc[i + 1].y - arc[i].y;
        if (dx != 0.0) {
            int s = dx > 0 ? 1 : -1;
            if (dir_x != 0 && s != dir_x) throw NonMonotoneArc("x(t) is not monotone");
            dir_x = s;
        }
        if (dy != 0.0) {
            int s = dy > 0 ? 1 : -1;
            if (dir_y != 0 && s != dir_y) throw NonMonotoneArc("y(t) is not monotone");
            dir_y = s;
        }
    }

    double xmin = std::min(arc.front().x, arc.back().x);
    double xmax = std::max(arc.front().x, arc.back().x);
    double k = std::ceil(xmin - 0.5);
    if (k + 0.5 <= xmax) return std::numeric_limits<double>::infinity();

    auto translate = [&params](double x) {
        double u = x - std::floor(x);
        double d = std::abs(u - 0.5);
        return params.c / d;
    };

    // The translation has a local minimum at every integer x; refine the
    // polyline there so each summed piece is monotone in x.
    double span = 0.0;
    double prev = arc.front().y + translate(arc.front().x);
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
        const LiftPoint& p = arc[i];
        const LiftPoint& q = arc[i + 1];
        double lox = std::min(p.x, q.x), hix = std::max(p.x, q.x);
        std::vector<double> xs;
        for (double m = std::ceil(lox); m <= std::floor(hix); ++m)
            if (m > lox && m < hix) xs.push_back(m);
        if (q.x < p.x) std::reverse(xs.begin(), xs.end());
        xs.push_back(q.x);
        for (double xv : xs) {
            double t = (q.x == p.x) ? 1.0 : (xv - p.x) / (q.x - p.x);
            double yv = p.y + t * (q.y - p.y);
            double s = yv + translate(xv);
            span += std::abs(s - prev);
            prev = s;
        }
    }
    return span;
}

StripWidthProfile strip_width_profile(const Rectangle& rect, const BranchWord& word,
                                      const MapParams& params, unsigned n_lo, unsigned n_hi) {
    require_curve_word(word);
    if (n_lo == 0 || n_lo > n_hi) throw std::invalid_argument("strip_width_profile: bad range");
    if (!(rect.x_lo > 0.0 && rect.x_hi < 1.0))
        throw std::invalid_argument("strip_width_profile: rectangle must avoid x = 0 and x = 1");

    const unsigned N = word.length();
    DyadicX anchor_x = DyadicX::from_double(rect.x_lo, 64);
    BranchCurve bottom(word, TorusPoint(anchor_x, rect.y_lo), params);
    BranchCurve top(word, TorusPoint(anchor_x, rect.y_hi), params);

    double cell = static_cast<double>(word.value().convert_to<std::uint64_t>());
    double map_lo = std::ldexp(cell + rect.x_lo, -static_cast<int>(N));
    double map_hi = std::ldexp(cell + rect.x_hi, -static_cast<int>(N));

    // The descending tail sits at the cell edge carrying the last digit's
    // pole: the left edge when b_N = 1, the right edge when b_N = 0.
    bool tail_left = word.bit(N) == 1;
    double near = tail_left ? map_lo : map_hi;
    double far = tail_left ? map_hi : map_lo;

    CriticalPointReport cp = critical_point(bottom);
    if (cp.exists && cp.location > std::min(near, far) && cp.location < std::max(near, far))
        far = cp.location;

    // Anchor the wrap labels at the pole-limit level of the bottom curve:
    // the lifted arc of a long word starts many units below the fiber
    // origin (every pole term pulls it down), and near its dive the curve
    // is this level plus the pole term alone, so bands counted from here
    // carry the clean inverse-square width law.
    double label_origin = std::floor(bottom.tail_limit_level());

    auto solve_at = [&](const BranchCurve& curve, double target) -> std::optional<double> {
        double v_near = curve.eval_lift(near);
        double v_far = curve.eval_lift(far);
        if (!(v_near < target && target < v_far)) return std::nullopt;
        auto g = [&](double x) { return curve.eval_lift(x) - target; };
        // The stretch from the pole-side end to `far` is monotone.
        return bisect(g, near, far, v_near - target, v_far - target, 0.0, 200);
    };

    StripWidthProfile out;
    for (unsigned n = n_lo; n <= n_hi; ++n) {
        double target = label_origin + 0.5 - static_cast<double>(n);
        auto xb_bot = solve_at(bottom, target);
        auto xb_top = solve_at(top, target);
        if (!xb_bot || !xb_top)
            throw InsufficientWraps("strip_width_profile: wrap " + std::to_string(n) +
                                    " not reached by the pulled sides");
        out.emplace_back(n, std::abs(*xb_top - *xb_bot));
    }
    return out;
}

PowerLawFit fit_power_law(const StripWidthProfile& profile, unsigned n_from, unsigned n_to) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    unsigned m = 0;
    for (const auto& [n, w] : profile) {
        if (n < n_from || n > n_to || !(w > 0.0)) continue;
        double lx = std::log(static_cast<double>(n));
        double ly = std::log(w);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
        ++m;
    }
    if (m < 2) throw std::invalid_argument("fit_power_law: need at least two points");
    double denom = m * sxx - sx * sx;
    double slope = (m * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / m;
    double ss_res = syy - intercept * sy - slope * sxy;
    double ss_tot = syy - sy * sy / m;
    double r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return PowerLawFit{-slope, std::exp(intercept), r2, m};
}

}  // namespace skewlab
