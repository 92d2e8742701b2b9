#pragma once

#include "skewlab/errors.hpp"

#include <cmath>

namespace skewlab {

// Adaptive Simpson integration with an absolute tolerance. The integrands
// here are smooth inside their interval but can be extremely steep next to
// one endpoint (arcs hugging an asymptote), hence the generous depth cap.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 60) {
    struct Impl {
        const F& f;
        int max_depth;
        double recurse(double a, double m, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) const {
            double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            double flm = f(lm), frm = f(rm);
            double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            double delta = left + right - whole;
            if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
            if (depth >= max_depth)
                throw QuadratureFailure("adaptive quadrature: tolerance unreachable at depth cap");
            return recurse(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
                   recurse(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
        }
    };
    if (!(a < b)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Impl{f, max_depth}.recurse(a, m, b, fa, fm, fb, whole, abs_tol, 0);
}

}  // namespace skewlab
