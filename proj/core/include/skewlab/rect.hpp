#pragma once

#include "skewlab/errors.hpp"

namespace skewlab {

// Axis-aligned coordinate rectangle on the torus. Membership uses the
// half-open convention [lo, hi) in both coordinates.
struct Rectangle {
    double x_lo, x_hi, y_lo, y_hi;

    Rectangle(double xl, double xh, double yl, double yh)
        : x_lo(xl), x_hi(xh), y_lo(yl), y_hi(yh) {
        if (!(x_lo < x_hi) || !(y_lo < y_hi) || x_lo < 0.0 || x_hi > 1.0 || y_lo < 0.0 ||
            y_hi > 1.0)
            throw DegenerateRectangle("rectangle must satisfy 0 <= lo < hi <= 1 in both axes");
    }

    static Rectangle from_center(double cx, double cy, double half_w, double half_h) {
        return Rectangle(cx - half_w, cx + half_w, cy - half_h, cy + half_h);
    }

    double width() const { return x_hi - x_lo; }
    double height() const { return y_hi - y_lo; }
    double measure() const { return width() * height(); }
    double center_x() const { return 0.5 * (x_lo + x_hi); }
    double center_y() const { return 0.5 * (y_lo + y_hi); }

    bool contains(double x, double y) const {
        return x >= x_lo && x < x_hi && y >= y_lo && y < y_hi;
    }
};

}  // namespace skewlab
