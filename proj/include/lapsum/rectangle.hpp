#pragma once

#include <complex>

#include "lapsum/errors.hpp"

namespace lapsum {

/// Closed rectangle [alpha, 1] x i[-r, r] in the transform plane.
/// The right edge is fixed at 1.
struct Rectangle {
    double alpha;
    double r;

    Rectangle(double alpha, double r) : alpha(alpha), r(r) {
        if (!(alpha < 0.0))
            throw precondition_error("Rectangle: alpha must be < 0");
        if (!(r > 0.0))
            throw precondition_error("Rectangle: r must be > 0");
    }

    static constexpr double right_edge = 1.0;

    bool contains(std::complex<double> s) const {
        return s.real() >= alpha && s.real() <= right_edge &&
               std::abs(s.imag()) <= r;
    }
};

} // namespace lapsum
