#pragma once

#include <cmath>
#include <numbers>

#include "lapsum/quadrature.hpp"

namespace lapsum {

/// Band-limited window: the time-domain function whose Fourier transform is
/// the normalized smooth bump c * exp(-1/(1-xi^2)) on (-1, 1). Normalization
/// gives value(0) = 1; positivity of the hat gives |value| <= 1 everywhere.
class Window {
public:
    static const Window& standard() {
        static Window w;
        return w;
    }

    double hat(double xi) const {
        double q = 1.0 - xi * xi;
        if (q <= 0.0) return 0.0;
        return c_ * std::exp(-1.0 / q);
    }

    double value(double y) const {
        double ay = std::abs(y);
        double hint = ay > 6.0 ? 6.0 / ay : 0.0;
        double v = integrate_adaptive(
            [&](double xi) { return hat(xi) * std::cos(xi * y); }, 0.0, 1.0,
            1e-13, 24, hint);
        return v / std::numbers::pi; // (1/2pi) * 2 * integral over [0,1]
    }

    double deriv(double y) const {
        double ay = std::abs(y);
        double hint = ay > 6.0 ? 6.0 / ay : 0.0;
        double v = integrate_adaptive(
            [&](double xi) { return -xi * hat(xi) * std::sin(xi * y); }, 0.0,
            1.0, 1e-13, 24, hint);
        return v / std::numbers::pi;
    }

    /// Uniform bound on |deriv|: (1/2pi) * integral of |xi| * hat.
    double deriv_sup() const { return deriv_sup_; }

    double hat_normalization() const { return c_; }

private:
    Window() {
        double raw = integrate_adaptive(
            [](double xi) {
                double q = 1.0 - xi * xi;
                return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
            },
            -1.0, 1.0, 1e-14, 32);
        c_ = 2.0 * std::numbers::pi / raw;
        deriv_sup_ = integrate_adaptive(
                         [&](double xi) { return xi * hat(xi); }, 0.0, 1.0,
                         1e-14, 32) /
                     std::numbers::pi;
    }

    double c_ = 0.0;
    double deriv_sup_ = 0.0;
};

/// Mollifier: smooth bump on [0, 1] with unit integral.
class Mollifier {
public:
    static const Mollifier& standard() {
        static Mollifier m;
        return m;
    }

    double value(double u) const {
        double q = u * (1.0 - u);
        if (q <= 0.0) return 0.0;
        return c_ * std::exp(-1.0 / q);
    }

    /// L1 norm of the fourth derivative; enters transform-decay bounds.
    double deriv4_l1() const { return deriv4_l1_; }

private:
    Mollifier() {
        double raw = integrate_adaptive(
            [](double u) {
                double q = u * (1.0 - u);
                return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
            },
            0.0, 1.0, 1e-14, 32);
        c_ = 1.0 / raw;
        // fourth derivative via a Richardson-extrapolated central stencil;
        // adequate for a bound constant
        auto d4 = [&](double u, double h) {
            return (value(u - 2 * h) - 4 * value(u - h) + 6 * value(u) -
                    4 * value(u + h) + value(u + 2 * h)) /
                   (h * h * h * h);
        };
        auto d4r = [&](double u) {
            double h = 4e-3;
            return (4.0 * d4(u, h / 2) - d4(u, h)) / 3.0;
        };
        deriv4_l1_ = 1.001 * integrate_adaptive(
                                 [&](double u) { return std::abs(d4r(u)); },
                                 0.0, 1.0, 1e-6, 32, 0.05);
    }

    double c_ = 0.0;
    double deriv4_l1_ = 0.0;
};

} // namespace lapsum
