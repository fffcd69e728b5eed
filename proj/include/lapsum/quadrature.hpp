#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include "lapsum/errors.hpp"

namespace lapsum {

/// Neumaier compensated accumulator; summation order is the caller's and
/// results are reproducible for a fixed order.
template <typename T>
class CompensatedSum {
public:
    void add(T v) {
        T t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

template <>
class CompensatedSum<std::complex<double>> {
public:
    void add(std::complex<double> v) {
        re_.add(v.real());
        im_.add(v.imag());
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum<double> re_, im_;
};

struct GaussLegendreRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights; // sum to 2
};

/// Nodes and weights by Newton iteration on the Legendre recurrence.
inline const GaussLegendreRule& gauss_legendre(int n) {
    static std::map<int, GaussLegendreRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw precondition_error("gauss_legendre: order must be >= 1");

    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one clean-up step
                p0 = 1.0; p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                x -= p1 / dp;
                break;
            }
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

template <typename F>
auto gl_panel(F&& f, double a, double b, int order) {
    const auto& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    using R = decltype(f(mid));
    CompensatedSum<R> acc;
    for (int i = 0; i < order; ++i)
        acc.add(R(rule.weights[i] * hl) * f(mid + hl * rule.nodes[i]));
    return acc.value();
}

template <typename F>
auto integrate_composite(F&& f, double a, double b, int panels, int order) {
    using R = decltype(f(a));
    CompensatedSum<R> acc;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        acc.add(gl_panel(f, a + p * h, a + (p + 1) * h, order));
    return acc.value();
}

/// Composite Gauss-Legendre with panel doubling until two successive
/// levels agree within tol (absolute and relative). `panel_hint` seeds the
/// initial panel length; pass the oscillation scale for wavy integrands.
template <typename F>
auto integrate_adaptive(F&& f, double a, double b, double tol,
                        int order = 24, double panel_hint = 0.0,
                        int max_doublings = 14) {
    using R = decltype(f(a));
    if (!(b > a)) return R{};
    int panels = 1;
    if (panel_hint > 0.0)
        panels = std::max(1, static_cast<int>(std::ceil((b - a) / panel_hint)));
    R prev = integrate_composite(f, a, b, panels, order);
    for (int d = 0; d < max_doublings; ++d) {
        panels *= 2;
        R cur = integrate_composite(f, a, b, panels, order);
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur)))
            return cur;
        prev = cur;
    }
    throw convergence_error("integrate_adaptive: no convergence after node cap");
}

/// Semi-infinite integral of a decaying (possibly oscillating) integrand.
/// Panels grow geometrically from `scale`/8, capped by half an oscillation
/// period; stops once two consecutive panels are negligible.
template <typename F>
auto integrate_decaying(F&& f, double scale, double osc_period, double tol,
                        int max_panels = 600) {
    using R = decltype(f(scale));
    double h0 = scale / 8.0;
    double cap = osc_period > 0.0 ? 0.5 * osc_period : std::numeric_limits<double>::infinity();
    h0 = std::min(h0, cap);
    if (!(h0 > 0.0)) throw precondition_error("integrate_decaying: bad scales");

    CompensatedSum<R> acc;
    double err = 0.0;
    double t = 0.0, h = h0;
    int negligible = 0;
    for (int p = 0; p < max_panels; ++p) {
        R lo = gl_panel(f, t, t + h, 24);
        R hi = gl_panel(f, t, t + h, 32);
        acc.add(hi);
        err += std::abs(hi - lo);
        t += h;
        h = std::min(h * 1.6, cap);
        const double mag = std::max(1.0, std::abs(acc.value()));
        if (std::abs(hi) <= 0.05 * tol * mag) {
            if (++negligible >= 3) {
                if (err > tol * mag)
                    throw convergence_error("integrate_decaying: panel error above tolerance");
                return acc.value();
            }
        } else {
            negligible = 0;
        }
    }
    throw convergence_error("integrate_decaying: panel cap reached");
}

/// Chebyshev-Lobatto points on [0, X], endpoints included.
inline std::vector<double> chebyshev_points(double X, int n) {
    if (n < 2) throw precondition_error("chebyshev_points: need n >= 2");
    std::vector<double> pts(n);
    for (int k = 0; k < n; ++k)
        pts[k] = 0.5 * X * (1.0 - std::cos(std::numbers::pi * k / (n - 1)));
    return pts;
}

} // namespace lapsum
