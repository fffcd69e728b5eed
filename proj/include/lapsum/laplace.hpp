#pragma once

#include <algorithm>
#include <numbers>
#include <optional>
#include <sstream>

#include "lapsum/function_expr.hpp"
#include "lapsum/rectangle.hpp"

namespace lapsum {

/// Closed axis-aligned box in the transform plane, used to certify that a
/// whole region lies inside a continuation domain.
struct Box {
    double re_lo, re_hi, im_lo, im_hi;
};

namespace detail {

inline std::string fmt_complex(Complex z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

} // namespace detail

/// Checks that the transform of f is analytic on the closed box; returns a
/// description of the offending pole or branch point otherwise.
inline std::optional<std::string> domain_violation(const FunctionExpr& f, Box b) {
    return std::visit(
        [&](const auto& n) -> std::optional<std::string> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExpSumNode>) {
                for (const auto& t : n.sum.terms()) {
                    if (t.node.real() >= b.re_lo && t.node.real() <= b.re_hi &&
                        t.node.imag() >= b.im_lo && t.node.imag() <= b.im_hi)
                        return "pole at " + detail::fmt_complex(t.node);
                }
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, BumpNode>) {
                return std::nullopt; // entire
            } else if constexpr (std::is_same_v<T, PowerDecayNode>) {
                if (b.im_lo <= 0.0 && b.im_hi >= 0.0 && b.re_lo <= 0.0)
                    return "branch cut (-inf, 0]";
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, DilatedNode>) {
                double s = 1.0 + n.lambda;
                return domain_violation(*n.inner, {b.re_lo / s, b.re_hi / s,
                                                   b.im_lo / s, b.im_hi / s});
            } else if constexpr (std::is_same_v<T, WindowedNode>) {
                return domain_violation(*n.inner,
                                        {b.re_lo, b.re_hi, b.im_lo - n.lambda,
                                         b.im_hi + n.lambda});
            } else if constexpr (std::is_same_v<T, MollifiedNode>) {
                return domain_violation(*n.inner, b);
            } else if constexpr (std::is_same_v<T, DampedNode>) {
                return domain_violation(*n.inner, {b.re_lo + n.h, b.re_hi + n.h,
                                                   b.im_lo, b.im_hi});
            } else if constexpr (std::is_same_v<T, SineModulatedNode>) {
                auto lo = domain_violation(
                    *n.inner, {b.re_lo, b.re_hi, b.im_lo - n.b, b.im_hi - n.b});
                if (lo) return lo;
                return domain_violation(
                    *n.inner, {b.re_lo, b.re_hi, b.im_lo + n.b, b.im_hi + n.b});
            } else {
                for (const auto& [a, g] : n.parts) {
                    (void)a;
                    if (auto v = domain_violation(*g, b)) return v;
                }
                return std::nullopt;
            }
        },
        f.node());
}

inline std::optional<std::string> domain_violation(const FunctionExpr& f,
                                                   Complex s) {
    return domain_violation(f, {s.real(), s.real(), s.imag(), s.imag()});
}

inline void require_rect_in_domain(const FunctionExpr& f, const Rectangle& rect) {
    if (auto v = domain_violation(
            f, {rect.alpha, Rectangle::right_edge, -rect.r, rect.r}))
        throw precondition_error("rectangle not inside continuation domain: " + *v);
}

Complex laplace(const FunctionExpr& f, Complex s);

namespace detail {

inline Complex laplace_bump(const BumpNode& n, Complex s) {
    double T = n.support;
    double hint = 6.0 / (1.0 + std::abs(s));
    return integrate_adaptive(
        [&](double x) { return bump_value(n, x) * std::exp(-s * x); }, 0.0, T,
        1e-12, 24, std::min(T, hint));
}

/// Transform of the scaled mollifier (support [0, lambda], unit integral);
/// entire in s.
inline Complex laplace_mollifier(double lambda, Complex s) {
    const auto& m = Mollifier::standard();
    double hint = 6.0 / (1.0 + lambda * std::abs(s));
    return integrate_adaptive(
        [&](double u) { return m.value(u) * std::exp(-s * lambda * u); }, 0.0,
        1.0, 1e-12, 24, std::min(1.0, hint));
}

/// Transform of (c + x)^{-p} continued off the cut (-inf, 0] by integrating
/// along the rotated ray x = t exp(i theta).
inline Complex laplace_power_decay(const PowerDecayNode& n, Complex s) {
    if (s.imag() == 0.0 && s.real() <= 0.0)
        throw precondition_error(
            "PowerDecay transform: point on the branch cut (-inf, 0]");
    const double cap = std::numbers::pi / 2.0 - 0.1;
    double theta = std::clamp(-std::arg(s) / 2.0, -cap, cap);
    Complex dir = std::polar(1.0, theta);
    Complex z = s * dir;
    double a = z.real();
    if (a <= 1e-7)
        throw convergence_error(
            "PowerDecay transform: point too close to the branch cut");
    double omega = std::abs(z.imag());
    double period = omega > 0.0 ? 2.0 * std::numbers::pi / omega : 0.0;
    double h0 = std::min(n.c, 1.0 / (1.0 + std::abs(z)));
    Complex v = integrate_decaying(
        [&](double t) {
            return std::pow(n.c + t * dir, -n.p) * std::exp(-z * t);
        },
        8.0 * h0, period, 1e-11);
    return dir * v;
}

inline Complex laplace_windowed(const WindowedNode& n, Complex s) {
    if (auto v = domain_violation(*n.inner, Box{s.real(), s.real(),
                                                s.imag() - n.lambda,
                                                s.imag() + n.lambda}))
        throw precondition_error(
            "Windowed transform: integration segment leaves inner domain: " + *v);
    const auto& w = Window::standard();
    // (1/2 pi) Integral over u in [-1,1] of L{inner; s + i lambda u} hat(u)
    const Complex I(0.0, 1.0);
    auto g = [&](double u) {
        return laplace(*n.inner, s + I * (n.lambda * u)) * w.hat(u);
    };
    int order = 128;
    Complex prev = gl_panel(g, -1.0, 1.0, order);
    for (int k = 0; k < 6; ++k) {
        order *= 2;
        Complex cur = gl_panel(g, -1.0, 1.0, order);
        if (std::abs(cur - prev) <= 1e-10 * std::max(1.0, std::abs(cur)))
            return cur / (2.0 * std::numbers::pi);
        prev = cur;
    }
    throw convergence_error("Windowed transform: quadrature did not settle");
}

} // namespace detail

/// Laplace transform with the analytic continuation appropriate to each
/// representation.
inline Complex laplace(const FunctionExpr& f, Complex s) {
    return std::visit(
        [&](const auto& n) -> Complex {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExpSumNode>) {
                return n.sum.transform(s);
            } else if constexpr (std::is_same_v<T, BumpNode>) {
                return detail::laplace_bump(n, s);
            } else if constexpr (std::is_same_v<T, PowerDecayNode>) {
                return detail::laplace_power_decay(n, s);
            } else if constexpr (std::is_same_v<T, DilatedNode>) {
                double sc = 1.0 + n.lambda;
                return laplace(*n.inner, s / sc) / sc;
            } else if constexpr (std::is_same_v<T, WindowedNode>) {
                return detail::laplace_windowed(n, s);
            } else if constexpr (std::is_same_v<T, MollifiedNode>) {
                return laplace(*n.inner, s) * detail::laplace_mollifier(n.lambda, s);
            } else if constexpr (std::is_same_v<T, DampedNode>) {
                return laplace(*n.inner, s + n.h);
            } else if constexpr (std::is_same_v<T, SineModulatedNode>) {
                const Complex I(0.0, 1.0);
                return (laplace(*n.inner, s - I * n.b) -
                        laplace(*n.inner, s + I * n.b)) /
                       (2.0 * I);
            } else {
                CompensatedSum<Complex> acc;
                for (const auto& [a, g] : n.parts) acc.add(a * laplace(*g, s));
                return acc.value();
            }
        },
        f.node());
}

} // namespace lapsum
