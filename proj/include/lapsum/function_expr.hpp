#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lapsum/expsum.hpp"
#include "lapsum/smoothing.hpp"

namespace lapsum {

class FunctionExpr;
using FnPtr = std::shared_ptr<const FunctionExpr>;

struct ExpSumNode {
    ExpSum sum;
};

/// Closed-form C1 bump amplitude * (4x(T-x)/T^2)^2 supported on [0, T];
/// vanishes to first order at both endpoints.
struct BumpNode {
    double support;
    double amplitude;
};

/// x -> (c + x)^{-p} with p in (0,1), c > 0.
struct PowerDecayNode {
    double p;
    double c;
};

struct DilatedNode {
    FnPtr inner;
    double lambda; // x -> inner((1 + lambda) x)
};

struct WindowedNode {
    FnPtr inner;
    double lambda;
    std::string window_id; // only "bump_hat"
};

struct MollifiedNode {
    FnPtr inner;
    double lambda;
    std::string mollifier_id; // only "bump01"
};

struct DampedNode {
    FnPtr inner;
    double h; // x -> exp(-h x) inner(x)
};

struct SineModulatedNode {
    FnPtr inner;
    double b; // x -> inner(x) sin(b x)
};

/// Real linear combination of sub-expressions; closes the algebra under
/// differences so norm certification can act on target - approximation.
struct SumNode {
    std::vector<std::pair<double, FnPtr>> parts;
};

class FunctionExpr {
public:
    using Node = std::variant<ExpSumNode, BumpNode, PowerDecayNode,
                              DilatedNode, WindowedNode, MollifiedNode,
                              DampedNode, SineModulatedNode, SumNode>;

    explicit FunctionExpr(Node n) : node_(std::move(n)) {}
    const Node& node() const { return node_; }

private:
    Node node_;
};

inline FnPtr share(FunctionExpr f) {
    return std::make_shared<const FunctionExpr>(std::move(f));
}

// ---- constructors ----------------------------------------------------

inline FunctionExpr make_expsum(ExpSum s) {
    return FunctionExpr(ExpSumNode{std::move(s)});
}

inline FunctionExpr make_zero() { return make_expsum(ExpSum{}); }

inline FunctionExpr make_bump(double support, double amplitude = 1.0) {
    if (!(support > 0.0))
        throw precondition_error("make_bump: support must be > 0");
    return FunctionExpr(BumpNode{support, amplitude});
}

inline FunctionExpr make_power_decay(double p, double c) {
    if (!(p > 0.0 && p < 1.0))
        throw precondition_error("make_power_decay: exponent must be in (0,1)");
    if (!(c > 0.0))
        throw precondition_error("make_power_decay: shift must be > 0");
    return FunctionExpr(PowerDecayNode{p, c});
}

inline FunctionExpr dilate(FunctionExpr f, double lambda) {
    if (!(lambda > 0.0)) throw precondition_error("dilate: lambda must be > 0");
    return FunctionExpr(DilatedNode{share(std::move(f)), lambda});
}

inline FunctionExpr window(FunctionExpr f, double lambda) {
    if (!(lambda > 0.0)) throw precondition_error("window: lambda must be > 0");
    return FunctionExpr(WindowedNode{share(std::move(f)), lambda, "bump_hat"});
}

inline FunctionExpr mollify(FunctionExpr f, double lambda) {
    if (!(lambda > 0.0)) throw precondition_error("mollify: lambda must be > 0");
    return FunctionExpr(MollifiedNode{share(std::move(f)), lambda, "bump01"});
}

inline FunctionExpr damp(FunctionExpr f, double h) {
    if (!(h > 0.0)) throw precondition_error("damp: h must be > 0");
    return FunctionExpr(DampedNode{share(std::move(f)), h});
}

inline FunctionExpr sine_modulate(FunctionExpr f, double b) {
    if (!(b > 0.0)) throw precondition_error("sine_modulate: b must be > 0");
    return FunctionExpr(SineModulatedNode{share(std::move(f)), b});
}

inline FunctionExpr lincomb(std::vector<std::pair<double, FunctionExpr>> parts) {
    SumNode n;
    n.parts.reserve(parts.size());
    for (auto& [a, f] : parts) n.parts.emplace_back(a, share(std::move(f)));
    return FunctionExpr(std::move(n));
}

inline FunctionExpr difference(FunctionExpr a, FunctionExpr b) {
    return lincomb({{1.0, std::move(a)}, {-1.0, std::move(b)}});
}

// ---- evaluation ------------------------------------------------------

Complex eval_c(const FunctionExpr& f, double x);
Complex eval_deriv_c(const FunctionExpr& f, double x);

namespace detail {

inline void require_nonnegative(double x) {
    if (!(x >= 0.0))
        throw precondition_error("evaluation point must satisfy x >= 0");
}

inline double bump_value(const BumpNode& n, double x) {
    if (x <= 0.0 || x >= n.support) return 0.0;
    double u = 4.0 * x * (n.support - x) / (n.support * n.support);
    return n.amplitude * u * u;
}

inline double bump_deriv(const BumpNode& n, double x) {
    if (x <= 0.0 || x >= n.support) return 0.0;
    double T = n.support;
    double u = 4.0 * x * (T - x) / (T * T);
    double du = 4.0 * (T - 2.0 * x) / (T * T);
    return n.amplitude * 2.0 * u * du;
}

inline Complex mollified_value(const MollifiedNode& n, double x) {
    const auto& m = Mollifier::standard();
    double top = std::min(1.0, x / n.lambda);
    if (top <= 0.0) return 0.0;
    return integrate_adaptive(
        [&](double v) { return eval_c(*n.inner, x - n.lambda * v) * m.value(v); },
        0.0, top, 1e-12, 64);
}

inline Complex mollified_deriv(const MollifiedNode& n, double x) {
    const auto& m = Mollifier::standard();
    double top = std::min(1.0, x / n.lambda);
    Complex v = 0.0;
    if (top > 0.0)
        v = integrate_adaptive(
            [&](double u) {
                return eval_deriv_c(*n.inner, x - n.lambda * u) * m.value(u);
            },
            0.0, top, 1e-12, 64);
    // boundary term from the zero extension left of 0
    if (x < n.lambda)
        v += eval_c(*n.inner, 0.0) * m.value(x / n.lambda) / n.lambda;
    return v;
}

} // namespace detail

inline Complex eval_c(const FunctionExpr& f, double x) {
    detail::require_nonnegative(x);
    return std::visit(
        [&](const auto& n) -> Complex {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExpSumNode>) {
                Complex v = n.sum.value(x);
                return n.sum.real_part() ? Complex(v.real(), 0.0) : v;
            } else if constexpr (std::is_same_v<T, BumpNode>) {
                return detail::bump_value(n, x);
            } else if constexpr (std::is_same_v<T, PowerDecayNode>) {
                return std::pow(n.c + x, -n.p);
            } else if constexpr (std::is_same_v<T, DilatedNode>) {
                return eval_c(*n.inner, (1.0 + n.lambda) * x);
            } else if constexpr (std::is_same_v<T, WindowedNode>) {
                return eval_c(*n.inner, x) * Window::standard().value(n.lambda * x);
            } else if constexpr (std::is_same_v<T, MollifiedNode>) {
                return detail::mollified_value(n, x);
            } else if constexpr (std::is_same_v<T, DampedNode>) {
                return std::exp(-n.h * x) * eval_c(*n.inner, x);
            } else if constexpr (std::is_same_v<T, SineModulatedNode>) {
                return eval_c(*n.inner, x) * std::sin(n.b * x);
            } else {
                CompensatedSum<Complex> acc;
                for (const auto& [a, g] : n.parts) acc.add(a * eval_c(*g, x));
                return acc.value();
            }
        },
        f.node());
}

inline Complex eval_deriv_c(const FunctionExpr& f, double x) {
    detail::require_nonnegative(x);
    return std::visit(
        [&](const auto& n) -> Complex {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExpSumNode>) {
                Complex v = n.sum.derivative(x);
                return n.sum.real_part() ? Complex(v.real(), 0.0) : v;
            } else if constexpr (std::is_same_v<T, BumpNode>) {
                return detail::bump_deriv(n, x);
            } else if constexpr (std::is_same_v<T, PowerDecayNode>) {
                return -n.p * std::pow(n.c + x, -n.p - 1.0);
            } else if constexpr (std::is_same_v<T, DilatedNode>) {
                return (1.0 + n.lambda) * eval_deriv_c(*n.inner, (1.0 + n.lambda) * x);
            } else if constexpr (std::is_same_v<T, WindowedNode>) {
                const auto& w = Window::standard();
                return eval_deriv_c(*n.inner, x) * w.value(n.lambda * x) +
                       n.lambda * eval_c(*n.inner, x) * w.deriv(n.lambda * x);
            } else if constexpr (std::is_same_v<T, MollifiedNode>) {
                return detail::mollified_deriv(n, x);
            } else if constexpr (std::is_same_v<T, DampedNode>) {
                return std::exp(-n.h * x) *
                       (eval_deriv_c(*n.inner, x) - n.h * eval_c(*n.inner, x));
            } else if constexpr (std::is_same_v<T, SineModulatedNode>) {
                return eval_deriv_c(*n.inner, x) * std::sin(n.b * x) +
                       n.b * eval_c(*n.inner, x) * std::cos(n.b * x);
            } else {
                CompensatedSum<Complex> acc;
                for (const auto& [a, g] : n.parts) acc.add(a * eval_deriv_c(*g, x));
                return acc.value();
            }
        },
        f.node());
}

inline double eval(const FunctionExpr& f, double x) { return eval_c(f, x).real(); }

inline double eval_deriv(const FunctionExpr& f, double x) {
    return eval_deriv_c(f, x).real();
}

// ---- decay envelopes -------------------------------------------------

/// Nonincreasing bound for |f| on [x, inf), tending to 0.
inline double envelope_value(const FunctionExpr& f, double x) {
    detail::require_nonnegative(x);
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExpSumNode>) {
                return n.sum.envelope_value(x);
            } else if constexpr (std::is_same_v<T, BumpNode>) {
                if (x >= n.support) return 0.0;
                if (x >= 0.5 * n.support) return detail::bump_value(n, x);
                return std::abs(n.amplitude);
            } else if constexpr (std::is_same_v<T, PowerDecayNode>) {
                return std::pow(n.c + x, -n.p);
            } else if constexpr (std::is_same_v<T, DilatedNode>) {
                return envelope_value(*n.inner, (1.0 + n.lambda) * x);
            } else if constexpr (std::is_same_v<T, WindowedNode>) {
                return envelope_value(*n.inner, x);
            } else if constexpr (std::is_same_v<T, MollifiedNode>) {
                return envelope_value(*n.inner, std::max(0.0, x - n.lambda));
            } else if constexpr (std::is_same_v<T, DampedNode>) {
                return std::exp(-n.h * x) * envelope_value(*n.inner, x);
            } else if constexpr (std::is_same_v<T, SineModulatedNode>) {
                return envelope_value(*n.inner, x);
            } else {
                double e = 0.0;
                for (const auto& [a, g] : n.parts)
                    e += std::abs(a) * envelope_value(*g, x);
                return e;
            }
        },
        f.node());
}

/// Nonincreasing bound for |f'| on [x, inf), tending to 0.
inline double envelope_deriv(const FunctionExpr& f, double x) {
    detail::require_nonnegative(x);
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExpSumNode>) {
                return n.sum.envelope_derivative(x);
            } else if constexpr (std::is_same_v<T, BumpNode>) {
                if (x >= n.support) return 0.0;
                double xpeak = n.support * (3.0 + std::sqrt(3.0)) / 6.0;
                if (x >= xpeak) return std::abs(detail::bump_deriv(n, x));
                return std::abs(detail::bump_deriv(n, xpeak));
            } else if constexpr (std::is_same_v<T, PowerDecayNode>) {
                return n.p * std::pow(n.c + x, -n.p - 1.0);
            } else if constexpr (std::is_same_v<T, DilatedNode>) {
                return (1.0 + n.lambda) *
                       envelope_deriv(*n.inner, (1.0 + n.lambda) * x);
            } else if constexpr (std::is_same_v<T, WindowedNode>) {
                return envelope_deriv(*n.inner, x) +
                       n.lambda * Window::standard().deriv_sup() *
                           envelope_value(*n.inner, x);
            } else if constexpr (std::is_same_v<T, MollifiedNode>) {
                double base = envelope_deriv(*n.inner, std::max(0.0, x - n.lambda));
                // boundary term |inner(0)| * phi_lambda(y) for y >= x
                if (x < n.lambda) {
                    const auto& m = Mollifier::standard();
                    double u = x / n.lambda;
                    double peak = u >= 0.5 ? m.value(u) : m.value(0.5);
                    base += std::abs(eval_c(*n.inner, 0.0)) * peak / n.lambda;
                }
                return base;
            } else if constexpr (std::is_same_v<T, DampedNode>) {
                return std::exp(-n.h * x) * (envelope_deriv(*n.inner, x) +
                                             n.h * envelope_value(*n.inner, x));
            } else if constexpr (std::is_same_v<T, SineModulatedNode>) {
                return envelope_deriv(*n.inner, x) +
                       n.b * envelope_value(*n.inner, x);
            } else {
                double e = 0.0;
                for (const auto& [a, g] : n.parts)
                    e += std::abs(a) * envelope_deriv(*g, x);
                return e;
            }
        },
        f.node());
}

// ---- certificates ----------------------------------------------------

/// Bound on the L1 norm over [0, inf), when one exists.
inline std::optional<double> l1_norm_bound(const FunctionExpr& f) {
    return std::visit(
        [&](const auto& n) -> std::optional<double> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExpSumNode>) {
                return n.sum.l1_bound();
            } else if constexpr (std::is_same_v<T, BumpNode>) {
                return std::abs(n.amplitude) * 8.0 * n.support / 15.0;
            } else if constexpr (std::is_same_v<T, PowerDecayNode>) {
                return std::nullopt; // not integrable for p < 1
            } else if constexpr (std::is_same_v<T, DilatedNode>) {
                auto b = l1_norm_bound(*n.inner);
                if (!b) return std::nullopt;
                return *b / (1.0 + n.lambda);
            } else if constexpr (std::is_same_v<T, WindowedNode> ||
                                 std::is_same_v<T, MollifiedNode> ||
                                 std::is_same_v<T, DampedNode> ||
                                 std::is_same_v<T, SineModulatedNode>) {
                return l1_norm_bound(*n.inner);
            } else {
                double e = 0.0;
                for (const auto& [a, g] : n.parts) {
                    auto b = l1_norm_bound(*g);
                    if (!b) return std::nullopt;
                    e += std::abs(a) * *b;
                }
                return e;
            }
        },
        f.node());
}

/// Constant C with |L{f; i xi}| <= C / xi^4 on the imaginary axis; present
/// for mollified expressions, where four derivatives can be moved onto the
/// mollifier.
inline std::optional<double> fourier_decay_c4(const FunctionExpr& f) {
    return std::visit(
        [&](const auto& n) -> std::optional<double> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, MollifiedNode>) {
                auto b = l1_norm_bound(*n.inner);
                if (!b) return std::nullopt;
                double l4 = Mollifier::standard().deriv4_l1() /
                            (n.lambda * n.lambda * n.lambda * n.lambda);
                return *b * l4;
            } else if constexpr (std::is_same_v<T, DilatedNode>) {
                auto b = fourier_decay_c4(*n.inner);
                if (!b) return std::nullopt;
                double s = 1.0 + n.lambda;
                return *b * s * s * s;
            } else if constexpr (std::is_same_v<T, SumNode>) {
                double e = 0.0;
                for (const auto& [a, g] : n.parts) {
                    auto b = fourier_decay_c4(*g);
                    if (!b) return std::nullopt;
                    e += std::abs(a) * *b;
                }
                return e;
            } else if constexpr (std::is_same_v<T, ExpSumNode>) {
                return n.sum.empty() ? std::optional<double>(0.0) : std::nullopt;
            } else {
                return std::nullopt;
            }
        },
        f.node());
}

inline bool is_real_valued(const FunctionExpr& f) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExpSumNode>) {
                if (n.sum.real_part() || n.sum.empty()) return true;
                // unflagged sums are real when conjugate-closed
                for (const auto& t : n.sum.terms()) {
                    bool found = false;
                    for (const auto& u : n.sum.terms())
                        if (u.degree == t.degree && u.node == std::conj(t.node) &&
                            u.coeff == std::conj(t.coeff)) {
                            found = true;
                            break;
                        }
                    if (!found) return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, BumpNode> ||
                                 std::is_same_v<T, PowerDecayNode>) {
                return true;
            } else if constexpr (std::is_same_v<T, SumNode>) {
                for (const auto& [a, g] : n.parts)
                    if (!is_real_valued(*g)) return false;
                return true;
            } else {
                return is_real_valued(*n.inner);
            }
        },
        f.node());
}

} // namespace lapsum
