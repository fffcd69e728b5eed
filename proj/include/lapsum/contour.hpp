#pragma once

#include <optional>

#include "lapsum/norms.hpp"

namespace lapsum {

enum class ContourSegment : int {
    RayLower = 0,
    EdgeBottom = 1,
    EdgeLeftLower = 2,
    EdgeLeftUpper = 3,
    EdgeTop = 4,
    RayUpper = 5,
};

struct ContourNode {
    Complex zeta;
    Complex weight; // includes the d-zeta direction
    ContourSegment segment;
};

/// Truncated integration contour: two vertical rays at Re = -h glued to the
/// left part of the boundary of [alpha', 1] x i[-r', r'], cut at
/// |Im| = xi, oriented upward with the analyticity domain on the right.
/// Node placement is mirror-symmetric under conjugation; the mirror of node
/// k is node (size - 1 - k) with weight -conj(w).
struct ContourSpec {
    double h = 0.0;
    double alpha_prime = 0.0;
    double r_prime = 0.0;
    double xi = 0.0;
    int nodes_per_unit = 0;
    std::vector<ContourNode> nodes;
};

namespace detail {

// Gauss-Legendre panels of fixed order along straight segments; panels
// never straddle corners because each segment is paneled on its own.
constexpr int kContourPanelOrder = 10;
constexpr double kContourPanelScale = 8.0;

inline void panel_segment(std::vector<ContourNode>& out, Complex a, Complex b,
                          ContourSegment seg, double panel_len) {
    double len = std::abs(b - a);
    int panels = std::max(1, static_cast<int>(std::ceil(len / panel_len)));
    const auto& rule = gauss_legendre(kContourPanelOrder);
    Complex dir = (b - a) / len;
    double ph = len / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = p * ph;
        double mid = lo + 0.5 * ph;
        for (int i = 0; i < kContourPanelOrder; ++i) {
            double t = mid + 0.5 * ph * rule.nodes[i];
            out.push_back({a + t * dir, dir * (0.5 * ph * rule.weights[i]), seg});
        }
    }
}

} // namespace detail

inline ContourSpec build_gamma(double h, double alpha_prime, double r_prime,
                               double xi, int nodes_per_unit) {
    if (!(h > 0.0 && h < -alpha_prime))
        throw precondition_error("build_gamma: need 0 < h < -alpha'");
    if (!(r_prime > 0.0))
        throw precondition_error("build_gamma: r' must be > 0");
    if (!(xi > r_prime))
        throw precondition_error("build_gamma: truncation must exceed r'");
    if (nodes_per_unit < 1)
        throw precondition_error("build_gamma: nodes_per_unit must be >= 1");

    ContourSpec spec;
    spec.h = h;
    spec.alpha_prime = alpha_prime;
    spec.r_prime = r_prime;
    spec.xi = xi;
    spec.nodes_per_unit = nodes_per_unit;

    const double panel_len = detail::kContourPanelScale / nodes_per_unit;
    const Complex I(0.0, 1.0);

    // upper half in traversal order
    std::vector<ContourNode> upper;
    detail::panel_segment(upper, Complex(alpha_prime, 0.0),
                          Complex(alpha_prime, r_prime),
                          ContourSegment::EdgeLeftUpper, panel_len);
    detail::panel_segment(upper, Complex(alpha_prime, r_prime),
                          Complex(-h, r_prime), ContourSegment::EdgeTop,
                          panel_len);
    detail::panel_segment(upper, Complex(-h, r_prime), Complex(-h, xi),
                          ContourSegment::RayUpper, panel_len);

    // lower half is the conjugate mirror traversed first
    auto mirror_segment = [](ContourSegment s) {
        switch (s) {
            case ContourSegment::EdgeLeftUpper: return ContourSegment::EdgeLeftLower;
            case ContourSegment::EdgeTop: return ContourSegment::EdgeBottom;
            case ContourSegment::RayUpper: return ContourSegment::RayLower;
            default: return s;
        }
    };
    spec.nodes.reserve(2 * upper.size());
    for (auto it = upper.rbegin(); it != upper.rend(); ++it)
        spec.nodes.push_back({std::conj(it->zeta), -std::conj(it->weight),
                              mirror_segment(it->segment)});
    spec.nodes.insert(spec.nodes.end(), upper.begin(), upper.end());
    return spec;
}

namespace detail {

inline const DampedNode& require_damped(const FunctionExpr& f, double h) {
    const auto* d = std::get_if<DampedNode>(&f.node());
    if (!d)
        throw precondition_error("contour input must be a damped expression");
    if (std::abs(d->h - h) > 1e-12)
        throw precondition_error(
            "contour input damping does not match contour h");
    return *d;
}

inline double require_c4(const FunctionExpr& undamped) {
    auto c4 = fourier_decay_c4(undamped);
    if (!c4)
        throw precondition_error("missing smoothness certificate for the "
                                 "transform decay on vertical lines");
    return *c4;
}

} // namespace detail

/// Transform values at the contour nodes. For real-valued f only the upper
/// half is evaluated; the lower half is filled by conjugation.
inline std::vector<Complex> contour_transform_samples(const FunctionExpr& f,
                                                      const ContourSpec& spec) {
    detail::require_damped(f, spec.h);
    const std::size_t n = spec.nodes.size();
    std::vector<Complex> vals(n);
    if (is_real_valued(f)) {
        for (std::size_t k = n / 2; k < n; ++k)
            vals[k] = laplace(f, spec.nodes[k].zeta);
        for (std::size_t k = 0; k < n / 2; ++k)
            vals[k] = std::conj(vals[n - 1 - k]);
    } else {
        for (std::size_t k = 0; k < n; ++k)
            vals[k] = laplace(f, spec.nodes[k].zeta);
    }
    return vals;
}

struct CauchyResidual {
    double residual;
    double tail_budget; // bound on the discarded ray contribution
};

/// Residual of the reproducing integral: the transform at s against the
/// discretized contour integral of L / (s - zeta).
inline CauchyResidual cauchy_check(const FunctionExpr& f, const ContourSpec& spec,
                                   Complex s,
                                   const std::vector<Complex>* samples = nullptr) {
    const auto& damped = detail::require_damped(f, spec.h);
    double c4 = detail::require_c4(*damped.inner);

    const bool in_halfplane = s.real() > -spec.h + 1e-9;
    const bool in_pocket = s.real() > spec.alpha_prime + 1e-9 &&
                           s.real() <= -spec.h + 1e-9 &&
                           std::abs(s.imag()) < spec.r_prime - 1e-9;
    if (!in_halfplane && !in_pocket)
        throw precondition_error("cauchy_check: s on or left of the contour");

    std::vector<Complex> local;
    if (!samples) {
        local = contour_transform_samples(f, spec);
        samples = &local;
    }
    const Complex inv_2pi_i(0.0, -1.0 / (2.0 * std::numbers::pi));
    CompensatedSum<Complex> acc;
    for (std::size_t k = 0; k < spec.nodes.size(); ++k)
        acc.add(spec.nodes[k].weight * (*samples)[k] / (s - spec.nodes[k].zeta));
    Complex rhs = acc.value() * inv_2pi_i;
    Complex lhs = laplace(f, s);

    double d_upper = std::hypot(s.real() + spec.h, std::max(0.0, spec.xi - s.imag()));
    double d_lower = std::hypot(s.real() + spec.h, std::max(0.0, spec.xi + s.imag()));
    double dmin = std::max(1e-12, std::min(d_upper, d_lower));
    double tail = c4 / (std::numbers::pi * dmin * 3.0 * spec.xi * spec.xi * spec.xi);

    return {std::abs(lhs - rhs), tail};
}

/// Bound on the norm contribution of the rays beyond the truncation,
/// integrating the transform-decay certificate against the atom norm bound
/// 1/(r'-r) + h + |Im zeta|.
inline double ray_tail_bound(const FunctionExpr& f, const ContourSpec& spec,
                             double r) {
    const auto& damped = detail::require_damped(f, spec.h);
    double c4 = detail::require_c4(*damped.inner);
    if (!(r > 0.0 && r < spec.r_prime))
        throw precondition_error("ray_tail_bound: need 0 < r < r'");
    double K = 1.0 / (spec.r_prime - r) + spec.h;
    double xi3 = spec.xi * spec.xi * spec.xi;
    return (c4 / std::numbers::pi) *
           (K / (3.0 * xi3) + 1.0 / (2.0 * spec.xi * spec.xi));
}

struct Reconstruction {
    ExpSum expsum;
    double tail_bound = 0.0;
    std::optional<double> quad_error_estimate;
};

/// Discretizes the contour representation of f into an exponential sum with
/// coefficients w_k L_k / (2 pi i). Every node keeps Re zeta <= -h.
inline Reconstruction contour_to_expsum(const FunctionExpr& f,
                                        const ContourSpec& spec, double r,
                                        const std::vector<Complex>* samples = nullptr,
                                        bool with_error_estimate = true) {
    std::vector<Complex> local;
    if (!samples) {
        local = contour_transform_samples(f, spec);
        samples = &local;
    }
    const Complex inv_2pi_i(0.0, -1.0 / (2.0 * std::numbers::pi));
    std::vector<ExpTerm> terms;
    terms.reserve(spec.nodes.size());
    for (std::size_t k = 0; k < spec.nodes.size(); ++k) {
        Complex c = spec.nodes[k].weight * (*samples)[k] * inv_2pi_i;
        if (c == Complex(0.0, 0.0)) continue;
        terms.push_back({spec.nodes[k].zeta, c, 0});
    }
    Reconstruction out;
    out.expsum = ExpSum::create(std::move(terms), is_real_valued(f));
    out.tail_bound = ray_tail_bound(f, spec, r);

    if (with_error_estimate && spec.nodes_per_unit >= 2) {
        ContourSpec half = build_gamma(spec.h, spec.alpha_prime, spec.r_prime,
                                       spec.xi, spec.nodes_per_unit / 2);
        Reconstruction coarse = contour_to_expsum(f, half, r, nullptr, false);
        double m = 0.0;
        for (int i = 0; i <= 256; ++i) {
            double x = 20.0 * i / 256.0;
            m = std::max(m, std::abs(out.expsum.value(x) - coarse.expsum.value(x)));
        }
        out.quad_error_estimate = m;
    }
    return out;
}

/// Doubles the truncation until the ray tail bound is a tenth of the target
/// tolerance; capped, since the certificate constants are conservative.
inline double choose_truncation(const FunctionExpr& f, double h,
                                double alpha_prime, double r_prime, double r,
                                double target_tol, double cap = 512.0) {
    const auto& damped = detail::require_damped(f, h);
    double c4 = detail::require_c4(*damped.inner);
    double K = 1.0 / (r_prime - r) + h;
    double xi = std::max(8.0, 2.0 * r_prime);
    (void)alpha_prime;
    while (xi < cap) {
        double bound = (c4 / std::numbers::pi) *
                       (K / (3.0 * xi * xi * xi) + 1.0 / (2.0 * xi * xi));
        if (bound <= 0.1 * target_tol) break;
        xi *= 2.0;
    }
    return std::min(xi, cap);
}

} // namespace lapsum
