#pragma once

#include <vector>

#include "lapsum/laplace.hpp"

namespace lapsum {

struct DerivSup {
    double value;  // max of grid maximum and tail envelope
    double tail;   // envelope bound beyond the cutoff
    double cutoff;
    int grid_n;
};

/// Sup of |f'| over [0, inf) as max(grid scan on [0, X], envelope at X).
/// Chebyshev-spaced grid, doubled until the scan changes by < 1e-8.
inline DerivSup sup_deriv_norm(const FunctionExpr& f, double X, int grid_n) {
    if (!(X > 0.0)) throw precondition_error("sup_deriv_norm: X must be > 0");
    if (grid_n < 2) throw precondition_error("sup_deriv_norm: grid_n >= 2");
    double tail = envelope_deriv(f, X);
    double prev = -1.0;
    int n = grid_n;
    double gmax = 0.0;
    while (true) {
        gmax = 0.0;
        for (double x : chebyshev_points(X, n))
            gmax = std::max(gmax, std::abs(eval_deriv_c(f, x)));
        if (prev >= 0.0 && std::abs(gmax - prev) < 1e-8) break;
        prev = gmax;
        if (n >= (1 << 20)) break;
        n *= 2;
    }
    return {std::max(gmax, tail), tail, X, n};
}

struct RectSup {
    double value;
    int boundary_n; // final points per edge
    std::vector<std::pair<int, double>> history;
};

/// Sup of |L{f}| over the closed rectangle, sampled on the boundary only;
/// valid because the transform is analytic on a neighborhood of the
/// rectangle once the domain check passes, so the maximum sits on the
/// boundary.
inline RectSup rect_sup_scan(const FunctionExpr& f, const Rectangle& rect,
                             int boundary_n) {
    if (boundary_n < 16)
        throw precondition_error("rect_sup_norm: boundary_n must be >= 16");
    require_rect_in_domain(f, rect);

    auto edge_max = [&](Complex a, Complex b, int n) {
        double m = 0.0;
        for (double t : chebyshev_points(1.0, n)) {
            Complex s = a + t * (b - a);
            m = std::max(m, std::abs(laplace(f, s)));
        }
        return m;
    };

    const double al = rect.alpha, re = Rectangle::right_edge, r = rect.r;
    const Complex c1(al, -r), c2(re, -r), c3(re, r), c4(al, r);

    RectSup out;
    int n = boundary_n;
    double prev = -1.0;
    while (true) {
        double m = std::max({edge_max(c1, c2, n), edge_max(c2, c3, n),
                             edge_max(c3, c4, n), edge_max(c4, c1, n)});
        out.history.emplace_back(4 * n, m);
        out.value = m;
        out.boundary_n = n;
        if (prev >= 0.0 && std::abs(m - prev) < 1e-8) break;
        prev = m;
        if (n >= (1 << 18)) break;
        n *= 2;
    }
    return out;
}

inline double rect_sup_norm(const FunctionExpr& f, const Rectangle& rect,
                            int boundary_n = 16) {
    return rect_sup_scan(f, rect, boundary_n).value;
}

struct NormReport {
    double deriv_sup = 0.0;
    double rect_sup = 0.0;
    double total = 0.0;
    double deriv_cutoff = 0.0;
    double deriv_tail_bound = 0.0;
    int deriv_grid_n = 0;
    int boundary_grid_size = 0;
    std::vector<std::pair<int, double>> refinement_history;
};

namespace detail {

/// Cutoff policy: extend until the derivative envelope is negligible in
/// absolute terms or against the scale already seen on a coarse scan.
inline double choose_deriv_cutoff(const FunctionExpr& f) {
    double coarse = 0.0;
    for (double x : chebyshev_points(32.0, 129))
        coarse = std::max(coarse, std::abs(eval_deriv_c(f, x)));
    double X = 32.0;
    while (X < 16384.0) {
        double e = envelope_deriv(f, X);
        if (e <= 1e-10 || e <= 1e-6 * std::max(coarse, 1e-30)) break;
        X *= 2.0;
    }
    return X;
}

} // namespace detail

/// The norm: sup |f'| plus the rectangle sup of the transform.
inline NormReport v_norm(const FunctionExpr& f, double alpha, double r,
                         int deriv_grid_n = 512, int boundary_n = 16) {
    Rectangle rect(alpha, r);
    double X = detail::choose_deriv_cutoff(f);
    DerivSup ds = sup_deriv_norm(f, X, deriv_grid_n);
    RectSup rs = rect_sup_scan(f, rect, boundary_n);
    NormReport rep;
    rep.deriv_sup = ds.value;
    rep.rect_sup = rs.value;
    rep.total = ds.value + rs.value;
    rep.deriv_cutoff = ds.cutoff;
    rep.deriv_tail_bound = ds.tail;
    rep.deriv_grid_n = ds.grid_n;
    rep.boundary_grid_size = 4 * rs.boundary_n;
    rep.refinement_history = rs.history;
    return rep;
}

/// Norm bound for the exponential atom with node on a vertical ray
/// Re zeta = -h, |Im zeta| >= r' > r:  1/(r'-r) + h + |Im zeta|.
inline double exp_atom_norm_bound(Complex zeta, double alpha, double r,
                                  double r_prime, double h) {
    if (!(alpha < 0.0)) throw precondition_error("atom bound: alpha must be < 0");
    if (!(r > 0.0 && r_prime > r))
        throw precondition_error("atom bound: need r' > r > 0");
    if (!(h > 0.0)) throw precondition_error("atom bound: h must be > 0");
    if (std::abs(zeta.real() + h) > 1e-9)
        throw precondition_error("atom bound: node must satisfy Re zeta = -h");
    if (std::abs(zeta.imag()) < r_prime - 1e-12)
        throw precondition_error("atom bound: node must satisfy |Im zeta| >= r'");
    return 1.0 / (r_prime - r) + h + std::abs(zeta.imag());
}

/// Laplace-Stieltjes transform of dS for S(x) = (tau(x) + a) e^x, with the
/// convention S(0-) = a, so the atom at 0 has mass tau(0):
///   L{dS; s} = s L{tau; s-1} + a/(s-1).
inline Complex stieltjes_transform(const FunctionExpr& tau, double a, Complex s) {
    if (s == Complex(1.0, 0.0))
        throw precondition_error("stieltjes_transform: s = 1 is the explicit pole");
    return s * laplace(tau, s - 1.0) + a / (s - 1.0);
}

/// Least a >= 0 making x -> (tau(x) + a) e^x non-decreasing at grid
/// resolution: max(0, -grid min of tau + tau', tail envelope).
inline double monotone_margin(const FunctionExpr& tau, double X, int grid_n) {
    if (!is_real_valued(tau))
        throw precondition_error("monotone_margin: tau must be real-valued");
    if (!(X > 0.0) || grid_n < 2)
        throw precondition_error("monotone_margin: bad grid parameters");
    double tail = envelope_value(tau, X) + envelope_deriv(tau, X);
    int n = grid_n;
    double gmin = 0.0, prev = std::numeric_limits<double>::infinity();
    while (true) {
        gmin = std::numeric_limits<double>::infinity();
        for (double x : chebyshev_points(X, n))
            gmin = std::min(gmin,
                            eval_c(tau, x).real() + eval_deriv_c(tau, x).real());
        if (std::isfinite(prev) && std::abs(gmin - prev) < 1e-9) break;
        prev = gmin;
        if (n >= (1 << 20)) break;
        n *= 2;
    }
    return std::max({0.0, -gmin, tail});
}

} // namespace lapsum
