#pragma once

#include <Eigen/Dense>

#include "lapsum/contour.hpp"

namespace lapsum {

/// Admissible node set for the fitting problem: every node at least delta
/// left of beta, conjugate-closed so real targets get real fits.
struct NodeSet {
    double beta = 0.0;
    double delta = 0.0;
    std::vector<Complex> nodes;
    std::string rule;

    static NodeSet from_nodes(double beta, double delta,
                              std::vector<Complex> nodes, std::string rule) {
        if (!(beta < 0.0)) throw precondition_error("NodeSet: beta must be < 0");
        if (!(delta > 0.0)) throw precondition_error("NodeSet: delta must be > 0");
        for (Complex z : nodes)
            if (!(z.real() <= beta - delta + 1e-12))
                throw precondition_error("NodeSet: node right of beta - delta");
        if (nodes.empty()) throw precondition_error("NodeSet: empty node list");
        return {beta, delta, std::move(nodes), std::move(rule)};
    }
};

/// Vertical-line grid: lines Re = beta - delta k, k = 1..n_lines, each with
/// n_per_line equispaced imaginary parts; closed under conjugation.
inline NodeSet node_grid(double beta, double delta, int n_lines, int n_per_line,
                         double im_lo, double im_hi) {
    if (n_lines < 1 || n_per_line < 1)
        throw precondition_error("node_grid: empty grid requested");
    if (!(im_hi >= im_lo)) throw precondition_error("node_grid: bad im range");
    std::vector<Complex> nodes;
    for (int k = 1; k <= n_lines; ++k) {
        double re = beta - delta * k;
        for (int j = 0; j < n_per_line; ++j) {
            double im = n_per_line == 1
                            ? 0.5 * (im_lo + im_hi)
                            : im_lo + (im_hi - im_lo) * j / (n_per_line - 1);
            nodes.emplace_back(re, im);
        }
    }
    // conjugate closure (no-op for symmetric ranges)
    std::vector<Complex> extra;
    for (Complex z : nodes) {
        Complex zc = std::conj(z);
        bool found = false;
        for (Complex u : nodes)
            if (u == zc) { found = true; break; }
        if (!found) extra.push_back(zc);
    }
    nodes.insert(nodes.end(), extra.begin(), extra.end());
    return NodeSet::from_nodes(beta, delta, std::move(nodes), "vertical-line-grid");
}

enum class FitMethod { minimax, least_squares };

struct FitOptions {
    int deriv_samples = 160;
    int boundary_samples_per_edge = 48;
    int lawson_max_iter = 200;
    double lawson_tol = 1e-10;
    double tikhonov_rel = 1e-12;
};

struct FitResult {
    ExpSum expsum;
    double achieved_error = 0.0;     // recomputed via v_norm on the difference
    double surrogate_objective = 0.0; // max residual on the sampling grid
    double fine_objective = 0.0;      // same on a 4x finer grid
    std::vector<double> objective_trace;
    double sigma_max = 0.0;
    double sigma_min = 0.0;
    double tikhonov = 0.0;
    bool converged = true;
    double deriv_cutoff = 0.0;
    int deriv_samples = 0;
    int boundary_samples = 0;
    std::string method;
};

namespace detail {

inline double max_frequency(const FunctionExpr& f) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExpSumNode>) {
                double m = 0.0;
                for (const auto& t : n.sum.terms())
                    m = std::max(m, std::abs(t.node.imag()));
                return m;
            } else if constexpr (std::is_same_v<T, BumpNode> ||
                                 std::is_same_v<T, PowerDecayNode>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, SineModulatedNode>) {
                return max_frequency(*n.inner) + n.b;
            } else if constexpr (std::is_same_v<T, WindowedNode>) {
                return max_frequency(*n.inner) + n.lambda;
            } else if constexpr (std::is_same_v<T, SumNode>) {
                double m = 0.0;
                for (const auto& [a, g] : n.parts) {
                    (void)a;
                    m = std::max(m, max_frequency(*g));
                }
                return m;
            } else {
                return max_frequency(*n.inner);
            }
        },
        f.node());
}

struct FitGrid {
    std::vector<double> xs;
    std::vector<Complex> ss;
    double X = 0.0;
};

inline FitGrid make_fit_grid(const FunctionExpr& target, const NodeSet& nodes,
                             const Rectangle& rect, int m1, int bpe) {
    FitGrid g;
    double X = 16.0;
    while (envelope_deriv(target, X) > 1e-9 && X < 512.0) X *= 2.0;
    g.X = X;
    double omega = max_frequency(target);
    for (Complex z : nodes.nodes) omega = std::max(omega, std::abs(z.imag()));
    int n1 = std::max(m1, std::min(4000, static_cast<int>(2.0 * X * (omega + 1.0) /
                                                          std::numbers::pi) + 64));
    g.xs = chebyshev_points(X, n1);
    const double al = rect.alpha, re = Rectangle::right_edge, r = rect.r;
    const Complex c1(al, -r), c2(re, -r), c3(re, r), c4(al, r);
    auto edge = [&](Complex a, Complex b) {
        for (double t : chebyshev_points(1.0, bpe)) g.ss.push_back(a + t * (b - a));
    };
    edge(c1, c2); edge(c2, c3); edge(c3, c4); edge(c4, c1);
    return g;
}

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline void assemble(const FunctionExpr& target, const std::vector<Complex>& nodes,
                     const FitGrid& g, CMat& A, CVec& b) {
    const int m = static_cast<int>(g.xs.size() + g.ss.size());
    const int n = static_cast<int>(nodes.size());
    A.resize(m, n);
    b.resize(m);
    for (std::size_t i = 0; i < g.xs.size(); ++i) {
        double x = g.xs[i];
        for (int j = 0; j < n; ++j)
            A(static_cast<int>(i), j) = nodes[j] * std::exp(nodes[j] * x);
        b(static_cast<int>(i)) = eval_deriv_c(target, x);
    }
    const int off = static_cast<int>(g.xs.size());
    for (std::size_t l = 0; l < g.ss.size(); ++l) {
        for (int j = 0; j < n; ++j)
            A(off + static_cast<int>(l), j) = 1.0 / (g.ss[l] - nodes[j]);
        b(off + static_cast<int>(l)) = laplace(target, g.ss[l]);
    }
}

inline CVec solve_weighted(const CMat& A, const CVec& b,
                           const Eigen::VectorXd& w, double tik) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    CMat S(m + n, n);
    CVec rhs = CVec::Zero(m + n);
    for (int i = 0; i < m; ++i) {
        double sw = std::sqrt(w(i));
        S.row(i) = sw * A.row(i);
        rhs(i) = sw * b(i);
    }
    S.bottomRows(n) = std::sqrt(tik) * CMat::Identity(n, n);
    return S.colPivHouseholderQr().solve(rhs);
}

} // namespace detail

/// Max residual of given coefficients on the fitting grid; lets callers
/// compare solver output against any feasible coefficient vector.
inline double fit_objective(const FunctionExpr& target,
                            const std::vector<Complex>& nodes,
                            const std::vector<Complex>& coeffs, double alpha,
                            double r, const FitOptions& opts = {}) {
    Rectangle rect(alpha, r);
    NodeSet tmp{-1e-3, 1e-6, nodes, "probe"};
    detail::FitGrid g = detail::make_fit_grid(target, tmp, rect,
                                              opts.deriv_samples,
                                              opts.boundary_samples_per_edge);
    detail::CMat A;
    detail::CVec b;
    detail::assemble(target, nodes, g, A, b);
    detail::CVec c(static_cast<int>(coeffs.size()));
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        c(static_cast<int>(j)) = coeffs[j];
    return (A * c - b).cwiseAbs().maxCoeff();
}

/// Coefficient fit of target by exponentials at the given nodes, minimizing
/// a discretized surrogate of the norm: derivative residuals on a Chebyshev
/// grid stacked with transform residuals on the rectangle boundary. The
/// minimax path runs Lawson reweighting; both paths regularize with a
/// Tikhonov term scaled from the largest singular value. achieved_error is
/// recomputed from the function algebra, not read from the optimizer.
inline FitResult fit_coefficients(const FunctionExpr& target, const NodeSet& nodes,
                                  double alpha, double r, FitMethod method,
                                  const FitOptions& opts = {}) {
    Rectangle rect(alpha, r);
    require_rect_in_domain(target, rect);
    if (nodes.nodes.empty()) throw precondition_error("fit: empty node set");

    detail::FitGrid g = detail::make_fit_grid(target, nodes, rect,
                                              opts.deriv_samples,
                                              opts.boundary_samples_per_edge);
    detail::CMat A;
    detail::CVec b;
    detail::assemble(target, nodes.nodes, g, A, b);
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());

    Eigen::JacobiSVD<detail::CMat> svd(A);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double tik = opts.tikhonov_rel * smax * smax;

    FitResult out;
    out.sigma_max = smax;
    out.sigma_min = smin;
    out.tikhonov = tik;
    out.deriv_cutoff = g.X;
    out.deriv_samples = static_cast<int>(g.xs.size());
    out.boundary_samples = static_cast<int>(g.ss.size());
    out.method = method == FitMethod::minimax ? "minimax" : "least-squares";

    Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 1.0 / m);
    detail::CVec c = detail::solve_weighted(A, b, w, tik);
    Eigen::VectorXd res = (A * c - b).cwiseAbs();
    double obj = res.maxCoeff();
    out.objective_trace.push_back(obj);
    detail::CVec best_c = c;
    double best_obj = obj;

    if (method == FitMethod::minimax) {
        out.converged = false;
        for (int it = 0; it < opts.lawson_max_iter; ++it) {
            double wsum = 0.0;
            for (int i = 0; i < m; ++i) {
                w(i) = std::max(w(i) * res(i), 1e-300);
                wsum += w(i);
            }
            w /= wsum;
            c = detail::solve_weighted(A, b, w, tik);
            res = (A * c - b).cwiseAbs();
            double next = res.maxCoeff();
            out.objective_trace.push_back(next);
            if (next < best_obj) {
                best_obj = next;
                best_c = c;
            }
            if (std::abs(next - obj) <= opts.lawson_tol * std::max(1.0, next) ||
                next < 1e-14) {
                out.converged = true;
                break;
            }
            obj = next;
        }
    }
    out.surrogate_objective = best_obj;

    // conjugate symmetrization for real targets over closed node sets
    std::vector<Complex> coeffs(nodes.nodes.size());
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        coeffs[j] = best_c(static_cast<int>(j));
    bool realizable = is_real_valued(target);
    if (realizable) {
        std::vector<int> mirror(coeffs.size(), -1);
        for (std::size_t j = 0; j < coeffs.size() && realizable; ++j) {
            Complex zc = std::conj(nodes.nodes[j]);
            mirror[j] = -1;
            for (std::size_t k = 0; k < coeffs.size(); ++k)
                if (nodes.nodes[k] == zc) { mirror[j] = static_cast<int>(k); break; }
            if (mirror[j] < 0) realizable = false;
        }
        if (realizable) {
            std::vector<Complex> sym(coeffs.size());
            for (std::size_t j = 0; j < coeffs.size(); ++j)
                sym[j] = 0.5 * (coeffs[j] + std::conj(coeffs[mirror[j]]));
            for (std::size_t j = 0; j < coeffs.size(); ++j) {
                std::size_t k = static_cast<std::size_t>(mirror[j]);
                if (k > j) sym[k] = std::conj(sym[j]);
            }
            coeffs = sym;
        }
    }

    std::vector<ExpTerm> terms;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        terms.push_back({nodes.nodes[j], coeffs[j], 0});
    out.expsum = ExpSum::create(std::move(terms), realizable);

    // 4x finer surrogate grid closes the discretization gap report
    {
        detail::FitGrid gf = detail::make_fit_grid(
            target, nodes, rect, 4 * opts.deriv_samples,
            4 * opts.boundary_samples_per_edge);
        detail::CMat Af;
        detail::CVec bf;
        detail::assemble(target, nodes.nodes, gf, Af, bf);
        detail::CVec cf(static_cast<int>(coeffs.size()));
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            cf(static_cast<int>(j)) = coeffs[j];
        out.fine_objective = (Af * cf - bf).cwiseAbs().maxCoeff();
    }

    out.achieved_error =
        v_norm(difference(target, make_expsum(out.expsum)), alpha, r).total;
    return out;
}

struct DemoOptions {
    int node_budget = 60;
    double h = 0.2;
    double delta = 0.5;
    FitOptions fit;
};

struct DemoResult {
    FitResult best;
    bool achieved = false;
    double eps = 0.0;
    int levels_tried = 0;
    int nodes_used = 0;
    std::optional<double> warm_start_error; // contour-discretization diagnostic
};

/// Instance-level density witness: approximates the target by exponentials
/// with nodes left of beta over progressively enlarged grids until the
/// independently re-verified error is below eps or the node budget is
/// exhausted.
inline DemoResult density_demo(const FunctionExpr& target, double alpha, double r,
                               double beta, double eps,
                               const DemoOptions& opts = {}) {
    if (!(beta < alpha && alpha < 0.0))
        throw precondition_error("density_demo: need beta < alpha < 0");
    DemoResult out;
    out.eps = eps;

    if (std::isinf(eps)) {
        out.best.expsum = ExpSum{};
        out.best.achieved_error = v_norm(target, alpha, r).total;
        out.best.method = "degenerate";
        out.achieved = true;
        return out;
    }

    // already representable: identity certificate
    if (const auto* es = std::get_if<ExpSumNode>(&target.node())) {
        bool left = !es->sum.empty();
        for (const auto& t : es->sum.terms())
            if (!(t.node.real() < beta)) left = false;
        if (left || es->sum.empty()) {
            out.best.expsum = es->sum;
            out.best.achieved_error =
                v_norm(difference(target, make_expsum(es->sum)), alpha, r).total;
            out.best.method = "identity";
            out.achieved = out.best.achieved_error <= eps;
            if (out.achieved) return out;
        }
    }

    // contour discretization of the damped target as a warm-start diagnostic,
    // when the transform-decay certificate exists
    FunctionExpr damped = damp(target, opts.h);
    if (fourier_decay_c4(target)) {
        double alpha_prime = std::min(alpha - 0.3, -2.0 * opts.h);
        double r_prime = r + 0.5;
        double xi = choose_truncation(damped, opts.h, alpha_prime, r_prime, r,
                                      std::max(eps, 1e-6));
        ContourSpec spec = build_gamma(opts.h, alpha_prime, r_prime, xi, 8);
        Reconstruction rec = contour_to_expsum(damped, spec, r, nullptr, false);
        out.warm_start_error =
            v_norm(difference(damped, make_expsum(rec.expsum)), alpha, r).total;
    }

    bool have = false;
    for (int level = 1;; ++level) {
        int lines = std::min(level, 3);
        int per_line = 11 + 4 * (level - 1);
        if (lines * per_line > opts.node_budget) break;
        NodeSet ns = node_grid(beta, opts.delta, lines, per_line, -(r + 5.0),
                               r + 5.0);
        FitResult fr = fit_coefficients(target, ns, alpha, r, FitMethod::minimax,
                                        opts.fit);
        out.levels_tried = level;
        if (!have || fr.achieved_error < out.best.achieved_error) {
            out.best = fr;
            out.nodes_used = static_cast<int>(ns.nodes.size());
            have = true;
        }
        if (out.best.achieved_error <= eps) {
            out.achieved = true;
            return out;
        }
    }
    out.achieved = have && out.best.achieved_error <= eps;
    return out;
}

} // namespace lapsum
