#pragma once

#include <functional>

#include "lapsum/norms.hpp"

namespace lapsum {

/// The modulated family L(x) sin(bx); its transform is the displaced
/// difference (L{L; s-ib} - L{L; s+ib}) / 2i.
inline FunctionExpr make_modulated(FunctionExpr L, double b) {
    return sine_modulate(std::move(L), b);
}

/// Least modulation frequency for which the whole rectangle family clears
/// the branch cut of the base transform, with a fixed 0.1 margin:
/// the rectangle shifted by +-ib must stay off (-inf, 0].
inline double min_modulation_frequency(const FunctionExpr& L, double alpha,
                                       double r) {
    if (!(alpha < 0.0 && r > 0.0))
        throw precondition_error("min_modulation_frequency: bad rectangle");
    if (!std::holds_alternative<PowerDecayNode>(L.node()))
        throw precondition_error(
            "min_modulation_frequency: unsupported base family");
    return r + 0.1;
}

/// Positive decaying comparison functions for the probe.
struct DecayFamily {
    std::string id;
    std::function<double(double)> value;
};

inline DecayFamily parse_decay(const std::string& id) {
    if (id.rfind("powerdecay:", 0) == 0) {
        double p = std::stod(id.substr(11));
        if (!(p > 0.0)) throw precondition_error("parse_decay: exponent must be > 0");
        return {id, [p](double x) { return std::pow(1.0 + x, -p); }};
    }
    if (id == "log")
        return {id, [](double x) { return 1.0 / std::log(std::numbers::e + x); }};
    throw precondition_error("parse_decay: unknown family '" + id + "'");
}

struct ProbeRow {
    double X;
    double windowed_ratio; // sup over x <= X of L(x)/rho(x)
    double modulated_sup;  // sup over sampled b, x <= X of |L(x) sin(bx)|/rho(x)
};

struct ProbeReport {
    std::string L_id;
    std::string rho_id;
    double alpha = 0.0, r = 0.0;
    double M = 0.0;
    double b_lo = 0.0, b_hi = 0.0;
    int b_samples = 0;
    double norm_sup = 0.0; // sup over sampled b of the norm of L_b
    double C = 1.0;
    std::vector<ProbeRow> table;
    std::optional<double> crossing_X;
};

struct ProbeOptions {
    int b_samples = 16;
    int x_points = 48;
    double x_min = 1.0;
    double x_max = 1e4;
    double C = 1.0;
    int x_subsamples = 8; // log-spaced between consecutive table abscissae
};

/// Desk-scale falsification of a remainder inequality
/// sup |tau/rho| <= C * norm: the modulated family has uniformly bounded
/// norms over b in [M, M+1], while the windowed ratio of L against rho grows
/// past C * norm_sup at crossing_X whenever rho = o(L).
inline ProbeReport remainder_probe(const FunctionExpr& L, const std::string& L_id,
                                   const DecayFamily& rho, double alpha, double r,
                                   const ProbeOptions& opts = {}) {
    if (opts.b_samples < 2)
        throw precondition_error("remainder_probe: need at least 2 b samples");
    if (!(opts.x_max > opts.x_min && opts.x_min > 0.0))
        throw precondition_error("remainder_probe: bad X range");
    if (!(rho.value(0.0) > 0.0) || !(rho.value(opts.x_max) < rho.value(0.0)))
        throw precondition_error("remainder_probe: rho must be positive and decaying");

    ProbeReport rep;
    rep.L_id = L_id;
    rep.rho_id = rho.id;
    rep.alpha = alpha;
    rep.r = r;
    rep.M = min_modulation_frequency(L, alpha, r);
    rep.b_lo = rep.M;
    rep.b_hi = rep.M + 1.0;
    rep.b_samples = opts.b_samples;
    rep.C = opts.C;

    std::vector<double> bs(opts.b_samples);
    for (int i = 0; i < opts.b_samples; ++i)
        bs[i] = rep.b_lo + (rep.b_hi - rep.b_lo) * i / (opts.b_samples - 1);

    double nsup = 0.0;
    for (double b : bs)
        nsup = std::max(nsup, v_norm(make_modulated(L, b), alpha, r).total);
    rep.norm_sup = nsup;

    auto ratio = [&](double x) { return eval(L, x) / rho.value(x); };
    double run_w = ratio(0.0);
    double run_m = 0.0;
    double prev_x = 0.0;
    const double lx0 = std::log(opts.x_min), lx1 = std::log(opts.x_max);
    for (int k = 0; k < opts.x_points; ++k) {
        double X = std::exp(lx0 + (lx1 - lx0) * k / (opts.x_points - 1));
        for (int j = 1; j <= opts.x_subsamples; ++j) {
            double x = prev_x + (X - prev_x) * j / opts.x_subsamples;
            run_w = std::max(run_w, ratio(x));
            for (double b : bs)
                run_m = std::max(run_m,
                                 std::abs(eval(L, x) * std::sin(b * x)) / rho.value(x));
        }
        rep.table.push_back({X, run_w, run_m});
        if (!rep.crossing_X && run_w > opts.C * nsup) rep.crossing_X = X;
        prev_x = X;
    }
    return rep;
}

struct StieltjesCheck {
    double residual;
    double tail_budget;
};

/// Transfer to a non-decreasing weight: S(x) = (tau(x) + a) e^x with
/// S(0-) = a, so dS carries an atom of mass tau(0) at the origin and
/// L{dS; s} = s L{tau; s-1} + a/(s-1).
class WienerIkeharaTransfer {
public:
    WienerIkeharaTransfer(FunctionExpr tau, double a, double a_min)
        : tau_(std::move(tau)), a_(a), a_min_(a_min) {}

    double a() const { return a_; }
    double a_min() const { return a_min_; }
    const FunctionExpr& tau() const { return tau_; }

    double weight(double x) const { return (eval(tau_, x) + a_) * std::exp(x); }

    Complex transform(Complex s) const {
        return stieltjes_transform(tau_, a_, s);
    }

    /// Formula value against direct quadrature of the Stieltjes integral at
    /// Re s > 1; the reported budget bounds the discarded tail.
    StieltjesCheck self_check(Complex s) const {
        if (!(s.real() > 1.0))
            throw precondition_error("self_check: need Re s > 1");
        double X = 32.0;
        while (envelope_value(tau_, X) + envelope_deriv(tau_, X) > 1e-13 &&
               X < 16384.0)
            X *= 2.0;
        Complex quad = integrate_adaptive(
            [&](double x) {
                return (eval_c(tau_, x) + eval_deriv_c(tau_, x)) *
                       std::exp((1.0 - s) * x);
            },
            0.0, X, 1e-11, 24, 4.0 / (1.0 + std::abs(s.imag())));
        double tail = (envelope_value(tau_, X) + envelope_deriv(tau_, X)) *
                      std::exp((1.0 - s.real()) * X) / (s.real() - 1.0);
        Complex direct = eval_c(tau_, 0.0) + a_ / (s - 1.0) + quad;
        return {std::abs(transform(s) - direct), tail};
    }

private:
    FunctionExpr tau_;
    double a_;
    double a_min_;
};

inline WienerIkeharaTransfer wiener_ikehara_transfer(FunctionExpr tau, double a) {
    if (!is_real_valued(tau))
        throw precondition_error("wiener_ikehara_transfer: tau must be real-valued");
    double X = 32.0;
    while (envelope_value(tau, X) + envelope_deriv(tau, X) > 1e-12 && X < 16384.0)
        X *= 2.0;
    double a_min = monotone_margin(tau, X, 4096);
    if (a < a_min - 1e-12) {
        std::ostringstream os;
        os << "wiener_ikehara_transfer: a = " << a
           << " is below the monotonicity margin a_min = " << a_min;
        throw insufficient_margin_error(os.str(), a_min);
    }
    return WienerIkeharaTransfer(std::move(tau), a, a_min);
}

} // namespace lapsum
