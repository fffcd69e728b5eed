#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include "lapsum/errors.hpp"
#include "lapsum/quadrature.hpp"

namespace lapsum {

using Complex = std::complex<double>;

/// One term coeff * x^degree * exp(node * x). Degree 1 exists only to
/// represent derivatives of the exponential atoms; fitting and contour
/// discretization emit degree 0.
struct ExpTerm {
    Complex node;
    Complex coeff;
    int degree = 0;
};

/// Finite sum of exponential terms restricted to [0, inf). All nodes lie
/// strictly in the open left half-plane; duplicates are merged. When the
/// real-part flag is set the represented function is Re of the sum and the
/// term multiset must be closed under conjugation.
class ExpSum {
public:
    ExpSum() = default;

    static ExpSum create(std::vector<ExpTerm> terms, bool real_part) {
        ExpSum out;
        out.real_part_ = real_part;
        for (const auto& t : terms) {
            if (!(t.node.real() < 0.0))
                throw precondition_error("ExpSum: node real part must be < 0");
            if (t.degree < 0 || t.degree > 1)
                throw precondition_error("ExpSum: term degree must be 0 or 1");
        }
        // merge duplicates (same node and degree)
        for (const auto& t : terms) {
            bool merged = false;
            for (auto& u : out.terms_) {
                if (u.node == t.node && u.degree == t.degree) {
                    u.coeff += t.coeff;
                    merged = true;
                    break;
                }
            }
            if (!merged) out.terms_.push_back(t);
        }
        if (real_part) out.check_conjugate_closure();
        return out;
    }

    const std::vector<ExpTerm>& terms() const { return terms_; }
    bool real_part() const { return real_part_; }
    bool empty() const { return terms_.empty(); }

    /// Raw complex sum (no real-part projection).
    Complex value(double x) const {
        CompensatedSum<Complex> acc;
        for (const auto& t : terms_) {
            Complex e = std::exp(t.node * x);
            acc.add(t.coeff * (t.degree == 0 ? e : x * e));
        }
        return acc.value();
    }

    Complex derivative(double x) const {
        CompensatedSum<Complex> acc;
        for (const auto& t : terms_) {
            Complex e = std::exp(t.node * x);
            if (t.degree == 0)
                acc.add(t.coeff * t.node * e);
            else
                acc.add(t.coeff * (1.0 + t.node * x) * e);
        }
        return acc.value();
    }

    /// Closed-form transform: sum of coeff * degree! / (s - node)^(degree+1).
    Complex transform(Complex s) const {
        CompensatedSum<Complex> acc;
        for (const auto& t : terms_) {
            Complex d = s - t.node;
            if (std::abs(d) == 0.0)
                throw precondition_error("ExpSum transform: evaluation at a pole");
            acc.add(t.degree == 0 ? t.coeff / d : t.coeff / (d * d));
        }
        return acc.value();
    }

    /// Nonincreasing bound for |value| on [x, inf).
    double envelope_value(double x) const {
        double e = 0.0;
        for (const auto& t : terms_)
            e += std::abs(t.coeff) * term_tail_max(t.node.real(), t.degree, x);
        return e;
    }

    /// Nonincreasing bound for |derivative| on [x, inf).
    double envelope_derivative(double x) const {
        double e = 0.0;
        for (const auto& t : terms_) {
            double a = t.node.real();
            double m = std::abs(t.node);
            if (t.degree == 0) {
                e += std::abs(t.coeff) * m * std::exp(a * x);
            } else {
                // |(1 + node*x) e^{node x}| <= (1 + m x) e^{a x}
                e += std::abs(t.coeff) * affine_tail_max(m, a, x);
            }
        }
        return e;
    }

    /// Bound on the L1 norm over [0, inf).
    double l1_bound() const {
        double e = 0.0;
        for (const auto& t : terms_) {
            double a = -t.node.real();
            e += std::abs(t.coeff) * (t.degree == 0 ? 1.0 / a : 1.0 / (a * a));
        }
        return e;
    }

private:
    void check_conjugate_closure() const {
        for (const auto& t : terms_) {
            bool found = false;
            for (const auto& u : terms_) {
                if (u.degree == t.degree && u.node == std::conj(t.node) &&
                    u.coeff == std::conj(t.coeff)) {
                    found = true;
                    break;
                }
            }
            if (!found)
                throw precondition_error(
                    "ExpSum: real-part flag requires conjugate-closed terms");
        }
    }

    // max over y >= x of y^d e^{a y}, a < 0
    static double term_tail_max(double a, int d, double x) {
        if (d == 0) return std::exp(a * x);
        double ystar = -1.0 / a;
        double y = std::max(x, ystar);
        return y * std::exp(a * y);
    }

    // max over y >= x of (1 + m y) e^{a y}, a < 0, m > 0
    static double affine_tail_max(double m, double a, double x) {
        double g = [&](double y) { return (1.0 + m * y) * std::exp(a * y); }(x);
        // stationary point of (1+my)e^{ay}: y* = -(m + a)/(a m)
        double ystar = -(m + a) / (a * m);
        if (ystar > x)
            g = (1.0 + m * ystar) * std::exp(a * ystar);
        return g;
    }

    std::vector<ExpTerm> terms_;
    bool real_part_ = false;
};

/// The exponential atom x -> exp(zeta x) on [0, inf).
inline ExpSum exp_atom(Complex zeta) {
    return ExpSum::create({{zeta, 1.0, 0}}, false);
}

/// Its derivative in the node parameter: x -> x exp(zeta x).
inline ExpSum exp_atom_linear(Complex zeta) {
    return ExpSum::create({{zeta, 1.0, 1}}, false);
}

} // namespace lapsum
