#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gnf/errors.hpp"

// Truncated numeric realization of the Gevrey norm |.|_{alpha,L;K}, the
// derivative lemma, and the flat-decay constant, on one-dimensional model
// functions evaluated through arbitrary-order Taylor (jet) arithmetic.

namespace gnf::gevrey {

/// Taylor coefficients c_0..c_J of f at x0 (derivative^j / j! convention).
struct Jet1D {
    double x0 = 0.0;
    std::vector<double> c;

    unsigned order() const { return c.empty() ? 0 : static_cast<unsigned>(c.size() - 1); }
    double value() const { return c.empty() ? 0.0 : c[0]; }
    /// j-th derivative at x0.
    double derivative(unsigned j) const;
};

Jet1D jet_const(double v, double x0, unsigned order);
Jet1D jet_var(double x0, unsigned order);
Jet1D jet_add(const Jet1D& a, const Jet1D& b);
Jet1D jet_sub(const Jet1D& a, const Jet1D& b);
Jet1D jet_neg(const Jet1D& a);
Jet1D jet_mul(const Jet1D& a, const Jet1D& b);
Jet1D jet_div(const Jet1D& a, const Jet1D& b);  // throws DomainError at b(x0) = 0
Jet1D jet_exp(const Jet1D& a);
Jet1D jet_ipow(const Jet1D& a, long e);  // negative e through the reciprocal

// ---------------------------------------------------------------------------
// Model-function catalog: arithmetic over numbers, x, exp(...), and integer
// powers, e.g. "exp(-1/x^2)", "1/(1-x)", "x^5", "exp(x)".
// ---------------------------------------------------------------------------

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/// Parse an expression; throws ParamError on syntax errors.
Expr parse_expr(const std::string& text);

double eval(const Expr& e, double x);
Jet1D jet_evaluate(const Expr& e, double x0, unsigned order);

struct NormTable {
    std::vector<double> partial;  // S_0..S_Jmax
    bool diverging = false;       // ratio test over the last 5 increments
    double last_ratio = 0.0;
};

/// S_J = sum_{j<=J} L^{alpha j}/(j!)^alpha * max_{x in K} |f^(j)(x)|.
NormTable truncated_gevrey_norm(const Expr& f, const std::vector<double>& pts, double alpha, double L,
                                unsigned jmax);

/// Truncated form of the derivative estimate: for every J <= Jmax,
///   S'_J(f^(j), alpha, L-lambda) <= j!^alpha lambda^{-j alpha} * tighten * S_J(f, alpha, L).
/// `tighten` < 1 sharpens the bound (used to probe that it is not slack).
bool derivative_lemma_check(const Expr& f, const std::vector<double>& pts, double alpha, double L,
                            double lambda, unsigned j, unsigned jmax, double tighten = 1.0);

/// C = (1 - lambda/L^{alpha/(alpha-1)})^{-(alpha-1)}; requires alpha > 1 and
/// 0 < lambda < L^{alpha/(alpha-1)}.
double flat_constant_check(double alpha, double L, double lambda);

}  // namespace gnf::gevrey
