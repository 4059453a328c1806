#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gnf/errors.hpp"
#include "gnf/gevreyfn.hpp"

// Numerical solution of the cohomological equations L_X f = h and [X,Z] = Y
// with flat data for normally contracting fields, by integrating the data
// along the flow:
//
//   f(x) = -int_0^inf h(phi_u(x)) du,
//   Z(x) = -int_0^inf F(x,u)^{-1} Y(phi_u(x)) du,  F' = DX(phi_u) F, F(0) = Id.
//
// The tail beyond u_max is controlled through the decay sandwich
// rho(x) e^{-cu/2} <= rho(phi_u(x)) <= rho(x) e^{-Cu/2} and the declared
// decay constants of the data.

namespace gnf::flat {

using Point = std::vector<double>;

struct Box {
    std::vector<std::array<double, 2>> ranges;
    bool contains(const Point& x, double eps = 1e-9) const {
        for (std::size_t i = 0; i < ranges.size(); ++i)
            if (x[i] < ranges[i][0] - eps || x[i] > ranges[i][1] + eps) return false;
        return true;
    }
};

struct ContractionField {
    unsigned n = 1;
    unsigned p = 0;  // fiber F = {x_{p+1} = ... = x_n = 0}
    std::function<void(const Point&, Point&)> eval;
    // optional analytic Jacobian (row-major n*n); finite differences otherwise
    std::function<void(const Point&, std::vector<double>&)> jacobian;
    Box box;
    double c = 0.0, C = 0.0;  // certified rates, c >= C > 0
    bool certified = false;
};

/// rho(x) = sqrt(x_{p+1}^2 + ... + x_n^2).
double distance_to_fiber(const ContractionField& field, const Point& x);

/// Flat scalar data h(x) = profile(rho(x)) with declared Gevrey order beta
/// and optional decay constants |h| <= M exp(-eta rho^{-1/(beta-1)}).
struct FlatScalar {
    gevrey::Expr profile;
    double beta = 2.0;
    std::optional<double> M, eta;
    double operator()(const ContractionField& field, const Point& x) const;
};

/// Flat vector-field data: one optional profile per component.
struct FlatVector {
    std::vector<gevrey::Expr> profiles;  // empty entries = zero component
    double beta = 2.0;
    std::optional<double> M, eta;
    void eval(const ContractionField& field, const Point& x, Point& out) const;
};

struct CertifyResult {
    bool ok = false;
    double c = 0.0, C = 0.0;
    Point witness;  // grid point violating contraction, when !ok
    std::string reason;
};

/// Sample L_X(rho^2) on a grid and return margined rates (c, C); failure with
/// a witness when the Lie derivative is not negative at some rho > 0 point.
CertifyResult certify_contraction(const ContractionField& field, unsigned grid_per_dim = 17);

/// As above, but stores the rates into the field on success.
bool certify_and_store(ContractionField& field, unsigned grid_per_dim = 17);

struct TrajectorySample {
    double u;
    double rho;
};

struct SolveReport {
    double value = 0.0;
    double error_estimate = 0.0;
    double u_max = 0.0;
    bool sandwich_ok = false;  // decay sandwich along the trajectory
    std::vector<TrajectorySample> trace;
};

/// f(x) = -int_0^inf h(phi_u(x)) du with adaptive RK and tail truncation.
SolveReport solve_lie_derivative(const ContractionField& field, const FlatScalar& h, const Point& x,
                                 double tol);

struct BracketReport {
    Point value;
    double error_estimate = 0.0;
    double u_max = 0.0;
    double max_condition = 0.0;
    bool sandwich_ok = false;
    std::vector<TrajectorySample> trace;
};

/// Z(x) from the fundamental-matrix integral; componentwise error <= tol.
BracketReport solve_lie_bracket(const ContractionField& field, const FlatVector& y, const Point& x,
                                double tol);

struct DecayFit {
    double eta_fit = 0.0;
    bool ok = false;
    bool vacuous = false;  // all samples zero
    double r2 = 0.0;
};

/// Fit ln|f| ~ const - eta * rho^{-1/(beta-1)} on (rho, f) samples.
DecayFit flat_decay_check(const std::vector<std::array<double, 2>>& samples, double beta,
                          double eta_guess);

/// sup_x |L_X f - h| over the given points, with f from solve_lie_derivative
/// and the gradient by central differences (step fd_step per coordinate).
double lie_derivative_residual(const ContractionField& field, const FlatScalar& h,
                               const std::vector<Point>& points, double tol, double fd_step = 1e-4);

/// sup-norm of [X, Z] - Y over the given points, Z from solve_lie_bracket,
/// DZ by central differences.
double lie_bracket_residual(const ContractionField& field, const FlatVector& y,
                            const std::vector<Point>& points, double tol, double fd_step = 1e-4);

}  // namespace gnf::flat
