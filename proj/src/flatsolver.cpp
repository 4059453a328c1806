#include "gnf/flatsolver.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <limits>

#include "gnf/fitting.hpp"

namespace gnf::flat {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

double distance_to_fiber(const ContractionField& field, const Point& x) {
    double s = 0.0;
    for (unsigned i = field.p; i < field.n; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

double FlatScalar::operator()(const ContractionField& field, const Point& x) const {
    double r = distance_to_fiber(field, x);
    if (r == 0.0) return 0.0;  // flat on F
    return gevrey::eval(profile, r);
}

void FlatVector::eval(const ContractionField& field, const Point& x, Point& out) const {
    out.assign(field.n, 0.0);
    double r = distance_to_fiber(field, x);
    if (r == 0.0) return;
    for (unsigned i = 0; i < field.n && i < profiles.size(); ++i)
        if (profiles[i]) out[i] = gevrey::eval(profiles[i], r);
}

// ---------------------------------------------------------------------------
// Contraction certificate.
// ---------------------------------------------------------------------------

CertifyResult certify_contraction(const ContractionField& field, unsigned grid_per_dim) {
    if (field.box.ranges.size() != field.n) throw ShapeError("certify_contraction: box/dimension mismatch");
    if (grid_per_dim < 2) throw ParamError("certify_contraction: grid too coarse");

    CertifyResult out;
    double worst = -std::numeric_limits<double>::infinity();  // max of L_X(rho^2)/rho^2
    double best = std::numeric_limits<double>::infinity();    // min of the same

    Point x(field.n), fx(field.n);
    std::vector<unsigned> idx(field.n, 0);
    bool done = false;
    while (!done) {
        for (unsigned i = 0; i < field.n; ++i) {
            const auto& [lo, hi] = field.box.ranges[i];
            x[i] = lo + (hi - lo) * idx[i] / double(grid_per_dim - 1);
        }
        double rho2 = 0.0;
        for (unsigned i = field.p; i < field.n; ++i) rho2 += x[i] * x[i];
        if (rho2 > 0.0) {
            field.eval(x, fx);
            double lie = 0.0;  // L_X(rho^2) = 2 sum_{i>p} x_i X_i(x)
            for (unsigned i = field.p; i < field.n; ++i) lie += 2.0 * x[i] * fx[i];
            double ratio = lie / rho2;
            if (ratio >= 0.0) {
                out.ok = false;
                out.witness = x;
                out.reason = "L_X(rho^2) not negative at a grid point with rho > 0";
                return out;
            }
            worst = std::max(worst, ratio);
            best = std::min(best, ratio);
        }
        // advance the grid counter
        done = true;
        for (unsigned i = 0; i < field.n; ++i) {
            if (++idx[i] < grid_per_dim) {
                done = false;
                break;
            }
            idx[i] = 0;
        }
    }
    if (!std::isfinite(worst)) {
        out.ok = false;
        out.reason = "no grid point with rho > 0";
        return out;
    }
    out.ok = true;
    out.c = -best * 1.05;   // margin factor
    out.C = -worst / 1.05;
    return out;
}

bool certify_and_store(ContractionField& field, unsigned grid_per_dim) {
    auto res = certify_contraction(field, grid_per_dim);
    if (res.ok) {
        field.c = res.c;
        field.C = res.C;
        field.certified = true;
    }
    return res.ok;
}

// ---------------------------------------------------------------------------
// Shared integration helpers.
// ---------------------------------------------------------------------------

namespace {

/// u_max with int_{u_max}^inf M exp(-eta (rho0 e^{-Cu/2})^{-1/(beta-1)}) du < tol/2,
/// using int_a^inf e^{-nu e^{ru}} du <= e^{-nu e^{ra}} / (nu r e^{ra}).
double tail_cutoff(double rho0, double beta, double c_rate, double m_const, double eta, double tol) {
    if (beta <= 1.0) throw ParamError("flat data must declare Gevrey order beta > 1");
    double nu = eta * std::pow(rho0, -1.0 / (beta - 1.0));
    double r = c_rate / (2.0 * (beta - 1.0));
    double u = 1.0;
    for (int iter = 0; iter < 64; ++iter) {
        double e = std::exp(r * u);
        double bound = m_const * std::exp(-nu * e) / (nu * r * e);
        if (bound < tol / 2) return u;
        u *= 2.0;
    }
    throw DivergenceError("tail bound does not reach the tolerance: data not flat enough");
}

struct RhoMonitor {
    const ContractionField* field = nullptr;
    double rho0 = 0.0;
    bool sandwich_ok = true;
    std::vector<TrajectorySample>* trace = nullptr;

    void observe(double u, const Point& x) {
        double r = 0.0;
        for (unsigned i = field->p; i < field->n; ++i) r += x[i] * x[i];
        r = std::sqrt(r);
        if (trace) trace->push_back({u, r});
        double lo = rho0 * std::exp(-field->c * u / 2.0);
        double hi = rho0 * std::exp(-field->C * u / 2.0);
        double slack = 1e-6 + 1e-9 * u;
        if (r < lo * (1 - slack) - 1e-300 || r > hi * (1 + slack) + 1e-300) sandwich_ok = false;
    }
};

/// Windowed decay monitor: the sup of |integrand| over [2^j, 2^{j+1}] must
/// shrink; a non-decaying integrand means the data is not flat. The pointwise
/// check validates the declared decay constants along the trajectory (they
/// justify the tail truncation, so a violation invalidates the result).
struct DecayMonitor {
    double window_end = 1.0;
    double window_max = 0.0;
    double prev_max = -1.0;
    double floor = 0.0;
    double beta = 2.0;
    double m_const = 0.0, eta = 0.0;

    void observe(double u, double magnitude, double rho) {
        if (rho > 0.0 && eta > 0.0) {
            double claimed = m_const * std::exp(-eta * std::pow(rho, -1.0 / (beta - 1.0)));
            if (magnitude > claimed * (1 + 1e-6) + 1e-300)
                throw DivergenceError("data exceeds its declared decay bound along the flow: not flat");
        }
        window_max = std::max(window_max, magnitude);
        if (u >= window_end) {
            if (prev_max >= 0.0 && window_max > floor && window_max > 0.9 * prev_max)
                throw DivergenceError("integrand not decaying over a doubling window: data not flat");
            prev_max = window_max;
            window_max = 0.0;
            window_end *= 2.0;
        }
    }
};

void require_certified(const ContractionField& field) {
    if (!field.certified || !(field.C > 0.0) || !(field.c >= field.C))
        throw ConfigError("contraction rates not certified (run certify_contraction first)");
}

void finite_difference_jacobian(const ContractionField& field, const Point& x, std::vector<double>& jac) {
    jac.assign(std::size_t(field.n) * field.n, 0.0);
    Point xp = x, xm = x, fp(field.n), fm(field.n);
    for (unsigned j = 0; j < field.n; ++j) {
        double h = 1e-6 * (1.0 + std::abs(x[j]));
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        field.eval(xp, fp);
        field.eval(xm, fm);
        for (unsigned i = 0; i < field.n; ++i) jac[i * field.n + j] = (fp[i] - fm[i]) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// L_X f = h.
// ---------------------------------------------------------------------------

SolveReport solve_lie_derivative(const ContractionField& field, const FlatScalar& h, const Point& x,
                                 double tol) {
    require_certified(field);
    if (x.size() != field.n) throw ShapeError("solve_lie_derivative: point dimension mismatch");
    if (!field.box.contains(x)) throw DomainError("solve_lie_derivative: point outside the certified box");

    SolveReport rep;
    double rho0 = distance_to_fiber(field, x);
    if (rho0 == 0.0) {
        rep.sandwich_ok = true;  // trivial: x on F, h flat
        return rep;
    }
    if (!h.M || !h.eta)
        throw ConfigError("solve_lie_derivative: data lacks decay constants, tail bound unavailable");
    rep.u_max = tail_cutoff(rho0, h.beta, field.C, *h.M, *h.eta, tol);

    RhoMonitor rho_mon{&field, rho0, true, &rep.trace};
    DecayMonitor decay_mon;
    decay_mon.floor = tol / std::max(rep.u_max, 1.0);
    decay_mon.beta = h.beta;
    decay_mon.m_const = *h.M;
    decay_mon.eta = *h.eta;

    State s(field.n + 1, 0.0);
    for (unsigned i = 0; i < field.n; ++i) s[i] = x[i];

    auto system = [&](const State& y, State& dy, double) {
        Point pos(y.begin(), y.begin() + field.n), f(field.n);
        field.eval(pos, f);
        for (unsigned i = 0; i < field.n; ++i) dy[i] = f[i];
        dy[field.n] = h(field, pos);
    };
    auto observer = [&](const State& y, double u) {
        Point pos(y.begin(), y.begin() + field.n);
        if (!field.box.contains(pos, 1e-7))
            throw DomainError("solve_lie_derivative: trajectory left the certified box");
        rho_mon.observe(u, pos);
        decay_mon.observe(u, std::abs(h(field, pos)), distance_to_fiber(field, pos));
    };

    double step_tol = tol / std::max(rep.u_max, 1.0);
    auto stepper = odeint::make_controlled(step_tol, step_tol, odeint::runge_kutta_cash_karp54<State>());
    odeint::integrate_adaptive(stepper, system, s, 0.0, rep.u_max, 1e-3, observer);

    rep.value = -s[field.n];
    rep.error_estimate = tol;
    rep.sandwich_ok = rho_mon.sandwich_ok;
    return rep;
}

// ---------------------------------------------------------------------------
// [X, Z] = Y via the fundamental matrix.
// ---------------------------------------------------------------------------

BracketReport solve_lie_bracket(const ContractionField& field, const FlatVector& y, const Point& x,
                                double tol) {
    require_certified(field);
    const unsigned n = field.n;
    if (x.size() != n) throw ShapeError("solve_lie_bracket: point dimension mismatch");
    if (!field.box.contains(x)) throw DomainError("solve_lie_bracket: point outside the certified box");

    BracketReport rep;
    rep.value.assign(n, 0.0);
    double rho0 = distance_to_fiber(field, x);
    if (rho0 == 0.0) {
        rep.sandwich_ok = true;
        return rep;
    }
    if (!y.M || !y.eta)
        throw ConfigError("solve_lie_bracket: data lacks decay constants, tail bound unavailable");
    // The integrand carries F^{-1} ~ e^{|DX| u}; the double-exponential decay
    // of Y along the flow still wins. Budget the growth into the tolerance.
    rep.u_max = tail_cutoff(rho0, y.beta, field.C, *y.M, *y.eta, tol);

    RhoMonitor rho_mon{&field, rho0, true, &rep.trace};
    DecayMonitor decay_mon;
    decay_mon.floor = tol / std::max(rep.u_max, 1.0);
    decay_mon.beta = y.beta;
    decay_mon.m_const = *y.M;
    decay_mon.eta = *y.eta;

    // state: position (n) | fundamental matrix (n*n, row-major) | integral (n)
    State s(n + std::size_t(n) * n + n, 0.0);
    for (unsigned i = 0; i < n; ++i) s[i] = x[i];
    for (unsigned i = 0; i < n; ++i) s[n + i * n + i] = 1.0;

    std::vector<double> jac;
    double max_cond = 1.0;

    auto system = [&](const State& st, State& dst, double) {
        Point pos(st.begin(), st.begin() + n), f(n);
        field.eval(pos, f);
        if (field.jacobian) field.jacobian(pos, jac);
        else finite_difference_jacobian(field, pos, jac);

        for (unsigned i = 0; i < n; ++i) dst[i] = f[i];
        // F' = DX F
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) {
                double acc = 0.0;
                for (unsigned k = 0; k < n; ++k) acc += jac[i * n + k] * st[n + k * n + j];
                dst[n + i * n + j] = acc;
            }
        // I' = F^{-1} Y(pos)
        Eigen::MatrixXd F(n, n);
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) F(i, j) = st[n + i * n + j];
        Point yv(n);
        y.eval(field, pos, yv);
        Eigen::VectorXd b(n);
        for (unsigned i = 0; i < n; ++i) b(i) = yv[i];
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(F);
        Eigen::VectorXd sol = lu.solve(b);
        double cond = F.cwiseAbs().rowwise().sum().maxCoeff() *
                      lu.inverse().cwiseAbs().rowwise().sum().maxCoeff();
        max_cond = std::max(max_cond, cond);
        if (cond > 1.0 / std::max(tol, 1e-300))
            throw IllConditionedError("solve_lie_bracket: fundamental matrix condition exceeds 1/tol");
        for (unsigned i = 0; i < n; ++i) dst[n + std::size_t(n) * n + i] = sol(i);
    };
    auto observer = [&](const State& st, double u) {
        Point pos(st.begin(), st.begin() + n);
        if (!field.box.contains(pos, 1e-7))
            throw DomainError("solve_lie_bracket: trajectory left the certified box");
        rho_mon.observe(u, pos);
        Point yv(n);
        y.eval(field, pos, yv);
        double mag = 0.0;
        for (double v : yv) mag = std::max(mag, std::abs(v));
        decay_mon.observe(u, mag, distance_to_fiber(field, pos));
    };

    double step_tol = tol / std::max(rep.u_max, 1.0);
    auto stepper = odeint::make_controlled(step_tol, step_tol, odeint::runge_kutta_cash_karp54<State>());
    odeint::integrate_adaptive(stepper, system, s, 0.0, rep.u_max, 1e-3, observer);

    for (unsigned i = 0; i < n; ++i) rep.value[i] = -s[n + std::size_t(n) * n + i];
    rep.error_estimate = tol;
    rep.max_condition = max_cond;
    rep.sandwich_ok = rho_mon.sandwich_ok;
    return rep;
}

// ---------------------------------------------------------------------------

DecayFit flat_decay_check(const std::vector<std::array<double, 2>>& samples, double beta,
                          double eta_guess) {
    if (beta <= 1.0) throw ParamError("flat_decay_check: need beta > 1");
    DecayFit out;
    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    for (const auto& [r, f] : samples) {
        if (f == 0.0) continue;
        if (r <= 0.0) throw ParamError("flat_decay_check: samples need rho > 0");
        rows.push_back({1.0, -std::pow(r, -1.0 / (beta - 1.0))});
        ys.push_back(std::log(std::abs(f)));
    }
    if (rows.empty()) {
        out.vacuous = true;
        out.ok = true;
        return out;
    }
    if (rows.size() < 3) throw InsufficientDataError("flat_decay_check: need at least 3 nonzero samples");
    auto fit = detail::least_squares(rows, ys);
    out.eta_fit = fit.coef[1];
    out.r2 = fit.r2;
    out.ok = out.eta_fit > 0.05 * std::max(eta_guess, 1e-12) && fit.r2 >= 0.98;
    return out;
}

double lie_derivative_residual(const ContractionField& field, const FlatScalar& h,
                               const std::vector<Point>& points, double tol, double fd_step) {
    double sup = 0.0;
    Point fx(field.n);
    for (const auto& x : points) {
        field.eval(x, fx);
        double lie = 0.0;
        Point xp = x, xm = x;
        for (unsigned i = 0; i < field.n; ++i) {
            if (fx[i] == 0.0) continue;
            xp[i] = x[i] + fd_step;
            xm[i] = x[i] - fd_step;
            double fplus = solve_lie_derivative(field, h, xp, tol).value;
            double fminus = solve_lie_derivative(field, h, xm, tol).value;
            lie += fx[i] * (fplus - fminus) / (2.0 * fd_step);
            xp[i] = x[i];
            xm[i] = x[i];
        }
        sup = std::max(sup, std::abs(lie - h(field, x)));
    }
    return sup;
}

double lie_bracket_residual(const ContractionField& field, const FlatVector& y,
                            const std::vector<Point>& points, double tol, double fd_step) {
    const unsigned n = field.n;
    double sup = 0.0;
    std::vector<double> jac;
    Point fx(n), yx(n);
    for (const auto& x : points) {
        field.eval(x, fx);
        y.eval(field, x, yx);
        if (field.jacobian) field.jacobian(x, jac);
        else finite_difference_jacobian(field, x, jac);
        Point z0 = solve_lie_bracket(field, y, x, tol).value;

        // DZ columns by central differences
        std::vector<double> dz(std::size_t(n) * n, 0.0);
        Point xp = x, xm = x;
        for (unsigned j = 0; j < n; ++j) {
            xp[j] = x[j] + fd_step;
            xm[j] = x[j] - fd_step;
            Point zp = solve_lie_bracket(field, y, xp, tol).value;
            Point zm = solve_lie_bracket(field, y, xm, tol).value;
            for (unsigned i = 0; i < n; ++i) dz[i * n + j] = (zp[i] - zm[i]) / (2.0 * fd_step);
            xp[j] = x[j];
            xm[j] = x[j];
        }
        for (unsigned i = 0; i < n; ++i) {
            double bracket_i = 0.0;  // [X,Z]_i = sum_j X_j dZ_i/dx_j - Z_j dX_i/dx_j
            for (unsigned j = 0; j < n; ++j)
                bracket_i += fx[j] * dz[i * n + j] - z0[j] * jac[i * n + j];
            sup = std::max(sup, std::abs(bracket_i - yx[i]));
        }
    }
    return sup;
}

}  // namespace gnf::flat
