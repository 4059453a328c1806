#pragma once

#include <optional>
#include <vector>

#include "gnf/fitting.hpp"
#include "gnf/homological.hpp"
#include "gnf/polyvec.hpp"
#include "gnf/smalldivisors.hpp"

// Degree-by-degree normalization of X = L + R: the conjugacy phi^{-1} = Id+U
// with phi_* X = N is computed from
//
//   [L, U_delta] = {R o (Id+U)}_delta - N_delta - {DU . (N-L)}_delta
//
// where N_delta is the projection onto ker(d0^t) (zero in linearize mode).
// The defining contract is the pushforward identity
//   X o (Id+U) = D(Id+U) . N   (truncated at Nmax),
// exact in rational mode.

namespace gnf::nf {

using homological::SolveMode;

struct Options {
    // Abort/check tolerance: rational mode defaults to 0 (exact), float mode
    // to 1e-10 relative.
    std::optional<double> tol;
    double sv_rel_tol = 1e-12;
    // linearize mode assumes a hyperbolic linear part; setting this
    // acknowledges a non-hyperbolic spectrum and proceeds anyway
    bool acknowledge_nonhyperbolic = false;
    double resolve_tol(bool exact) const { return tol ? *tol : (exact ? 0.0 : 1e-10); }
};

struct GevreyFit {
    double beta_hat = 0.0;
    double c_hat = 0.0;
    double r2 = 0.0;
};

struct MajorantReport {
    BigFloat composition_constant;   // C with |R_mu| <= C^{mu+1} ((mu+1)!)^alpha
    std::vector<BigFloat> eta;       // eta_0..eta_kmax
    std::vector<BigFloat> sigma;     // sigma_0..sigma_kmax
    std::vector<bool> ok;            // |U_delta| <= eta_delta sigma_delta, delta = 1..kmax
    bool all_ok = true;
};

template <class K>
struct NormalizationResult {
    GradedVectorField<K> transform;    // U: zero linear part, degrees 2..Nmax
    GradedVectorField<K> normal_form;  // N = L + resonant parts
    std::vector<BigFloat> u_norms;             // |U_delta|, delta = 1..Nmax-1
    std::vector<BigFloat> n_norms;             // |N_delta|
    std::vector<BigFloat> solve_residuals;     // per-degree cohomological residual
    std::vector<BigFloat> conjugacy_residuals; // pushforward residual, coeff degrees 2..Nmax
    bool conjugacy_ok = false;
    std::optional<GevreyFit> gevrey_fit;       // absent when < 5 nonzero norms
};

/// (DU . V)_j = sum_i dU_j/dx_i V_i; coefficient degree deg(U)+deg(V)-1.
template <class K>
HomogeneousVF<K> jacobian_apply(const HomogeneousVF<K>& u, const HomogeneousVF<K>& v) {
    if (u.dim() != v.dim()) throw ShapeError("jacobian_apply: dimension mismatch");
    const unsigned n = u.dim();
    HomogeneousVF<K> r(n, u.degree() + v.degree() - 1);
    for (unsigned j = 0; j < n; ++j) {
        SparsePoly<K> acc(n);
        for (unsigned i = 0; i < n; ++i) acc += u.component(j).derivative(i).mul(v.component(i));
        for (const auto& [q, c] : acc.terms()) r.add_term(j, q, c);
    }
    return r;
}

/// A . U componentwise: (A U)_r = sum_i a_{ri} U_i.
template <class K>
HomogeneousVF<K> matrix_apply(const LinearPart<K>& L, const HomogeneousVF<K>& u) {
    const unsigned n = u.dim();
    HomogeneousVF<K> r(n, u.degree());
    for (unsigned row = 0; row < n; ++row) {
        SparsePoly<K> acc(n);
        for (unsigned i = 0; i < n; ++i)
            if (!k_is_zero(L.at(row, i))) acc += u.component(i).scaled(L.at(row, i));
        for (const auto& [q, c] : acc.terms()) r.add_term(row, q, c);
    }
    return r;
}

/// Per-degree Fischer norms of X o (Id+U) - D(Id+U) . N for coefficient
/// degrees 2..Nmax. The degree-1 parts cancel identically.
template <class K>
std::vector<BigFloat> pushforward_residuals(const GradedVectorField<K>& x,
                                            const GradedVectorField<K>& u,
                                            const GradedVectorField<K>& nform) {
    const unsigned n = x.dim();
    const unsigned nmax = x.truncation_order();

    std::map<unsigned, HomogeneousVF<K>> diff = compose_with_id_plus(x, u, nmax);
    auto add_part = [&](HomogeneousVF<K> p, int sign) {
        if (p.is_zero() || p.degree() > nmax) return;
        if (sign < 0) p = HomogeneousVF<K>(n, p.degree()) - p;
        auto it = diff.find(p.degree());
        if (it == diff.end()) diff.emplace(p.degree(), std::move(p));
        else it->second += p;
    };

    // remaining LHS: L o (Id+U) = L + A.U
    for (const auto& [d, p] : u.parts()) add_part(matrix_apply(x.linear(), p), +1);
    // RHS: N + DU.N with N = L + N_nl
    auto lf = linear_as_field(nform.linear());
    for (const auto& [d, p] : nform.parts()) add_part(p, -1);
    for (const auto& [du, pu] : u.parts()) {
        add_part(jacobian_apply(pu, lf), -1);
        for (const auto& [dn, pn] : nform.parts()) add_part(jacobian_apply(pu, pn), -1);
    }

    std::vector<BigFloat> res;
    for (unsigned d = 2; d <= nmax; ++d) {
        auto it = diff.find(d);
        res.push_back(it == diff.end() ? BigFloat(0) : fischer_norm(it->second));
    }
    return res;
}

/// Verify the conjugacy relation for a produced result.
template <class K>
std::vector<BigFloat> pushforward_check(const GradedVectorField<K>& x, const NormalizationResult<K>& r,
                                        double tol, bool* ok = nullptr) {
    auto res = pushforward_residuals(x, r.transform, r.normal_form);
    if (ok) {
        *ok = true;
        for (unsigned d = 2; d <= x.truncation_order(); ++d) {
            BigFloat xnorm = x.has_part(d) ? fischer_norm(x.part(d)) : BigFloat(0);
            if (res[d - 2] > BigFloat(tol) * (1 + xnorm)) *ok = false;
        }
    }
    return res;
}

/// Least-squares fit ln|U_delta| ~ beta ln(delta!) + delta ln C + b on the
/// nonzero norms (norms[i] is |U_{i+1}|). With 8 or more usable points only
/// the upper half enters (the low-degree transient otherwise dominates the
/// nearly collinear regressors).
inline GevreyFit gevrey_order_fit(const std::vector<BigFloat>& norms, unsigned min_points = 5) {
    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (!(norms[i] > 0)) continue;
        double delta = static_cast<double>(i + 1);
        rows.push_back({static_cast<double>(BigFloat(lgamma(BigFloat(delta + 1)))), delta, 1.0});
        ys.push_back(static_cast<double>(BigFloat(log(norms[i]))));
    }
    if (rows.size() < min_points)
        throw InsufficientDataError("gevrey_order_fit: need at least " + std::to_string(min_points) +
                                    " nonzero norms");
    if (rows.size() >= 8) {
        rows.erase(rows.begin(), rows.begin() + rows.size() / 2);
        ys.erase(ys.begin(), ys.begin() + ys.size() / 2);
    }
    auto fit = detail::least_squares(rows, ys);
    GevreyFit out;
    out.beta_hat = std::max(0.0, fit.coef[0]);
    out.c_hat = std::exp(fit.coef[1]);
    out.r2 = fit.r2;
    return out;
}

template <class K>
NormalizationResult<K> normalize(const GradedVectorField<K>& x, SolveMode mode, Options opt = {}) {
    const unsigned n = x.dim();
    const unsigned nmax = x.truncation_order();
    if (nmax < 2) throw TruncationError("normalize: truncation order must be >= 2");
    if (x.linear().is_zero()) throw DomainError("normalize: zero linear part (every direction resonant)");
    if (mode == SolveMode::linearize && !x.linear().is_hyperbolic() && !opt.acknowledge_nonhyperbolic)
        throw DomainError(
            "normalize: linearize mode needs a hyperbolic linear part "
            "(set acknowledge_nonhyperbolic to proceed)");
    const double tol = opt.resolve_tol(is_exact_field_v<K>);

    NormalizationResult<K> out;
    out.transform = GradedVectorField<K>::nonlinear(n, nmax);
    out.normal_form = GradedVectorField<K>(x.linear(), nmax);

    GradedVectorField<K> r_only(x.linear(), nmax);  // carries only the nonlinear parts
    for (const auto& [d, p] : x.parts()) r_only.set_part(p);

    for (unsigned delta = 1; delta + 1 <= nmax; ++delta) {
        const unsigned deg = delta + 1;
        HomogeneousVF<K> rhs = compose_truncated(r_only, out.transform, delta);
        // normal-form bookkeeping: subtract {DU . N_nl} contributions
        for (const auto& [dn, pn] : out.normal_form.parts()) {
            if (dn >= deg) continue;
            unsigned du = deg + 1 - dn;  // deg(U part) with du-1+dn-1 = deg-1
            if (du < 2 || !out.transform.has_part(du)) continue;
            rhs -= jacobian_apply(out.transform.part(du), pn);
        }

        auto op = homological::build_degree_operator(x.linear(), delta, opt.sv_rel_tol);
        auto sol = homological::solve_cohomological(op, rhs, mode, tol);
        out.u_norms.push_back(fischer_norm(sol.transform));
        out.n_norms.push_back(fischer_norm(sol.normal_part));
        out.solve_residuals.push_back(sol.residual);
        if (!sol.transform.is_zero()) out.transform.set_part(std::move(sol.transform));
        if (!sol.normal_part.is_zero()) out.normal_form.set_part(std::move(sol.normal_part));
    }

    out.conjugacy_residuals = pushforward_check(x, out, tol, &out.conjugacy_ok);
    try {
        out.gevrey_fit = gevrey_order_fit(out.u_norms);
    } catch (const InsufficientDataError&) {
        out.gevrey_fit = std::nullopt;
    }
    return out;
}

/// Majorant invariant |U_delta| <= eta_delta sigma_delta, with C taken from
/// the field's own parts: C = max_mu (|R_mu| / ((mu+1)!)^alpha)^{1/(mu+1)}
/// (valid since the multilinear norm is bounded by the Fischer norm of R_mu).
template <class K>
MajorantReport majorant_check(const GradedVectorField<K>& x, const NormalizationResult<K>& r,
                              double alpha) {
    const unsigned nmax = x.truncation_order();
    const unsigned kmax = nmax - 1;

    MajorantReport rep;
    rep.composition_constant = BigFloat(0);
    for (const auto& [d, p] : x.parts()) {
        unsigned mu = d - 1;
        BigFloat norm = fischer_norm(p);
        if (norm == 0) continue;
        BigFloat base = norm / pow(BigFloat(factorial(static_cast<unsigned long>(mu + 1))), BigFloat(alpha));
        BigFloat c = pow(base, BigFloat(1) / (mu + 1));
        if (c > rep.composition_constant) rep.composition_constant = c;
    }

    auto a_opt = homological::a_sequence(x.linear(), kmax);
    std::vector<BigFloat> a;
    for (const auto& v : a_opt) {
        if (!v) throw DomainError("majorant_check: missing a_k entry (fully resonant degree)");
        a.push_back(*v);
    }
    rep.eta = smalldiv::eta_sequence<BigFloat>(a, alpha, kmax);
    rep.sigma = smalldiv::sigma_sequence<BigFloat>(rep.composition_constant,
                                                   BigFloat(sqrt(BigFloat(x.dim()))), kmax)
                    .sigma;
    // boundary-equality slack: the 1-D quadratic fixture attains equality
    BigFloat slack = 1 + BigFloat(1e-12);
    for (unsigned delta = 1; delta <= kmax; ++delta) {
        bool ok = r.u_norms[delta - 1] <= rep.eta[delta] * rep.sigma[delta] * slack;
        rep.ok.push_back(ok);
        if (!ok) rep.all_ok = false;
    }
    return rep;
}

}  // namespace gnf::nf
