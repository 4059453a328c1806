#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gnf/normalform.hpp"
#include "gnf/polyvec.hpp"

// The Liouville divergence example: zeta is built by continued fractions with
// partial quotients targeted so that every stored convergent p_n/q_n sits in
// the two-sided band
//
//   c/(q_n (q_n!)^{beta-alpha}) <= |zeta - p_n/q_n| < 1/(q_n (q_n!)^{beta-alpha}),
//
// the field X = f.S with f = 1/(1 - sum (q_n!)^alpha x^{p_n} y^{q_n}) is
// linearized by the engine, and the transformation coefficients are compared
// against the closed form V_n = (q_n!)^alpha / (p_n - zeta q_n).
//
// The tail of the continued fraction beyond the built horizon is fixed to all
// ones, i.e. zeta = (phi p_N + p_{N-1}) / (phi q_N + q_{N-1}) with phi the
// golden ratio. Both code paths evaluate this same irrational, and all band
// checks are exact rational comparisons against the enclosure
// zeta in (mediant_N, p_N/q_N).

namespace gnf::liouville {

struct ScaleRecord {
    unsigned n = 0;
    Int p, q;
    Rat dist_lower;  // exact lower bound on |zeta - p/q|
    Rat dist_upper;  // exact upper bound
    bool upper_ok = false;  // |zeta - p/q| <  1/(q (q!)^gap)
    bool lower_ok = false;  // |zeta - p/q| >= c_n/(q (q!)^gap) with c_n > 0
    Rat c_n;                // largest admissible c at this scale
};

struct LiouvilleData {
    double gap = 1.0;      // beta - alpha
    unsigned n_terms = 0;  // stored scales n = 0..n_terms-1
    std::vector<Int> a;    // partial quotients a_0..a_N, N = n_terms
    std::vector<Int> p, q; // convergents p_0..p_N, q_0..q_N
    std::vector<ScaleRecord> scales;
    BigFloat zeta;  // at precision_bits
    unsigned precision_bits = kDefaultPrecisionBits;
    Rat c;  // min over scales of c_n
    bool partial = false;
    std::string horizon_note;
};

namespace detail {

inline bool gap_is_integral(double gap) { return gap == std::floor(gap); }

/// (q!)^g as an exact integer for integral g >= 1.
inline Int factorial_power_exact(const Int& q, long g) {
    Int f = factorial(q);
    Int out(1);
    for (long i = 0; i < g; ++i) out *= f;
    return out;
}

/// zeta at the current working precision from the stored quotients
/// (all-ones tail: complete quotient phi after a_N).
inline BigFloat zeta_value(const std::vector<Int>& p, const std::vector<Int>& q) {
    const std::size_t N = p.size() - 1;
    BigFloat phi = (1 + sqrt(BigFloat(5))) / 2;
    return BigFloat((phi * BigFloat(p[N]) + BigFloat(p[N - 1])) /
                    (phi * BigFloat(q[N]) + BigFloat(q[N - 1])));
}

inline nf::GevreyFit qscale_fit(const std::vector<std::vector<double>>& rows,
                                const std::vector<double>& ys) {
    auto fit = gnf::detail::least_squares(rows, ys);
    nf::GevreyFit out;
    out.beta_hat = std::max(0.0, fit.coef[0]);
    out.c_hat = std::exp(fit.coef[1]);
    out.r2 = fit.r2;
    return out;
}

}  // namespace detail

/// Build zeta and its verified convergent scales. Stops early (partial data)
/// when the next partial quotient would need an infeasible factorial.
inline LiouvilleData build_liouville_zeta(double gap, unsigned n_terms,
                                          unsigned precision_bits = kDefaultPrecisionBits,
                                          const Int& factorial_cap = Int(1000000)) {
    if (n_terms == 0) throw ParamError("build_liouville_zeta: n_terms must be >= 1");
    if (gap < 1.0) throw ParamError("build_liouville_zeta: beta - alpha must be >= 1");

    LiouvilleData data;
    data.gap = gap;
    data.precision_bits = precision_bits;

    data.a = {Int(1)};
    data.p = {Int(1)};
    data.q = {Int(1)};
    Int p_prev(1), q_prev(0);  // the (-1) convergent is 1/0

    unsigned built = 0;
    while (built < n_terms) {
        const Int qn = data.q.back();
        const Int pn = data.p.back();
        if (qn > factorial_cap) {
            data.partial = true;
            data.horizon_note = "horizon " + std::to_string(built) + " of " + std::to_string(n_terms) +
                                " scales: the next partial quotient needs (" + qn.str() +
                                ")!, beyond the factorial cap";
            break;
        }
        // smallest a with a*q_n + q_{n-1} > (q_n!)^ceil(gap) >= (q_n!)^gap
        Int target = detail::factorial_power_exact(qn, static_cast<long>(std::ceil(gap)));
        Int anext = (target - q_prev) / qn + 1;
        if (anext < 1) anext = 1;
        Int pn1 = anext * pn + p_prev;
        Int qn1 = anext * qn + q_prev;
        p_prev = pn;
        q_prev = qn;
        data.a.push_back(anext);
        data.p.push_back(pn1);
        data.q.push_back(qn1);
        ++built;
    }
    data.n_terms = built;
    if (built == 0) throw DomainError("build_liouville_zeta: no scale feasible under the factorial cap");

    // Exact enclosure: zeta strictly between the mediant and the last
    // convergent (tail complete quotient phi lies in (1, inf)).
    const std::size_t N = data.p.size() - 1;
    Rat end_a = Rat(data.p[N] + p_prev) / Rat(data.q[N] + q_prev);
    Rat end_b = Rat(data.p[N]) / Rat(data.q[N]);
    Rat lo = std::min(end_a, end_b), hi = std::max(end_a, end_b);

    for (unsigned n = 0; n < data.n_terms; ++n) {
        ScaleRecord rec;
        rec.n = n;
        rec.p = data.p[n];
        rec.q = data.q[n];
        Rat pq = Rat(data.p[n]) / Rat(data.q[n]);
        Rat d1 = abs(Rat(lo - pq)), d2 = abs(Rat(hi - pq));
        rec.dist_lower = std::min(d1, d2);
        rec.dist_upper = std::max(d1, d2);

        if (detail::gap_is_integral(gap)) {
            Int fp = detail::factorial_power_exact(data.q[n], static_cast<long>(gap));
            rec.upper_ok = rec.dist_upper * Rat(data.q[n]) * Rat(fp) < 1;
            rec.c_n = rec.dist_lower * Rat(data.q[n]) * Rat(fp);  // largest admissible c
        } else {
            PrecisionGuard guard(precision_bits + 128);
            BigFloat fp = pow(BigFloat(factorial(data.q[n])), BigFloat(gap));
            BigFloat margin = 1 + pow(BigFloat(2), -64);  // absorbs pow() rounding
            rec.upper_ok = BigFloat(rec.dist_upper) * BigFloat(data.q[n]) * fp * margin < 1;
            BigFloat cn = BigFloat(rec.dist_lower) * BigFloat(data.q[n]) * fp / margin;
            rec.c_n = rat_from_string(cn.str(30, std::ios_base::scientific));
        }
        rec.lower_ok = rec.c_n > 0;
        if (n == 0 || rec.c_n < data.c) data.c = rec.c_n;
        data.scales.push_back(std::move(rec));
    }

    {
        PrecisionGuard guard(precision_bits);
        data.zeta = detail::zeta_value(data.p, data.q);
    }
    return data;
}

/// Eigenvalues (1, -zeta) at the current working precision.
inline std::vector<BigFloat> liouville_lambda(const LiouvilleData& data) {
    return {BigFloat(1), BigFloat(-detail::zeta_value(data.p, data.q))};
}

struct LiouvilleField {
    GradedVectorField<BigFloat> field;
    bool degenerate = false;  // Nmax below the first monomial degree: X = S
};

/// X = f.S truncated so that all parts live at coefficient degrees <= Nmax.
/// Float-only by construction (zeta is irrational; rational mode is refused
/// by the type signature).
inline LiouvilleField liouville_field(const LiouvilleData& data, double alpha, unsigned nmax) {
    if (nmax < 2) throw TruncationError("liouville_field: Nmax must be >= 2");
    auto lam = liouville_lambda(data);
    auto L = LinearPart<BigFloat>::diagonal({lam[0], lam[1]});

    LiouvilleField out{GradedVectorField<BigFloat>(L, nmax), false};

    SparsePoly<BigFloat> s(2);  // 1 - sum (q_n!)^alpha x^{p_n} y^{q_n}
    s.add(MultiIndex::zero(2), BigFloat(1));
    bool any = false;
    for (unsigned n = 0; n < data.n_terms; ++n) {
        if (data.p[n] + data.q[n] + 1 > nmax) continue;
        auto px = static_cast<uint32_t>(data.p[n]);
        auto qy = static_cast<uint32_t>(data.q[n]);
        BigFloat coeff = pow(BigFloat(factorial(data.q[n])), BigFloat(alpha));
        s.add(MultiIndex({px, qy}), BigFloat(-coeff));
        any = true;
    }
    if (!any) {
        out.degenerate = true;  // X = S exactly
        return out;
    }

    SparsePoly<BigFloat> f = series_reciprocal(s, nmax - 1);
    for (const auto& [q, c] : f.terms()) {
        if (q.degree() == 0) continue;
        unsigned d = q.degree() + 1;
        HomogeneousVF<BigFloat> part = out.field.part(d);
        part.add_term(0, q.plus(0), c);                      // f * x d/dx
        part.add_term(1, q.plus(1), BigFloat(lam[1] * c));   // f * (-zeta y) d/dy
        out.field.set_part(std::move(part));
    }
    return out;
}

/// V_n = (q_n!)^alpha / (p_n - zeta q_n) at the current working precision,
/// from the exact tail identity
///   p_n - zeta q_n = (phi D1 + D0) / (phi q_N + q_{N-1}),
///   D1 = p_n q_N - q_n p_N,  D0 = p_n q_{N-1} - q_n p_{N-1}.
inline BigFloat closed_form_coefficient(const LiouvilleData& data, double alpha, unsigned n) {
    if (n >= data.n_terms) throw DomainError("closed_form_coefficient: scale index out of range");
    const std::size_t N = data.p.size() - 1;
    Int d1 = data.p[n] * data.q[N] - data.q[n] * data.p[N];
    Int d0 = data.p[n] * data.q[N - 1] - data.q[n] * data.p[N - 1];
    BigFloat phi = (1 + sqrt(BigFloat(5))) / 2;
    BigFloat divisor = (phi * BigFloat(d1) + BigFloat(d0)) /
                       (phi * BigFloat(data.q[N]) + BigFloat(data.q[N - 1]));
    BigFloat num = pow(BigFloat(factorial(data.q[n])), BigFloat(alpha));
    return BigFloat(num / divisor);
}

/// ln |V_n|, robust for scales whose magnitude overflows double.
inline BigFloat closed_form_log_norm(const LiouvilleData& data, double alpha, unsigned n) {
    if (n >= data.n_terms) throw DomainError("closed_form_log_norm: scale index out of range");
    const std::size_t N = data.p.size() - 1;
    Int d1 = data.p[n] * data.q[N] - data.q[n] * data.p[N];
    Int d0 = data.p[n] * data.q[N - 1] - data.q[n] * data.p[N - 1];
    BigFloat phi = (1 + sqrt(BigFloat(5))) / 2;
    BigFloat num_div = abs(phi * BigFloat(d1) + BigFloat(d0));
    BigFloat den_div = phi * BigFloat(data.q[N]) + BigFloat(data.q[N - 1]);
    BigFloat lnfact = lgamma(BigFloat(BigFloat(data.q[n]) + 1));
    return BigFloat(BigFloat(alpha) * lnfact + log(den_div) - log(num_div));
}

struct ScaleCheck {
    unsigned n = 0;
    std::string p, q;
    unsigned degree = 0;  // p_n + q_n + 1
    bool in_horizon = false;
    bool collision = false;    // products of earlier monomials hit the target
    std::string engine_coeff;  // empty when out of horizon
    std::string closed_coeff;
    double rel_err = 0.0;
    bool matched = false;
    bool gevrey_ineq_ok = false;  // (q_n!)^beta < |V_n|, exact comparison
};

struct DivergenceReport {
    unsigned nmax = 0;
    unsigned precision_bits = 0;
    bool linearizable = false;
    std::vector<ScaleCheck> scales;
    std::vector<double> log_norms;            // ln|V_n| per stored scale
    nf::GevreyFit fit;                        // q-scale fit of the closed-form norms
    std::vector<double> fit_beta_by_horizon;  // fit through scales 0..m, m = 2..
    std::vector<BigFloat> engine_u_norms;     // |U_delta| from the engine run
};

/// Default engine horizon: the first truncation admitting three scales.
inline unsigned default_nmax(const LiouvilleData& data) {
    unsigned idx = std::min<unsigned>(2, data.n_terms - 1);
    return static_cast<unsigned>(Int(data.p[idx] + data.q[idx])) + 1;
}

inline DivergenceReport verify_divergence(const LiouvilleData& data, double alpha, unsigned nmax) {
    if (data.n_terms < 3) throw DomainError("verify_divergence: need at least three stored scales");
    {
        unsigned scale1_deg = static_cast<unsigned>(Int(data.p[1] + data.q[1])) + 1;
        if (nmax < scale1_deg)
            throw DomainError("verify_divergence: Nmax too small for two scales (need >= " +
                              std::to_string(scale1_deg) + ")");
    }

    // Working precision: enough to resolve every divisor inside the horizon.
    unsigned bits = std::max<unsigned>(data.precision_bits, kDefaultPrecisionBits);
    for (unsigned n = 0; n + 1 < data.p.size() && n < data.n_terms; ++n) {
        if (data.p[n] + data.q[n] + 1 > nmax) break;
        auto need = static_cast<unsigned>(mpz_sizeinbase(data.q[n + 1].backend().data(), 2) +
                                          mpz_sizeinbase(data.q[n].backend().data(), 2)) + 96;
        bits = std::max(bits, need);
    }
    PrecisionGuard guard(bits);

    DivergenceReport rep;
    rep.nmax = nmax;
    rep.precision_bits = bits;

    auto lf = liouville_field(data, alpha, nmax);
    auto result = nf::normalize(lf.field, homological::SolveMode::linearize, {});
    rep.linearizable = true;  // normalize() throws otherwise: zeta is irrational
    rep.engine_u_norms = result.u_norms;

    GradedVectorField<BigFloat> r_only(lf.field.linear(), nmax);
    for (const auto& [d, p] : lf.field.parts()) r_only.set_part(p);

    for (unsigned n = 0; n < data.n_terms; ++n) {
        ScaleCheck chk;
        chk.n = n;
        chk.p = data.p[n].str();
        chk.q = data.q[n].str();
        BigFloat closed = closed_form_coefficient(data, alpha, n);
        chk.closed_coeff = bf_to_string(closed);

        Int deg_i = data.p[n] + data.q[n] + 1;
        chk.in_horizon = deg_i <= nmax;
        if (chk.in_horizon) {
            chk.degree = static_cast<unsigned>(deg_i);
            MultiIndex target({static_cast<uint32_t>(data.p[n]) + 1, static_cast<uint32_t>(data.q[n])});
            BigFloat pure = pow(BigFloat(factorial(data.q[n])), BigFloat(alpha));
            // exact collision detector: anything beyond the pure scale term in
            // the right-hand side at the target monomial means products of
            // earlier monomials interfere there
            HomogeneousVF<BigFloat> rhs = compose_truncated(r_only, result.transform, chk.degree - 1);
            BigFloat drift = abs(rhs.component(0).coefficient(target) - pure) / pure;
            chk.collision = drift > pow(BigFloat(2), -static_cast<long>(bits / 4));

            BigFloat engine = result.transform.part(chk.degree).component(0).coefficient(target);
            chk.engine_coeff = bf_to_string(engine);
            if (!chk.collision) {
                chk.rel_err = static_cast<double>(BigFloat(abs(engine - closed) / abs(closed)));
                chk.matched = chk.rel_err <= 1e-20;
            }
        }

        // (q_n!)^beta < |V_n| reduces to the alpha-free exact form
        // (q_n!)^gap * q_n * dist_upper < 1.
        if (detail::gap_is_integral(data.gap)) {
            Int fp = detail::factorial_power_exact(data.q[n], static_cast<long>(data.gap));
            chk.gevrey_ineq_ok = Rat(fp) * Rat(data.q[n]) * data.scales[n].dist_upper < 1;
        } else {
            BigFloat fp = pow(BigFloat(factorial(data.q[n])), BigFloat(data.gap));
            BigFloat margin = 1 + pow(BigFloat(2), -64);
            chk.gevrey_ineq_ok =
                fp * BigFloat(data.q[n]) * BigFloat(data.scales[n].dist_upper) * margin < 1;
        }
        rep.scales.push_back(std::move(chk));
    }

    // Gevrey fit of the closed-form norms in the q_n scale:
    //   ln|V_n| ~ beta ln(q_n!) + q_n ln C + b
    // (the scale the paper's inequality (q_n!)^beta < |V_n| is stated in).
    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    for (unsigned n = 0; n < data.n_terms; ++n) {
        BigFloat ln_v = closed_form_log_norm(data, alpha, n);
        rep.log_norms.push_back(static_cast<double>(ln_v));
        double qn = static_cast<double>(BigFloat(data.q[n]));
        double lnfact = static_cast<double>(BigFloat(lgamma(BigFloat(BigFloat(data.q[n]) + 1))));
        rows.push_back({lnfact, qn, 1.0});
        ys.push_back(static_cast<double>(ln_v));
        if (n >= 2) {
            auto fit = detail::qscale_fit(rows, ys);
            rep.fit_beta_by_horizon.push_back(fit.beta_hat);
            if (n + 1 == data.n_terms) rep.fit = fit;
        }
    }
    return rep;
}

}  // namespace gnf::liouville
