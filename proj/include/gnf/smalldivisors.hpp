#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "gnf/fitting.hpp"
#include "gnf/multiindex.hpp"
#include "gnf/scalar.hpp"

// Small-divisor sequences and arithmetic conditions: omega_k, Brjuno partial
// sums, the Carletti-Marmi sequence, Siegel-exponent fitting, and the majorant
// recursions eta_k / sigma_delta with Gevrey-bound fitting.
//
// Indexing: omega lists are stored zero-based from the first computed entry,
// i.e. omega[p] holds the paper's omega_{p+1} (the scan over 2 <= |Q| <= 2^k
// starts at k = 1). Each condition below spells out the offset it uses.

namespace gnf::smalldiv {

struct OmegaOptions {
    unsigned qcap = 0;        // 0: pick by dimension (1024 for n=2, 128 for n=3, 64 above)
    double zero_eps = 0.0;    // 0: derive from working precision
};

struct OmegaResult {
    std::vector<BigFloat> omega;   // omega[p] = omega_{p+1}
    unsigned qcap = 0;
    bool capped = false;           // some scan ranges were clipped to |Q| <= qcap
    unsigned capped_from_k = 0;    // first k (1-based) whose range was clipped
};

/// omega_k = min over 2 <= |Q| <= 2^k, 1 <= i <= n of nonzero |(Q,lambda)-lambda_i|,
/// computed incrementally (each k extends the previous scan).
inline OmegaResult omega_sequence(const std::vector<CEig>& lambda, unsigned kmax, OmegaOptions opts = {}) {
    if (kmax < 1) throw DomainError("omega_sequence: kmax must be >= 1");
    const unsigned n = static_cast<unsigned>(lambda.size());
    if (n == 0) throw ShapeError("omega_sequence: empty eigenvalue list");

    unsigned qcap = opts.qcap;
    if (qcap == 0) qcap = (n <= 2) ? 1024 : (n == 3 ? 128 : 64);
    BigFloat zero_eps(opts.zero_eps);
    if (zero_eps == 0) {
        auto bits = static_cast<long>(BigFloat::default_precision() * 3.32);
        zero_eps = pow(BigFloat(2), -(3 * bits / 4));
    }

    OmegaResult out;
    out.qcap = qcap;
    std::optional<BigFloat> best;
    uint64_t prev_limit = 1;
    for (unsigned k = 1; k <= kmax; ++k) {
        uint64_t want = (k < 63) ? (uint64_t{1} << k) : ~uint64_t{0};
        uint64_t limit = std::min<uint64_t>(want, qcap);
        if (want > qcap && !out.capped) {
            out.capped = true;
            out.capped_from_k = k;
        }
        for (uint64_t m = prev_limit + 1; m <= limit; ++m) {
            for_each_multiindex(n, static_cast<unsigned>(m), [&](const MultiIndex& q) {
                CEig dot;
                for (unsigned j = 0; j < n; ++j)
                    if (q[j]) dot = dot + static_cast<long>(q[j]) * lambda[j];
                for (unsigned i = 0; i < n; ++i) {
                    BigFloat v = (dot - lambda[i]).abs();
                    if (v <= zero_eps) continue;  // resonant (or numerically zero)
                    if (!best || v < *best) best = v;
                }
            });
        }
        prev_limit = std::max(prev_limit, limit);
        if (!best) throw DomainError("omega_sequence: no nonzero divisor up to |Q| <= " + std::to_string(limit));
        out.omega.push_back(*best);
    }
    return out;
}

/// Partial sums -sum_{p=0}^{m} ln(omega[p]) / 2^p, m = 0..len-1, with the
/// weight 2^{-p} counted from the start of the supplied list.
inline std::vector<BigFloat> brjuno_partials(const std::vector<BigFloat>& omega) {
    std::vector<BigFloat> out;
    BigFloat acc(0);
    BigFloat w(1);
    for (const auto& o : omega) {
        if (o <= 0) throw DomainError("brjuno_partials: omega entries must be positive");
        acc -= BigFloat(log(o)) / w;
        out.push_back(acc);
        w *= 2;
    }
    return out;
}

struct CarlettiMarmiResult {
    std::vector<BigFloat> values;  // bracketed quantity per k = 0..len-1
    bool holds_at_horizon = false; // heuristic: no new running max in the last third
    unsigned horizon = 0;
};

/// The (omega_{beta,alpha}) bracket per k:
///   -2 sum_{p=0}^{k} ln(omega_{p+1}) / 2^p  -  (beta-alpha)/2^k * ln((2^k)!)
/// where omega[p] stores omega_{p+1}.
inline CarlettiMarmiResult carletti_marmi_sequence(const std::vector<BigFloat>& omega, double alpha,
                                                   double beta) {
    if (beta < alpha) throw ParamError("carletti_marmi_sequence: requires beta >= alpha");
    CarlettiMarmiResult out;
    out.horizon = static_cast<unsigned>(omega.size());
    BigFloat acc(0);
    BigFloat w(1);
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (omega[k] <= 0) throw DomainError("carletti_marmi_sequence: omega entries must be positive");
        acc -= 2 * BigFloat(log(omega[k])) / w;
        BigFloat two_k = pow(BigFloat(2), static_cast<unsigned>(k));
        BigFloat lnfact = lgamma(BigFloat(two_k + 1));
        out.values.push_back(BigFloat(acc - BigFloat(beta - alpha) * lnfact / two_k));
        w *= 2;
    }
    // Horizon heuristic: the growth of the running max over the last third
    // must have decayed to at most half its growth over the middle third.
    // (A literal "no new record in the last third" misdiagnoses every
    // monotone convergent bracket, e.g. the golden-ratio Brjuno case.)
    if (!out.values.empty()) {
        std::size_t len = out.values.size();
        std::size_t t1 = len / 3, t2 = len - len / 3;
        BigFloat running = out.values.front();
        BigFloat mid_growth(0), last_growth(0);
        for (std::size_t k = 1; k < len; ++k) {
            if (out.values[k] > running) {
                BigFloat inc = out.values[k] - running;
                if (k >= t2) last_growth += inc;
                else if (k >= t1) mid_growth += inc;
                running = out.values[k];
            }
        }
        out.holds_at_horizon = last_growth <= mid_growth / 2 + BigFloat(1e-9);
    }
    return out;
}

struct SiegelFit {
    double c = 0.0;
    double tau = 0.0;
    double residual = 0.0;  // max violation of a_k >= c/k^tau, in log scale
    unsigned n_records = 0;
};

/// Least-squares fit of ln a_k ~ ln c - tau ln k on the running-record minima
/// (non-strict) of the sequence; k is 1-based.
inline SiegelFit siegel_fit(const std::vector<BigFloat>& a) {
    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    std::optional<BigFloat> running;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] <= 0) throw DomainError("siegel_fit: a entries must be positive");
        if (!running || a[i] <= *running) {
            running = a[i];
            rows.push_back({1.0, -std::log(static_cast<double>(i + 1))});
            ys.push_back(static_cast<double>(BigFloat(log(a[i]))));
        }
    }
    if (rows.size() < 3) throw InsufficientDataError("siegel_fit: fewer than 3 record minima");
    auto fit = detail::least_squares(rows, ys);
    SiegelFit out;
    out.n_records = static_cast<unsigned>(rows.size());
    out.tau = std::max(0.0, fit.coef[1]);
    out.c = std::exp(fit.coef[0]);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double pred = fit.coef[0] - out.tau * std::log(static_cast<double>(i + 1));
        out.residual = std::max(out.residual, pred - static_cast<double>(BigFloat(log(a[i]))));
    }
    out.residual = std::max(0.0, out.residual);
    return out;
}

// ---------------------------------------------------------------------------
// Majorant recursions. Both run on a best/sum-of-products table
//   T[m][s] over m-tuples of nonnegative integers summing to s,
// so a full evaluation costs O(kmax^3) products.
// ---------------------------------------------------------------------------

/// eta_0 = 1 and, for k >= 1,
///   eta_k = (1/a_k) * max_{1<=mu<=k} max_{k_1+...+k_{mu+1}+mu=k}
///           ((mu+1)!)^alpha eta_{k_1} ... eta_{k_{mu+1}}.
/// `a` is the a_k list with a[0] = a_1; the divisor for eta_k is a_k, the
/// smallest nonzero singular value on the space where U_k itself lives.
template <class K>
std::vector<K> eta_sequence(const std::vector<K>& a, double alpha, unsigned kmax) {
    if (a.size() < kmax) throw DomainError("eta_sequence: need a_k through k = kmax");
    for (unsigned k = 1; k <= kmax; ++k)
        if (!(a[k - 1] > 0)) throw DomainError("eta_sequence: a_k must be positive");

    std::vector<K> eta{K(1)};
    // best[m][s]: max product of m eta-factors with index sum s (s <= kmax-1)
    std::vector<std::vector<K>> best(kmax + 2);
    for (auto& row : best) row.resize(kmax, K(0));

    for (unsigned k = 1; k <= kmax; ++k) {
        unsigned s = k - 1;  // newly available column
        best[1][s] = eta[s];
        for (unsigned m = 2; m <= kmax + 1; ++m) {
            K b(0);
            for (unsigned j = 0; j <= s; ++j) {
                K cand = eta[j] * best[m - 1][s - j];
                if (cand > b) b = cand;
            }
            best[m][s] = b;
        }
        K top(0);
        for (unsigned mu = 1; mu <= k; ++mu) {
            K cand = k_factorial_pow<K>(mu + 1, alpha) * best[mu + 1][k - mu];
            if (cand > top) top = cand;
        }
        eta.push_back(K(top / a[k - 1]));
    }
    return eta;
}

template <class K>
struct SigmaResult {
    std::vector<K> sigma;          // sigma_0..sigma_kmax
    std::vector<BigFloat> ratios;  // sigma_{d+1}/sigma_d
};

/// sigma_0 given, and for delta >= 1,
///   sigma_delta = sum_{mu=1}^{delta} sum_{d_1+...+d_{mu+1}+mu=delta}
///                 C^{mu+1} sigma_{d_1} ... sigma_{d_{mu+1}}.
template <class K>
SigmaResult<K> sigma_sequence(const K& c, const K& sigma0, unsigned kmax) {
    if (c < 0 || !(sigma0 > 0)) throw DomainError("sigma_sequence: need C >= 0, sigma0 > 0");
    SigmaResult<K> out;
    out.sigma.push_back(sigma0);
    if (kmax == 0) return out;

    std::vector<K> cpow{K(1)};  // C^m
    for (unsigned m = 1; m <= kmax + 1; ++m) cpow.push_back(K(cpow.back() * c));

    // conv[m][s]: sum of products of m sigma-factors with index sum s
    std::vector<std::vector<K>> conv(kmax + 2);
    for (auto& row : conv) row.resize(kmax, K(0));

    for (unsigned k = 1; k <= kmax; ++k) {
        unsigned s = k - 1;
        conv[1][s] = out.sigma[s];
        for (unsigned m = 2; m <= kmax + 1; ++m) {
            K acc(0);
            for (unsigned j = 0; j <= s; ++j) acc += out.sigma[j] * conv[m - 1][s - j];
            conv[m][s] = acc;
        }
        K val(0);
        for (unsigned mu = 1; mu <= k; ++mu) val += cpow[mu + 1] * conv[mu + 1][k - mu];
        out.sigma.push_back(val);
    }
    for (unsigned d = 0; d + 1 < out.sigma.size(); ++d) {
        BigFloat denom = k_to_bigfloat(out.sigma[d]);
        out.ratios.push_back(denom > 0 ? BigFloat(k_to_bigfloat(out.sigma[d + 1]) / denom) : BigFloat(0));
    }
    return out;
}

struct GevreyBoundFit {
    double beta_hat = 0.0;
    double c_hat = 0.0;
};

/// Fit ln eta_k ~ beta ln k! + k ln C + ln M (k 1-based; eta_0's row is
/// identically zero and is excluded; M is absorbed into the intercept and not
/// reported). With 8 or more usable points only the upper half of the range
/// enters: the regressors are nearly collinear at small k and the transient
/// would swamp the asymptotic order.
inline GevreyBoundFit gevrey_bound_fit(const std::vector<BigFloat>& eta) {
    if (eta.size() < 4) throw InsufficientDataError("gevrey_bound_fit: need at least 4 eta values");
    std::size_t start = eta.size() >= 9 ? eta.size() / 2 : 1;
    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    for (std::size_t k = 1; k < eta.size(); ++k) {
        if (eta[k] <= 0) throw DomainError("gevrey_bound_fit: eta entries must be positive");
        if (k < start) continue;
        double lnfact = static_cast<double>(BigFloat(lgamma(BigFloat(k + 1))));
        rows.push_back({lnfact, static_cast<double>(k), 1.0});
        ys.push_back(static_cast<double>(BigFloat(log(eta[k]))));
    }
    auto fit = detail::least_squares(rows, ys);
    GevreyBoundFit out;
    out.beta_hat = std::max(0.0, fit.coef[0]);
    out.c_hat = std::exp(fit.coef[1]);
    return out;
}

}  // namespace gnf::smalldiv
