#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gnf/homological.hpp"
#include "gnf/smalldivisors.hpp"
#include "oracles.hpp"

using namespace gnf;

namespace {

std::vector<CEig> real_lambda(std::initializer_list<double> vals) {
    std::vector<CEig> out;
    for (double v : vals) out.emplace_back(BigFloat(v));
    return out;
}

}  // namespace

TEST_CASE("omega_sequence: integer spectra give omega = 1") {
    PrecisionGuard prec(kDefaultPrecisionBits);
    for (auto lam : {real_lambda({1, -2}), real_lambda({1, 2})}) {
        auto res = smalldiv::omega_sequence(lam, 6);
        for (const auto& w : res.omega) CHECK(static_cast<double>(w) == doctest::Approx(1.0));
        CHECK_FALSE(res.capped);
    }
}

TEST_CASE("omega_sequence: golden-ratio pair decreases along Fibonacci denominators") {
    PrecisionGuard prec(kDefaultPrecisionBits);
    BigFloat gamma = (sqrt(BigFloat(5)) - 1) / 2;
    std::vector<CEig> lam{CEig(BigFloat(1)), CEig(BigFloat(-gamma))};
    auto res = smalldiv::omega_sequence(lam, 8);
    // first entry (|Q| <= 2): the scan minimum is gamma itself, from (1,1)
    CHECK(static_cast<double>(BigFloat(res.omega[0] - gamma)) == doctest::Approx(0.0));
    // by |Q| <= 4 the divisor at Q = (2,1) enters: 2 - gamma - 1 = 1 - gamma
    CHECK(static_cast<double>(res.omega[1]) <= 1 - static_cast<double>(gamma) + 1e-15);
    // each entry is the min over the incremental scan: cross-check vs shells
    for (unsigned k = 1; k <= 4; ++k) {
        std::optional<BigFloat> best;
        for (unsigned d = 2; d <= (1u << k); ++d) {
            auto m = oracles::min_divisor_at_degree({BigFloat(1), BigFloat(-gamma)}, d,
                                                    pow(BigFloat(2), -200));
            if (m && (!best || *m < *best)) best = m;
        }
        REQUIRE(best.has_value());
        CHECK(static_cast<double>(BigFloat(res.omega[k - 1] - *best)) == doctest::Approx(0.0));
    }
    for (std::size_t k = 1; k < res.omega.size(); ++k) CHECK(res.omega[k] <= res.omega[k - 1]);
    CHECK(res.omega.back() < res.omega.front());
    CHECK(res.omega.back() > 0);
    CHECK_FALSE(res.capped);  // 2^8 = 256 below the n=2 cap of 1024
}

TEST_CASE("omega_sequence: cap flag and monotonicity on random spectra") {
    PrecisionGuard prec(kDefaultPrecisionBits);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 4; ++rep) {
        std::vector<CEig> lam{CEig(BigFloat(u(rng)), BigFloat(u(rng))),
                              CEig(BigFloat(u(rng)), BigFloat(u(rng)))};
        smalldiv::OmegaOptions opts;
        opts.qcap = 32;
        auto res = smalldiv::omega_sequence(lam, 7, opts);
        for (std::size_t k = 1; k < res.omega.size(); ++k) CHECK(res.omega[k] <= res.omega[k - 1]);
        CHECK(res.capped);  // 2^6 = 64 > 32
        CHECK(res.capped_from_k == 6);
    }
}

TEST_CASE("brjuno_partials: boundary examples") {
    SUBCASE("omega = 1 gives zero partials") {
        std::vector<BigFloat> omega(6, BigFloat(1));
        for (const auto& p : smalldiv::brjuno_partials(omega))
            CHECK(static_cast<double>(p) == doctest::Approx(0.0));
    }
    SUBCASE("omega_p = exp(-2^p) gives linearly growing partials") {
        std::vector<BigFloat> omega;
        for (unsigned p = 0; p < 8; ++p) omega.push_back(exp(BigFloat(-pow(BigFloat(2), p))));
        auto partials = smalldiv::brjuno_partials(omega);
        for (unsigned p = 0; p < 8; ++p)
            CHECK(static_cast<double>(partials[p]) == doctest::Approx(p + 1.0).epsilon(1e-12));
    }
    SUBCASE("nonpositive omega rejected") {
        CHECK_THROWS_AS((void)smalldiv::brjuno_partials({BigFloat(1), BigFloat(0)}), DomainError);
    }
}

TEST_CASE("brjuno_partials: golden ratio eigenvalues stay bounded") {
    PrecisionGuard prec(kDefaultPrecisionBits);
    BigFloat gamma = (sqrt(BigFloat(5)) - 1) / 2;
    std::vector<CEig> lam{CEig(BigFloat(1)), CEig(BigFloat(-gamma))};
    auto res = smalldiv::omega_sequence(lam, 10);
    auto partials = smalldiv::brjuno_partials(res.omega);
    // Brjuno condition holds: the tail increments shrink geometrically
    double last = static_cast<double>(partials.back());
    CHECK(last < 10.0);
    double inc_late = static_cast<double>(BigFloat(partials[9] - partials[8]));
    double inc_early = static_cast<double>(BigFloat(partials[1] - partials[0]));
    CHECK(inc_late < std::max(inc_early, 1e-3));
}

TEST_CASE("carletti_marmi_sequence: boundary examples") {
    SUBCASE("beta = alpha, omega = 1: identically zero, condition holds") {
        std::vector<BigFloat> omega(9, BigFloat(1));
        auto cm = smalldiv::carletti_marmi_sequence(omega, 1.0, 1.0);
        for (const auto& v : cm.values) CHECK(static_cast<double>(v) == doctest::Approx(0.0));
        CHECK(cm.holds_at_horizon);
    }
    SUBCASE("constructed omega cancels the factorial term exactly") {
        // choose omega so that -2 sum ln(omega_{p+1})/2^p telescopes to
        // (1/2^k) ln (2^k!)^{beta-alpha}: the bracket is identically zero
        const double gap = 1.0;
        std::vector<BigFloat> omega;
        BigFloat t_prev(0);
        for (unsigned k = 0; k < 10; ++k) {
            BigFloat two_k = pow(BigFloat(2), k);
            BigFloat t_k = BigFloat(gap) * lgamma(BigFloat(two_k + 1)) / two_k;
            BigFloat ln_omega = -pow(BigFloat(2), k) * (t_k - t_prev) / 2;
            omega.push_back(exp(ln_omega));
            t_prev = t_k;
        }
        auto cm = smalldiv::carletti_marmi_sequence(omega, 0.0, gap);
        for (const auto& v : cm.values) CHECK(std::abs(static_cast<double>(v)) < 1e-9);
        CHECK(cm.holds_at_horizon);
    }
    SUBCASE("beta = alpha with omega_k = exp(-2^k): grows, condition fails") {
        std::vector<BigFloat> omega;
        for (unsigned p = 0; p < 9; ++p) omega.push_back(exp(BigFloat(-pow(BigFloat(2), p))));
        auto cm = smalldiv::carletti_marmi_sequence(omega, 1.0, 1.0);
        CHECK(static_cast<double>(cm.values.back()) > static_cast<double>(cm.values.front()));
        CHECK_FALSE(cm.holds_at_horizon);
    }
    SUBCASE("beta < alpha rejected") {
        std::vector<BigFloat> omega(4, BigFloat(1));
        CHECK_THROWS_AS((void)smalldiv::carletti_marmi_sequence(omega, 2.0, 1.0), ParamError);
    }
}

TEST_CASE("siegel_fit: exact power laws") {
    SUBCASE("a_k = 1/k") {
        std::vector<BigFloat> a;
        for (unsigned k = 1; k <= 12; ++k) a.push_back(BigFloat(1) / k);
        auto fit = smalldiv::siegel_fit(a);
        CHECK(fit.tau == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(fit.c == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(fit.residual == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("a_k = 1") {
        std::vector<BigFloat> a(8, BigFloat(1));
        auto fit = smalldiv::siegel_fit(a);
        CHECK(fit.tau == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(fit.c == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("too few records") {
        std::vector<BigFloat> a{BigFloat(1), BigFloat(2), BigFloat(3)};  // only k=1 is a record
        CHECK_THROWS_AS((void)smalldiv::siegel_fit(a), InsufficientDataError);
    }
}

TEST_CASE("siegel_fit: golden-ratio a_k has tau near 1") {
    PrecisionGuard prec(kDefaultPrecisionBits);
    BigFloat gamma = (sqrt(BigFloat(5)) - 1) / 2;
    auto L = LinearPart<BigFloat>::diagonal({BigFloat(1), BigFloat(-gamma)});
    auto a_opt = homological::a_sequence(L, 10);
    std::vector<BigFloat> a;
    for (const auto& v : a_opt) {
        REQUIRE(v.has_value());
        a.push_back(*v);
    }
    auto fit = smalldiv::siegel_fit(a);
    CHECK(fit.tau >= 0.8);
    CHECK(fit.tau <= 1.2);
}

TEST_CASE("eta_sequence: frozen examples") {
    SUBCASE("alpha = 0, a = 1: all ones") {
        std::vector<Rat> a(8, Rat(1));
        auto eta = smalldiv::eta_sequence<Rat>(a, 0.0, 8);
        for (const auto& e : eta) CHECK(e == Rat(1));
    }
    SUBCASE("alpha = 1, a = 1: eta_1 = 2, eta_2 = 6") {
        std::vector<Rat> a(8, Rat(1));
        auto eta = smalldiv::eta_sequence<Rat>(a, 1.0, 8);
        CHECK(eta[0] == Rat(1));
        CHECK(eta[1] == Rat(2));   // 2! eta_0^2
        CHECK(eta[2] == Rat(6));   // max(2! eta_0 eta_1, 3! eta_0^3) = max(4, 6)
    }
    SUBCASE("alpha = 0, a = 1/2: doubling against the enumeration oracle") {
        std::vector<Rat> a(6, Rat(1, 2));
        auto eta = smalldiv::eta_sequence<Rat>(a, 0.0, 6);
        auto oracle = oracles::eta_by_enumeration<Rat>(a, 0.0, 6);
        CHECK(eta[1] == Rat(2));
        CHECK(eta[2] == oracle[2]);  // = 4: 2 * max(eta_0 eta_1, eta_0^3)
        CHECK(eta[2] == Rat(4));
        for (unsigned k = 0; k <= 6; ++k) CHECK(eta[k] == oracle[k]);
    }
}

TEST_CASE("eta_sequence: DP equals exhaustive enumeration (exact, kmax <= 6)") {
    std::mt19937_64 rng(1212);
    for (double alpha : {0.0, 1.0, 2.0}) {
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<Rat> a;
            for (unsigned k = 0; k < 6; ++k) a.push_back(Rat(1 + (int)(rng() % 5), 1 + (int)(rng() % 4)));
            auto dp = smalldiv::eta_sequence<Rat>(a, alpha, 6);
            auto oracle = oracles::eta_by_enumeration<Rat>(a, alpha, 6);
            for (unsigned k = 0; k <= 6; ++k) CHECK(dp[k] == oracle[k]);
        }
    }
}

TEST_CASE("sigma_sequence: frozen examples and enumeration oracle") {
    SUBCASE("sigma_1 = C^2 sigma_0^2") {
        auto res = smalldiv::sigma_sequence<Rat>(Rat(3), Rat(5), 1);
        CHECK(res.sigma[1] == Rat(9) * Rat(25));
    }
    SUBCASE("C -> 0 collapses the tail") {
        auto res = smalldiv::sigma_sequence<Rat>(Rat(0), Rat(2), 5);
        for (unsigned d = 1; d <= 5; ++d) CHECK(res.sigma[d] == Rat(0));
    }
    SUBCASE("DP equals exhaustive enumeration (exact, delta <= 6)") {
        std::mt19937_64 rng(99);
        for (int rep = 0; rep < 4; ++rep) {
            Rat c(1 + (int)(rng() % 3), 1 + (int)(rng() % 5));
            Rat s0(1 + (int)(rng() % 4), 1 + (int)(rng() % 3));
            auto dp = smalldiv::sigma_sequence<Rat>(c, s0, 6);
            auto oracle = oracles::sigma_by_enumeration<Rat>(c, s0, 6);
            for (unsigned d = 0; d <= 6; ++d) CHECK(dp.sigma[d] == oracle[d]);
        }
    }
    SUBCASE("C = 0.1, sigma_0 = sqrt(2): growth ratios converge") {
        PrecisionGuard prec(kDefaultPrecisionBits);
        auto res = smalldiv::sigma_sequence<BigFloat>(BigFloat(1) / 10, sqrt(BigFloat(2)), 20);
        // ratio sequence settles: successive ratios differ by ever less
        double r18 = static_cast<double>(res.ratios[18]);
        double r19 = static_cast<double>(res.ratios[19]);
        double r10 = static_cast<double>(res.ratios[10]);
        double r11 = static_cast<double>(res.ratios[11]);
        CHECK(std::abs(r19 - r18) < std::abs(r11 - r10) + 1e-12);
        CHECK(r19 > 0);
        CHECK(r19 < 1.0);  // the majorant series has a positive convergence radius
    }
}

TEST_CASE("gevrey_bound_fit: exact regressions") {
    SUBCASE("eta_k = (k!)^2") {
        std::vector<BigFloat> eta;
        for (unsigned k = 0; k <= 8; ++k) {
            BigFloat f(factorial(static_cast<unsigned long>(k)));
            eta.push_back(f * f);
        }
        auto fit = smalldiv::gevrey_bound_fit(eta);
        CHECK(fit.beta_hat == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(fit.c_hat == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("eta_k = 3^k k!") {
        std::vector<BigFloat> eta;
        for (unsigned k = 0; k <= 8; ++k)
            eta.push_back(pow(BigFloat(3), k) * BigFloat(factorial(static_cast<unsigned long>(k))));
        auto fit = smalldiv::gevrey_bound_fit(eta);
        CHECK(fit.beta_hat == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(fit.c_hat == doctest::Approx(3.0).epsilon(1e-9));
    }
    SUBCASE("eta from (alpha = 1, a = 1) fits beta in [0.9, 1.3]") {
        std::vector<BigFloat> a(20, BigFloat(1));
        auto eta = smalldiv::eta_sequence<BigFloat>(a, 1.0, 20);
        auto fit = smalldiv::gevrey_bound_fit(eta);
        CHECK(fit.beta_hat >= 0.9);
        CHECK(fit.beta_hat <= 1.3);
    }
    SUBCASE("insufficient data") {
        std::vector<BigFloat> eta{BigFloat(1), BigFloat(2), BigFloat(3)};
        CHECK_THROWS_AS((void)smalldiv::gevrey_bound_fit(eta), InsufficientDataError);
    }
}

TEST_CASE("Carletti-Marmi consistency: Brjuno spectrum gives beta_hat <= beta + 0.5") {
    // golden-ratio eigenvalues satisfy Brjuno, i.e. (omega_{beta,alpha}) with
    // beta = alpha = 0; the fitted growth of eta must stay within 0.5 of 0
    PrecisionGuard prec(kDefaultPrecisionBits);
    BigFloat gamma = (sqrt(BigFloat(5)) - 1) / 2;
    std::vector<CEig> lam{CEig(BigFloat(1)), CEig(BigFloat(-gamma))};
    auto omega = smalldiv::omega_sequence(lam, 10);
    auto cm = smalldiv::carletti_marmi_sequence(omega.omega, 0.0, 0.0);
    CHECK(cm.holds_at_horizon);  // bounded bracket at this horizon

    auto L = LinearPart<BigFloat>::diagonal({BigFloat(1), BigFloat(-gamma)});
    auto a_opt = homological::a_sequence(L, 12);
    std::vector<BigFloat> a;
    for (const auto& v : a_opt) a.push_back(*v);
    auto eta = smalldiv::eta_sequence<BigFloat>(a, 0.0, 12);
    auto fit = smalldiv::gevrey_bound_fit(eta);
    CHECK(fit.beta_hat <= 0.5);
}
