#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gnf/flatsolver.hpp"
#include "oracles.hpp"

using namespace gnf;

namespace {

flat::ContractionField contraction_1d(double lo = 0.0, double hi = 1.0) {
    flat::ContractionField f;
    f.n = 1;
    f.p = 0;
    f.eval = [](const flat::Point& x, flat::Point& out) { out.assign(1, -x[0]); };
    f.jacobian = [](const flat::Point&, std::vector<double>& jac) { jac.assign(1, -1.0); };
    f.box.ranges = {{lo, hi}};
    return f;
}

flat::FlatScalar flat_exp_inv_sq() {
    // h = exp(-1/x^2): 3/2-Gevrey flat at 0 with M = 1, eta = 1
    return {gevrey::parse_expr("exp(-1/x^2)"), 1.5, 1.0, 1.0};
}

}  // namespace

TEST_CASE("certify_contraction: margins and failures") {
    SUBCASE("X = -x dx certifies with (2.1, ~1.9)") {
        auto f = contraction_1d();
        auto cert = flat::certify_contraction(f, 21);
        REQUIRE(cert.ok);
        CHECK(cert.c == doctest::Approx(2.1));
        CHECK(cert.C == doctest::Approx(2.0 / 1.05));
    }
    SUBCASE("X = +x dx fails with a witness") {
        auto f = contraction_1d();
        f.eval = [](const flat::Point& x, flat::Point& out) { out.assign(1, +x[0]); };
        auto cert = flat::certify_contraction(f, 21);
        CHECK_FALSE(cert.ok);
        REQUIRE(cert.witness.size() == 1);
        CHECK(cert.witness[0] > 0.0);
    }
    SUBCASE("n = 2, p = 1: positive fiber component fails") {
        flat::ContractionField f;
        f.n = 2;
        f.p = 1;
        f.eval = [](const flat::Point& x, flat::Point& out) {
            out = {-x[0], x[1] * x[0] + 0.5 * x[1]};
        };
        f.box.ranges = {{-0.4, 0.4}, {-0.4, 0.4}};
        auto cert = flat::certify_contraction(f, 9);
        CHECK_FALSE(cert.ok);
        CHECK_FALSE(cert.witness.empty());
    }
    SUBCASE("n = 2, p = 1 genuine normal contraction certifies") {
        flat::ContractionField f;
        f.n = 2;
        f.p = 1;
        f.eval = [](const flat::Point& x, flat::Point& out) {
            out = {0.3 * x[0], -x[1] * (1.0 + 0.1 * x[0])};
        };
        f.box.ranges = {{-0.4, 0.4}, {-0.4, 0.4}};
        auto cert = flat::certify_contraction(f, 9);
        REQUIRE(cert.ok);
        CHECK(cert.c >= cert.C);
        CHECK(cert.C > 0);
    }
}

TEST_CASE("solve_lie_derivative: 1-D quadrature oracle at three points") {
    auto X = contraction_1d();
    REQUIRE(flat::certify_and_store(X, 21));
    auto h = flat_exp_inv_sq();
    for (double x0 : {0.3, 0.5, 0.7}) {
        auto rep = flat::solve_lie_derivative(X, h, {x0}, 1e-8);
        // f(x) = -int_0^x exp(-1/s^2)/s ds by the change of variables s = x e^{-u}
        double oracle = -oracles::simpson([](double s) { return s > 0 ? std::exp(-1.0 / (s * s)) / s : 0.0; },
                                          1e-10, x0);
        CHECK(std::abs(rep.value - oracle) < 1e-6);
        CHECK(rep.sandwich_ok);
        CHECK(rep.u_max > 0);
    }
}

TEST_CASE("solve_lie_derivative: trivial and error paths") {
    auto X = contraction_1d();
    REQUIRE(flat::certify_and_store(X, 21));
    SUBCASE("h = 0 gives f = 0") {
        flat::FlatScalar zero{gevrey::parse_expr("0"), 1.5, 1.0, 1.0};
        auto rep = flat::solve_lie_derivative(X, zero, {0.5}, 1e-8);
        CHECK(rep.value == doctest::Approx(0.0));
    }
    SUBCASE("point on the fiber gives 0") {
        auto rep = flat::solve_lie_derivative(X, flat_exp_inv_sq(), {0.0}, 1e-8);
        CHECK(rep.value == 0.0);
    }
    SUBCASE("h = 1 is not flat: divergence error") {
        flat::FlatScalar one{gevrey::parse_expr("1"), 1.5, 1.0, 1.0};
        CHECK_THROWS_AS((void)flat::solve_lie_derivative(X, one, {0.5}, 1e-8), DivergenceError);
    }
    SUBCASE("missing decay constants: configuration error") {
        flat::FlatScalar h{gevrey::parse_expr("exp(-1/x^2)"), 1.5, std::nullopt, std::nullopt};
        CHECK_THROWS_AS((void)flat::solve_lie_derivative(X, h, {0.5}, 1e-8), ConfigError);
    }
    SUBCASE("uncertified field: configuration error") {
        auto Y = contraction_1d();
        CHECK_THROWS_AS((void)flat::solve_lie_derivative(Y, flat_exp_inv_sq(), {0.5}, 1e-8), ConfigError);
    }
    SUBCASE("point outside the box: domain error") {
        CHECK_THROWS_AS((void)flat::solve_lie_derivative(X, flat_exp_inv_sq(), {1.5}, 1e-8), DomainError);
    }
}

TEST_CASE("solve_lie_derivative: linearity in h") {
    auto X = contraction_1d();
    REQUIRE(flat::certify_and_store(X, 21));
    flat::FlatScalar h1 = flat_exp_inv_sq();
    flat::FlatScalar h2{gevrey::parse_expr("x^2*exp(-1/x^2)"), 1.5, 1.0, 1.0};
    flat::FlatScalar hsum{gevrey::parse_expr("exp(-1/x^2) + x^2*exp(-1/x^2)"), 1.5, 2.0, 1.0};
    double tol = 1e-9;
    for (double x0 : {0.4, 0.6}) {
        double a = flat::solve_lie_derivative(X, h1, {x0}, tol).value;
        double b = flat::solve_lie_derivative(X, h2, {x0}, tol).value;
        double s = flat::solve_lie_derivative(X, hsum, {x0}, tol).value;
        CHECK(std::abs(s - (a + b)) <= 2 * tol + 1e-12);
    }
}

TEST_CASE("solve_lie_derivative: decay sandwich holds along trajectories") {
    auto X = contraction_1d();
    REQUIRE(flat::certify_and_store(X, 21));
    auto rep = flat::solve_lie_derivative(X, flat_exp_inv_sq(), {0.7}, 1e-8);
    REQUIRE(rep.trace.size() > 3);
    for (const auto& s : rep.trace) {
        CHECK(s.rho <= 0.7 * std::exp(-X.C * s.u / 2.0) * (1 + 1e-5));
        CHECK(s.rho >= 0.7 * std::exp(-X.c * s.u / 2.0) * (1 - 1e-5));
    }
    CHECK(rep.sandwich_ok);
}

TEST_CASE("solve_lie_derivative: residual L_X f - h on a grid") {
    auto X = contraction_1d();
    REQUIRE(flat::certify_and_store(X, 21));
    auto h = flat_exp_inv_sq();
    std::vector<flat::Point> grid;
    for (double x = 0.25; x <= 0.76; x += 0.05) grid.push_back({x});
    double residual = flat::lie_derivative_residual(X, h, grid, 1e-9, 1e-4);
    CHECK(residual <= 1e-4);
}

TEST_CASE("solve_lie_bracket: 1-D closed-form fundamental matrix fixture") {
    auto X = contraction_1d();
    REQUIRE(flat::certify_and_store(X, 21));
    flat::FlatVector Y{{gevrey::parse_expr("exp(-1/x^2)")}, 1.5, 1.0, 1.0};
    SUBCASE("Y = 0 gives Z = 0") {
        flat::FlatVector zero{{gevrey::parse_expr("0")}, 1.5, 1.0, 1.0};
        auto rep = flat::solve_lie_bracket(X, zero, {0.5}, 1e-8);
        CHECK(rep.value[0] == doctest::Approx(0.0));
    }
    SUBCASE("solver value matches the reduced quadrature") {
        // F(x,t) = e^{-t}; Z(x) = -x int_0^x exp(-1/s^2)/s^2 ds
        for (double x0 : {0.4, 0.5, 0.7}) {
            auto rep = flat::solve_lie_bracket(X, Y, {x0}, 1e-8);
            double oracle = -x0 * oracles::simpson(
                                      [](double s) {
                                          return s > 0 ? std::exp(-1.0 / (s * s)) / (s * s) : 0.0;
                                      },
                                      1e-10, x0);
            CHECK(std::abs(rep.value[0] - oracle) < 1e-6);
            CHECK(rep.sandwich_ok);
            CHECK(rep.max_condition < 1e8);
        }
    }
    SUBCASE("[X, Z] - Y residual on a grid") {
        std::vector<flat::Point> grid;
        for (double x = 0.3; x <= 0.71; x += 0.1) grid.push_back({x});
        double residual = flat::lie_bracket_residual(X, Y, grid, 1e-9, 1e-4);
        CHECK(residual <= 1e-4);
    }
}

TEST_CASE("flat_decay_check: model fits") {
    SUBCASE("f = exp(-1/x) at beta = 2 recovers eta = 1") {
        std::vector<std::array<double, 2>> samples;
        for (double x = 0.05; x <= 0.5; x += 0.05) samples.push_back({x, std::exp(-1.0 / x)});
        auto fit = flat::flat_decay_check(samples, 2.0, 1.0);
        CHECK(fit.ok);
        CHECK(fit.eta_fit == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("f = x^5 is not flat-exponential") {
        std::vector<std::array<double, 2>> samples;
        for (double x = 0.05; x <= 0.5; x += 0.05) samples.push_back({x, std::pow(x, 5)});
        auto fit = flat::flat_decay_check(samples, 2.0, 1.0);
        CHECK_FALSE(fit.ok);
    }
    SUBCASE("all-zero samples pass vacuously") {
        std::vector<std::array<double, 2>> samples{{0.1, 0.0}, {0.2, 0.0}};
        auto fit = flat::flat_decay_check(samples, 2.0, 1.0);
        CHECK(fit.ok);
        CHECK(fit.vacuous);
    }
    SUBCASE("solver output is flat-exponential") {
        auto X = contraction_1d();
        REQUIRE(flat::certify_and_store(X, 21));
        auto h = flat_exp_inv_sq();
        std::vector<std::array<double, 2>> samples;
        for (double x = 0.2; x <= 0.6; x += 0.05)
            samples.push_back({x, flat::solve_lie_derivative(X, h, {x}, 1e-12).value});
        auto fit = flat::flat_decay_check(samples, 1.5, 1.0);
        CHECK(fit.ok);
        CHECK(fit.eta_fit > 0);
    }
}

TEST_CASE("solve_lie_bracket: 2-D coupled field against finite differences") {
    flat::ContractionField X;
    X.n = 2;
    X.p = 0;  // fiber is the origin: rho^2 = x1^2 + x2^2
    X.eval = [](const flat::Point& x, flat::Point& out) {
        out = {-x[0] - 0.2 * x[1], -x[1] + 0.1 * x[0]};
    };
    X.box.ranges = {{-0.8, 0.8}, {-0.8, 0.8}};
    REQUIRE(flat::certify_and_store(X, 15));
    flat::FlatVector Y{{gevrey::parse_expr("exp(-1/x^2)"), nullptr}, 1.5, 1.0, 1.0};
    std::vector<flat::Point> grid{{0.3, 0.2}, {0.4, -0.3}, {-0.25, 0.45}};
    double residual = flat::lie_bracket_residual(X, Y, grid, 1e-9, 1e-4);
    CHECK(residual <= 1e-3);
}

TEST_CASE("solve_lie_bracket: condition-number guard") {
    // anisotropic rates: F = diag(e^{-u/2}, e^{-8u}) has condition e^{7.5u},
    // which outruns 1/tol within the integration horizon
    flat::ContractionField X;
    X.n = 2;
    X.p = 0;
    X.eval = [](const flat::Point& x, flat::Point& out) { out = {-0.5 * x[0], -8.0 * x[1]}; };
    X.jacobian = [](const flat::Point&, std::vector<double>& jac) {
        jac = {-0.5, 0.0, 0.0, -8.0};
    };
    X.box.ranges = {{-1.0, 1.0}, {-1.0, 1.0}};
    REQUIRE(flat::certify_and_store(X, 9));
    flat::FlatVector Y{{gevrey::parse_expr("exp(-1/x^2)"), nullptr}, 1.5, 1.0, 1.0};
    CHECK_THROWS_AS((void)flat::solve_lie_bracket(X, Y, {0.5, 0.5}, 1e-3), IllConditionedError);

    // mild anisotropy stays within the guard at the same tolerance
    flat::ContractionField M;
    M.n = 2;
    M.p = 0;
    M.eval = [](const flat::Point& x, flat::Point& out) { out = {-0.8 * x[0], -1.2 * x[1]}; };
    M.jacobian = [](const flat::Point&, std::vector<double>& jac) {
        jac = {-0.8, 0.0, 0.0, -1.2};
    };
    M.box.ranges = {{-1.0, 1.0}, {-1.0, 1.0}};
    REQUIRE(flat::certify_and_store(M, 9));
    auto rep = flat::solve_lie_bracket(M, Y, {0.5, 0.5}, 1e-6);
    CHECK(rep.max_condition > 1.0);
    CHECK(rep.max_condition < 1e6);
}
