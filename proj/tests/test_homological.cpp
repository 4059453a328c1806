#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gnf/homological.hpp"
#include "oracles.hpp"

using namespace gnf;
using homological::SolveMode;

TEST_CASE("degree operator: diagonal lambda = (1,-2), k = 1") {
    auto L = LinearPart<Rat>::diagonal({Rat(1), Rat(-2)});
    auto op = homological::build_degree_operator(L, 1);
    CHECK(op.diagonal);
    CHECK(op.dimension() == 6);  // 3 multiindices of degree 2, 2 components
    REQUIRE(op.a_k.has_value());
    CHECK(static_cast<double>(*op.a_k) == doctest::Approx(1.0).epsilon(1e-12));

    // brute-force min over |Q| = 2
    auto bf = oracles::min_divisor_at_degree({BigFloat(1), BigFloat(-2)}, 2, BigFloat(0));
    REQUIRE(bf.has_value());
    CHECK(static_cast<double>(BigFloat(*op.a_k - *bf)) == doctest::Approx(0.0));
}

TEST_CASE("degree operator: resonant monomial x1^3 x2 d1 for lambda = (1,-2)") {
    auto L = LinearPart<Rat>::diagonal({Rat(1), Rat(-2)});
    auto op = homological::build_degree_operator(L, 3);
    // (3,1).(1,-2) - 1 = 0: resonant direction must span part of both kernels
    HomogeneousVF<Rat> res(2, 4);
    res.add_term(0, MultiIndex({3, 1}), Rat(1));
    auto sol = homological::solve_cohomological(op, res, SolveMode::normal_form);
    CHECK(sol.transform.is_zero());
    CHECK((sol.normal_part - res).is_zero());
    // it is in ker(d0) too: [L, res] = 0
    CHECK(lie_bracket(linear_as_field(L), res).is_zero());
    bool found = false;
    for (const auto& v : op.kernel_adjoint) {
        auto f = op.vector_to_field(v);
        if (!k_is_zero(f.component(0).coefficient(MultiIndex({3, 1})))) found = true;
    }
    CHECK(found);
}

TEST_CASE("degree operator: L = 0 has no nonzero singular values") {
    auto L = LinearPart<Rat>::from_matrix(2, std::vector<Rat>(4, Rat(0)));
    auto op = homological::build_degree_operator(L, 2);
    CHECK_FALSE(op.a_k.has_value());
    CHECK(op.kernel_adjoint.size() == op.dimension());
}

TEST_CASE("a_sequence: integer spectra") {
    SUBCASE("lambda = (1,-2): a_k equals the brute-force scan (1,1,3 pattern)") {
        // every divisor at |Q| = k+1 is congruent to k mod 3, so a_k = 3 when
        // 3 | k and 1 otherwise; the scan is the authority
        auto a = homological::a_sequence(LinearPart<Rat>::diagonal({Rat(1), Rat(-2)}), 6);
        for (unsigned k = 1; k <= 6; ++k) {
            REQUIRE(a[k - 1].has_value());
            auto bf = oracles::min_divisor_at_degree({BigFloat(1), BigFloat(-2)}, k + 1, BigFloat(0));
            REQUIRE(bf.has_value());
            CHECK(static_cast<double>(BigFloat(*a[k - 1] - *bf)) == doctest::Approx(0.0));
            CHECK(static_cast<double>(*a[k - 1]) == doctest::Approx(k % 3 == 0 ? 3.0 : 1.0));
        }
    }
    SUBCASE("lambda = (1,2): Poincare domain, a_1 = 1 with nonzero values {1,2,3}") {
        auto op = homological::build_degree_operator(LinearPart<Rat>::diagonal({Rat(1), Rat(2)}), 1);
        REQUIRE(op.a_k.has_value());
        CHECK(static_cast<double>(*op.a_k) == doctest::Approx(1.0));
        std::set<double> nonzero;
        for (const auto& sv : op.singular_values)
            if (sv > 0) nonzero.insert(static_cast<double>(sv));
        CHECK(nonzero == std::set<double>{1.0, 2.0, 3.0});
    }
}

TEST_CASE("a_sequence: golden-ratio eigenvalues match the brute-force scan") {
    PrecisionGuard prec(kDefaultPrecisionBits);
    BigFloat gamma = (sqrt(BigFloat(5)) - 1) / 2;
    auto L = LinearPart<BigFloat>::diagonal({BigFloat(1), BigFloat(-gamma)});
    auto a = homological::a_sequence(L, 8);
    for (unsigned k = 1; k <= 8; ++k) {
        REQUIRE(a[k - 1].has_value());
        auto bf = oracles::min_divisor_at_degree({BigFloat(1), BigFloat(-gamma)}, k + 1,
                                                 pow(BigFloat(2), -200));
        REQUIRE(bf.has_value());
        double rel = static_cast<double>(BigFloat(abs(*a[k - 1] - *bf) / *bf));
        CHECK(rel < 1e-10);
        CHECK(*a[k - 1] > 0);
    }
}

TEST_CASE("a_k is invariant under coordinate permutations (diagonal path)") {
    auto a1 = homological::a_sequence(LinearPart<Rat>::diagonal({Rat(1), Rat(-2), Rat(3)}), 4);
    auto a2 = homological::a_sequence(LinearPart<Rat>::diagonal({Rat(3), Rat(1), Rat(-2)}), 4);
    for (unsigned k = 0; k < 4; ++k) {
        REQUIRE(a1[k].has_value());
        REQUIRE(a2[k].has_value());
        CHECK(static_cast<double>(BigFloat(*a1[k] - *a2[k])) == doctest::Approx(0.0));
    }
}

TEST_CASE("a_k is invariant under orthogonal conjugation (general float path)") {
    PrecisionGuard prec(kDefaultPrecisionBits);
    // The Fischer structure is orthogonally invariant, so conjugating the
    // diagonal by a rotation must not change the singular values of d0.
    BigFloat c = cos(BigFloat(1) / 3), s = sin(BigFloat(1) / 3);
    BigFloat l1(1), l2(-2);
    // R diag(l1,l2) R^T
    std::vector<BigFloat> m{c * c * l1 + s * s * l2, c * s * (l1 - l2),
                            c * s * (l1 - l2), s * s * l1 + c * c * l2};
    auto Lrot = LinearPart<BigFloat>::from_matrix(2, m);
    CHECK_FALSE(Lrot.is_diagonal());
    auto Ldiag = LinearPart<BigFloat>::diagonal({l1, l2});
    for (unsigned k = 1; k <= 3; ++k) {
        auto op_rot = homological::build_degree_operator(Lrot, k);
        auto op_diag = homological::build_degree_operator(Ldiag, k);
        REQUIRE(op_rot.a_k.has_value());
        REQUIRE(op_diag.a_k.has_value());
        double rel = static_cast<double>(BigFloat(abs(*op_rot.a_k - *op_diag.a_k) / *op_diag.a_k));
        CHECK(rel < 1e-40);  // both sides at 256-bit precision
    }
}

TEST_CASE("solve_cohomological: 1-D quadratic hand solve") {
    auto L = LinearPart<Rat>::diagonal({Rat(-1)});
    auto op = homological::build_degree_operator(L, 1);
    HomogeneousVF<Rat> rhs(1, 2);
    rhs.add_term(0, MultiIndex({2}), Rat(7));  // a = 7
    auto sol = homological::solve_cohomological(op, rhs, SolveMode::linearize);
    // (2 lambda - lambda) u = a with lambda = -1 -> u = -a
    CHECK(sol.transform.component(0).coefficient(MultiIndex({2})) == Rat(-7));
    CHECK(sol.normal_part.is_zero());
    CHECK(sol.residual == 0);
}

TEST_CASE("solve_cohomological: resonant right-hand side") {
    auto L = LinearPart<Rat>::diagonal({Rat(1), Rat(-2)});
    auto op = homological::build_degree_operator(L, 3);
    HomogeneousVF<Rat> rhs(2, 4);
    rhs.add_term(0, MultiIndex({3, 1}), Rat(2));
    rhs.add_term(0, MultiIndex({0, 4}), Rat(1));  // nonresonant addition
    SUBCASE("normal form mode projects") {
        auto sol = homological::solve_cohomological(op, rhs, SolveMode::normal_form);
        CHECK(sol.normal_part.component(0).coefficient(MultiIndex({3, 1})) == Rat(2));
        CHECK(sol.normal_part.component(0).coefficient(MultiIndex({0, 4})) == Rat(0));
        CHECK_FALSE(sol.transform.is_zero());
        CHECK(sol.residual == 0);
    }
    SUBCASE("linearize mode aborts with the offending part") {
        try {
            (void)homological::solve_cohomological(op, rhs, SolveMode::linearize);
            FAIL("expected NotLinearizableError");
        } catch (const NotLinearizableError& e) {
            CHECK(e.degree == 4);
            CHECK(e.resonant_part.find("x1^3*x2") != std::string::npos);
        }
    }
}

TEST_CASE("solve_cohomological: exact reconstruction and orthogonality (rational, diagonal)") {
    std::mt19937_64 rng(31337);
    auto L = LinearPart<Rat>::diagonal({Rat(1), Rat(-2), Rat(3, 2)});
    for (unsigned k = 1; k <= 4; ++k) {
        auto op = homological::build_degree_operator(L, k);
        auto rhs = oracles::random_homog<Rat>(rng, 3, k + 1, 0.6);
        auto sol = homological::solve_cohomological(op, rhs, SolveMode::normal_form);
        // exact reconstruction: d0 U + N = rhs
        auto recon = lie_bracket(linear_as_field(L), sol.transform) + sol.normal_part - rhs;
        CHECK(recon.is_zero());
        // N orthogonal to the range of d0: <N, d0 W> = 0 for every basis element W
        for (const auto& [i, q] : op.basis) {
            HomogeneousVF<Rat> w(3, k + 1);
            w.add_term(i, q, Rat(1));
            CHECK(fischer_inner(sol.normal_part, lie_bracket(linear_as_field(L), w)) == Rat(0));
        }
        // U orthogonal to ker d0 (diagonal: kernel spanned by resonant monomials)
        for (const auto& v : op.kernel_adjoint)
            CHECK(fischer_inner(sol.transform, op.vector_to_field(v)) == Rat(0));
    }
}

TEST_CASE("solve_cohomological: exact minimal-norm solve on a non-diagonal rational matrix") {
    // Jordan-type block: L = [[1,1],[0,1]]; d0 is singular but rational-exact.
    auto L = LinearPart<Rat>::from_matrix(2, {Rat(1), Rat(1), Rat(0), Rat(1)});
    std::mt19937_64 rng(5150);
    for (unsigned k = 1; k <= 3; ++k) {
        auto op = homological::build_degree_operator(L, k);
        auto rhs = oracles::random_homog<Rat>(rng, 2, k + 1, 0.7);
        auto sol = homological::solve_cohomological(op, rhs, SolveMode::normal_form);
        auto recon = lie_bracket(linear_as_field(L), sol.transform) + sol.normal_part - rhs;
        CHECK(recon.is_zero());
        // projection is W-orthogonal to the range
        for (const auto& [i, q] : op.basis) {
            HomogeneousVF<Rat> w(2, k + 1);
            w.add_term(i, q, Rat(1));
            CHECK(fischer_inner(sol.normal_part, lie_bracket(linear_as_field(L), w)) == Rat(0));
        }
    }
}

TEST_CASE("solve_cohomological: float reconstruction at high precision") {
    PrecisionGuard prec(kDefaultPrecisionBits);
    std::mt19937_64 rng(8080);
    BigFloat r2 = sqrt(BigFloat(2));
    auto L = LinearPart<BigFloat>::diagonal({BigFloat(1), BigFloat(-r2)});
    for (unsigned k = 1; k <= 8; ++k) {
        auto op = homological::build_degree_operator(L, k);
        auto rhs = oracles::random_homog<BigFloat>(rng, 2, k + 1, 0.6);
        auto sol = homological::solve_cohomological(op, rhs, SolveMode::normal_form, 1e-10);
        double res = static_cast<double>(sol.residual);
        double scale = static_cast<double>(fischer_norm(rhs));
        CHECK(res <= 1e-10 * std::max(1.0, scale));
    }
}

TEST_CASE("solve_cohomological: shape check") {
    auto L = LinearPart<Rat>::diagonal({Rat(1), Rat(-2)});
    auto op = homological::build_degree_operator(L, 2);
    HomogeneousVF<Rat> rhs(2, 2);  // wrong degree: operator expects k+1 = 3
    rhs.add_term(0, MultiIndex({1, 1}), Rat(1));
    CHECK_THROWS_AS((void)homological::solve_cohomological(op, rhs, SolveMode::normal_form), ShapeError);
}
