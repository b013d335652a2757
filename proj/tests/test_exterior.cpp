#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mage/exterior.hpp"
#include "test_support.hpp"

using namespace mage;
using namespace mage::testing;

TEST_CASE("lie_action of sp elements kills Omega") {
    std::mt19937_64 rng(3);
    for (int n : {2, 3}) {
        SymplecticContext ctx = SymplecticContext::make(n);
        const auto& basis = sp_basis(n).elems;
        std::uniform_int_distribution<int> cv(-2, 2);
        for (int t = 0; t < 20; ++t) {
            RatMat A(2 * n, 2 * n);
            for (const auto& b : basis) A = A + b.scaled(Rational(cv(rng)));
            CHECK(lie_action(A, ctx.Omega).is_zero());
        }
    }
}

TEST_CASE("lie_action of the identity scales by minus the degree") {
    std::mt19937_64 rng(17);
    for (int k : {1, 2, 3}) {
        Form a = random_form(rng, 2, k, false, 2, 2);
        CHECK(lie_action(RatMat::identity(4), a) == scale(a, Rational(-k)));
    }
}

TEST_CASE("lie_action agrees with the slot-evaluation oracle") {
    // A = diag(1,-1,-1,1) in order (q1,q2,p1,p2): L_A (dq1^dq2) = 0
    RatMat A(4, 4);
    A.at(0, 0) = Rational(1);
    A.at(1, 1) = Rational(-1);
    A.at(2, 2) = Rational(-1);
    A.at(3, 3) = Rational(1);
    Form a = basis_form(2, {1, 2}, Rational(1));
    CHECK(lie_action(A, a).is_zero());

    // random oracle check: (L_A a)(X,Y) = -a(AX,Y) - a(X,AY)
    std::mt19937_64 rng(19);
    for (int t = 0; t < 20; ++t) {
        RatMat M(4, 4);
        std::uniform_int_distribution<int> cv(-3, 3);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) M.at(i, j) = Rational(cv(rng));
        Form w = random_form(rng, 2, 2, false, 2, 2);
        Form law = lie_action(M, w);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                PolyVectorField ei = PolyVectorField::basis(2, i);
                PolyVectorField ej = PolyVectorField::basis(2, j);
                PolyVectorField Mei = PolyVectorField::zero(2);
                PolyVectorField Mej = PolyVectorField::zero(2);
                for (int r = 0; r < 4; ++r) {
                    Mei.comps[r] = Poly::constant(4, M.at(r, i));
                    Mej.comps[r] = Poly::constant(4, M.at(r, j));
                }
                Poly lhs = eval_form_on(law, {ei, ej});
                Poly rhs = -eval_form_on(w, {Mei, ej}) - eval_form_on(w, {ei, Mej});
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("a_iso inverts the volume contraction") {
    std::mt19937_64 rng(29);
    for (int n : {2, 3}) {
        SymplecticContext ctx = SymplecticContext::make(n);
        for (int t = 0; t < 20; ++t) {
            PolyVectorField X = random_vector_field(rng, n, true);
            Form theta = contract(X, ctx.vol);
            CHECK(a_iso(theta, ctx) == X);
        }
    }
}

TEST_CASE("a_iso fixed cases") {
    SymplecticContext ctx = SymplecticContext::make(2);
    // theta = dq1 ^ dq2 ^ dp2 -> -del p1
    Form theta = basis_form(2, {1, 2, 4}, Rational(1));
    PolyVectorField v = a_iso(theta, ctx);
    PolyVectorField expect = PolyVectorField::zero(2);
    expect.comps[2] = Poly::constant(4, Rational(-1));
    CHECK(v == expect);
    // defining property <dx_j, A(theta)> vol = dx_j ^ theta for every j
    std::mt19937_64 rng(71);
    Form rnd = random_form(rng, 2, 3, false, 2, 2);
    PolyVectorField a = a_iso(rnd, ctx);
    for (int j = 0; j < 4; ++j) {
        Form lhs = scale(ctx.vol, a.comps[j]);
        Form rhs = wedge(basis_form(2, {j + 1}, Rational(1)), rnd);
        CHECK(lhs == rhs);
    }
    // zero and wrong-degree cases
    CHECK(a_iso(form_zero(2, 3), ctx).is_zero());
    CHECK_THROWS_AS(a_iso(form_zero(2, 2), ctx), DomainError);
}

TEST_CASE("homotopy potential fixed cases") {
    SymplecticContext ctx = SymplecticContext::make(2);
    // h(dq1) = q1
    Form dq1 = basis_form(2, {1}, Rational(1));
    Form h1 = homotopy_potential(dq1, ctx);
    Form expect1 = form_zero(2, 0);
    form_add_term(expect1, 0, Poly::variable(4, 0));
    CHECK(h1 == expect1);

    // h(Omega) = (q1 dp1 - p1 dq1 + q2 dp2 - p2 dq2) / 2
    Form hO = homotopy_potential(ctx.Omega, ctx);
    Form expect2 = basis_form(2, {3}, Poly::variable(4, 0).scaled(Rational(1, 2))) +
                   basis_form(2, {1}, Poly::variable(4, 2).scaled(Rational(-1, 2))) +
                   basis_form(2, {4}, Poly::variable(4, 1).scaled(Rational(1, 2))) +
                   basis_form(2, {2}, Poly::variable(4, 3).scaled(Rational(-1, 2)));
    CHECK(hO == expect2);
    CHECK(ext_d(hO) == ctx.Omega);

    // h(dq1 ^ dq2) = (q1 dq2 - q2 dq1) / 2
    Form dq12 = basis_form(2, {1, 2}, Rational(1));
    Form h3 = homotopy_potential(dq12, ctx);
    Form expect3 = basis_form(2, {2}, Poly::variable(4, 0).scaled(Rational(1, 2))) +
                   basis_form(2, {1}, Poly::variable(4, 1).scaled(Rational(-1, 2)));
    CHECK(h3 == expect3);

    // non-closed input is rejected with the derivative reported
    Form bad = basis_form(2, {1}, Poly::variable(4, 1)); // q2 dq1
    CHECK_THROWS_WITH_AS(homotopy_potential(bad, ctx),
                         doctest::Contains("not closed"), DomainError);
}

TEST_CASE("homotopy identity d(h(a)) = a on random closed forms") {
    std::mt19937_64 rng(41);
    int count = 0;
    while (count < 200) {
        int n = 2 + (count % 2);
        std::uniform_int_distribution<int> dd(0, 2 * n - 1);
        SymplecticContext ctx = SymplecticContext::make(n);
        Form raw = random_form(rng, n, dd(rng), false, 3, 2);
        Form closed = ext_d(raw);
        if (closed.is_zero()) continue;
        Form h = homotopy_potential(closed, ctx);
        CHECK(ext_d(h) == closed);
        ++count;
    }
}

TEST_CASE("divide_by_omega fixed cases") {
    SymplecticContext ctx = SymplecticContext::make(2);
    // roundtrip
    Form dq1 = basis_form(2, {1}, Rational(1));
    CHECK(divide_by_omega(wedge(dq1, ctx.Omega), ctx) == dq1);
    // dq1 ^ dq2 ^ dp1 -> -dq2
    Form theta = basis_form(2, {1, 2, 3}, Rational(1));
    Form beta = divide_by_omega(theta, ctx);
    CHECK(beta == basis_form(2, {2}, Rational(-1)));
    CHECK(wedge(beta, ctx.Omega) == theta);
    // zero input
    CHECK(divide_by_omega(form_zero(2, 3), ctx).is_zero());
}

TEST_CASE("divide_by_omega error branches") {
    // not in the image (n = 3): dq1 ^ dq2 ^ dq3
    SymplecticContext c3 = SymplecticContext::make(3);
    Form bad = basis_form(3, {1, 2, 3}, Rational(1));
    CHECK_THROWS_WITH_AS(divide_by_omega(bad, c3), doctest::Contains("residual"),
                         DomainError);
    // outside the injective Lefschetz range (n = 2, source degree 2)
    SymplecticContext c2 = SymplecticContext::make(2);
    CHECK_THROWS_WITH_AS(divide_by_omega(scale(c2.vol, Rational(1)), c2),
                         doctest::Contains("lepage"), DomainError);
}

TEST_CASE("lepage decomposition fixed cases") {
    SymplecticContext ctx = SymplecticContext::make(2);
    Form laplace = basis_form(2, {1, 4}, Rational(1)) + basis_form(2, {2, 3}, Rational(-1));
    auto parts = lepage_decompose(laplace, ctx);
    CHECK(parts.primitive == laplace);
    CHECK(parts.multiplier.is_zero());

    auto po = lepage_decompose(ctx.Omega, ctx);
    CHECK(po.primitive.is_zero());
    Form one = form_zero(2, 0);
    form_add_term(one, 0, Poly::constant(4, 1));
    CHECK(po.multiplier == one);

    Form a = basis_form(2, {1, 3}, Rational(1)); // dq1 ^ dp1
    auto pa = lepage_decompose(a, ctx);
    Form expect0 = basis_form(2, {1, 3}, Rational(1, 2)) + basis_form(2, {2, 4}, Rational(-1, 2));
    CHECK(pa.primitive == expect0);
    Form half = form_zero(2, 0);
    form_add_term(half, 0, Poly::constant(4, Rational(1, 2)));
    CHECK(pa.multiplier == half);
    CHECK(wedge(pa.primitive, ctx.Omega).is_zero());
    CHECK(pa.primitive + wedge(pa.multiplier, ctx.Omega) == a);
}

TEST_CASE("lepage roundtrip on random forms") {
    std::mt19937_64 rng(59);
    for (int n : {2, 3, 4}) {
        SymplecticContext ctx = SymplecticContext::make(n);
        for (int t = 0; t < 20; ++t) {
            Form w = random_form(rng, n, n, false, 2, 2);
            auto parts = lepage_decompose(w, ctx);
            CHECK(wedge(parts.primitive, ctx.Omega).is_zero());
            CHECK(parts.primitive + wedge(parts.multiplier, ctx.Omega) == w);
        }
    }
}

TEST_CASE("pullback fixed cases") {
    SymplecticContext ctx = SymplecticContext::make(2);
    std::mt19937_64 rng(61);
    Form a = random_form(rng, 2, 2, false, 2, 2);
    CHECK(pullback_linear(RatMat::identity(4), a) == a);

    // partial Legendre transform phi(q1,q2,p1,p2) = (q1,p2,p1,-q2)
    RatMat F(4, 4);
    F.at(0, 0) = Rational(1);
    F.at(1, 3) = Rational(1);
    F.at(2, 2) = Rational(1);
    F.at(3, 1) = Rational(-1);
    Form w = basis_form(2, {3, 4}, Rational(1)) + basis_form(2, {1, 2}, Rational(-1));
    Form pw = pullback_linear(F, w);
    Form expect = basis_form(2, {2, 3}, Rational(1)) + basis_form(2, {1, 4}, Rational(-1));
    CHECK(pw == expect);
    // phi is a symplectomorphism
    CHECK(pullback_linear(F, ctx.Omega) == ctx.Omega);
}

TEST_CASE("pullback functoriality and the singular error") {
    std::mt19937_64 rng(67);
    for (int t = 0; t < 15; ++t) {
        RatMat F = random_unimodular(rng, 4);
        RatMat G = random_unimodular(rng, 4);
        Form a = random_form(rng, 2, 2, false, 2, 2);
        CHECK(pullback_linear(F * G, a) ==
              pullback_linear(G, pullback_linear(F, a)));
    }
    RatMat S(4, 4); // rank 0
    Form a = basis_form(2, {1}, Rational(1));
    CHECK_THROWS_AS(pullback_linear(S, a), DomainError);
}
