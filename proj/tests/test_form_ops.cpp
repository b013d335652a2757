#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "mage/form.hpp"
#include "test_support.hpp"

using namespace mage;
using namespace mage::testing;

namespace {

// The primitive Born-Infeld form. The full cross term
// p1 p2 (dq1^dp1 - dq2^dp2) is what makes it primitive and gives
// d(w0) = 3 (p1 dp2 - p2 dp1) ^ Omega.
Form born_infeld(const SymplecticContext& ctx) {
    (void)ctx;
    Poly one = Poly::constant(4, 1);
    Poly p1 = Poly::variable(4, 2), p2 = Poly::variable(4, 3);
    return basis_form(2, {1, 4}, one - p1 * p1) + basis_form(2, {1, 3}, p1 * p2) +
           basis_form(2, {2, 4}, -(p1 * p2)) + basis_form(2, {2, 3}, one + p2 * p2);
}

} // namespace

TEST_CASE("wedge basis cases") {
    SymplecticContext ctx = SymplecticContext::make(2);
    Form a = basis_form(2, {1}, Rational(1));  // dq1
    Form b = basis_form(2, {3}, Rational(1));  // dp1
    CHECK(wedge(a, b) == basis_form(2, {1, 3}, Rational(1)));

    // Omega ^ Omega = 2 vol
    Form O2 = wedge(ctx.Omega, ctx.Omega);
    CHECK(O2 == scale(ctx.vol, Rational(2)));

    // the Laplace form is primitive
    Form laplace = basis_form(2, {1, 4}, Rational(1)) + basis_form(2, {2, 3}, Rational(-1));
    CHECK(wedge(laplace, ctx.Omega).is_zero());
}

TEST_CASE("wedge is graded commutative and bilinear") {
    std::mt19937_64 rng(101);
    for (int n : {2, 3}) {
        for (int t = 0; t < 30; ++t) {
            std::uniform_int_distribution<int> dd(0, n);
            int ka = dd(rng), kb = dd(rng);
            Form a = random_form(rng, n, ka, false, 3, 2);
            Form b = random_form(rng, n, kb, false, 3, 2);
            Form ab = wedge(a, b);
            Form ba = wedge(b, a);
            int sign = (ka * kb) % 2 == 0 ? 1 : -1;
            CHECK(ab == scale(ba, Rational(sign)));
            Form c = random_form(rng, n, kb, false, 2, 2);
            CHECK(wedge(a, b + c) == wedge(a, b) + wedge(a, c));
        }
    }
}

TEST_CASE("wedge dimension mismatch is an error") {
    Form a = basis_form(2, {1}, Rational(1));
    Form b = basis_form(3, {1}, Rational(1));
    CHECK_THROWS_AS(wedge(a, b), DomainError);
}

TEST_CASE("wedge above top degree vanishes") {
    Form a = basis_form(2, {1, 2, 3}, Rational(1));
    Form b = basis_form(2, {1, 4}, Rational(1));
    CHECK(wedge(a, b).is_zero());
}

TEST_CASE("contract basis cases") {
    SymplecticContext ctx = SymplecticContext::make(2);
    Form b = basis_form(2, {1, 3}, Rational(1)); // dq1 ^ dp1
    Form r = contract(PolyVectorField::basis(2, 0), b);
    CHECK(r == basis_form(2, {3}, Rational(1))); // dp1

    // i_{del p1} Omega = -dq1
    Form r2 = contract(PolyVectorField::basis(2, 2), ctx.Omega);
    CHECK(r2 == basis_form(2, {1}, Rational(-1)));

    // i_{q2 del q1} (dq1 ^ dq2) = q2 dq2, and against the evaluation oracle
    PolyVectorField X = PolyVectorField::zero(2);
    X.comps[0] = Poly::variable(4, 1); // q2
    Form a = basis_form(2, {1, 2}, Rational(1));
    Form got = contract(X, a);
    CHECK(got == basis_form(2, {2}, Poly::variable(4, 1)));
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        PolyVectorField Y = random_vector_field(rng, 2, false);
        CHECK(eval_form_on(got, {Y}) == eval_form_on(a, {X, Y}));
    }
}

TEST_CASE("contracting a 0-form is an error") {
    Form zero_form = form_zero(2, 0);
    form_add_term(zero_form, 0, Poly::constant(4, 1));
    CHECK_THROWS_AS(contract(PolyVectorField::basis(2, 0), zero_form), DomainError);
}

TEST_CASE("contract is an antiderivation") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 25; ++t) {
        int n = 2;
        std::uniform_int_distribution<int> dd(1, 2);
        int ka = dd(rng), kb = dd(rng);
        Form a = random_form(rng, n, ka, false, 2, 2);
        Form b = random_form(rng, n, kb, false, 2, 2);
        PolyVectorField X = random_vector_field(rng, n, false);
        Form lhs = contract(X, wedge(a, b));
        Form rhs = wedge(contract(X, a), b) +
                   scale(wedge(a, contract(X, b)), Rational(ka % 2 == 0 ? 1 : -1));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("exterior derivative basis cases") {
    // d(p1 dq1) = dp1 ^ dq1
    Form a = basis_form(2, {1}, Poly::variable(4, 2));
    Form da = ext_d(a);
    CHECK(da == basis_form(2, {3, 1}, Rational(1)));

    // d(d(q1^2 p2 dq2)) = 0
    Form b = basis_form(2, {2}, Poly::variable(4, 0).pow(2) * Poly::variable(4, 3));
    CHECK(ext_d(ext_d(b)).is_zero());
}

TEST_CASE("Born-Infeld exterior derivative") {
    SymplecticContext ctx = SymplecticContext::make(2);
    Form w0 = born_infeld(ctx);
    CHECK(wedge(w0, ctx.Omega).is_zero());
    // d w0 = 3 (p1 dp2 - p2 dp1) ^ Omega
    Poly p1 = Poly::variable(4, 2), p2 = Poly::variable(4, 3);
    Form alpha = basis_form(2, {4}, p1.scaled(Rational(3))) +
                 basis_form(2, {3}, p2.scaled(Rational(-3)));
    CHECK(ext_d(w0) == wedge(alpha, ctx.Omega));
}

TEST_CASE("d squared vanishes on random forms") {
    std::mt19937_64 rng(31337);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        int n = 2 + (int)(t % 2);
        std::uniform_int_distribution<int> dd(0, 2 * n - 2);
        Form a = random_form(rng, n, dd(rng), false, 3, 3);
        CHECK(ext_d(ext_d(a)).is_zero());
        ++checked;
    }
    CHECK(checked == 200);
}

TEST_CASE("vector field lie bracket") {
    // [q1 del q1, del q2] = 0; [del q1, q1 del q2] = del q2
    PolyVectorField X = PolyVectorField::zero(2);
    X.comps[0] = Poly::variable(4, 0);
    PolyVectorField Y = PolyVectorField::basis(2, 1);
    CHECK(lie_bracket(X, Y).is_zero());
    PolyVectorField Z = PolyVectorField::zero(2);
    Z.comps[1] = Poly::variable(4, 0);
    CHECK(lie_bracket(PolyVectorField::basis(2, 0), Z) == PolyVectorField::basis(2, 1));
}

TEST_CASE("symplectic context invariants") {
    for (int n : {2, 3, 4}) {
        SymplecticContext ctx = SymplecticContext::make(n);
        CHECK(ctx.Omega.degree == 2);
        CHECK(ctx.vol.degree == 2 * n);
        CHECK(ctx.vol.coeffs.size() == 1);
        CHECK((ctx.poisson * ctx.Omega_mat) == RatMat::identity(2 * n));
        // Omega_mat matches the form
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j) {
                std::vector<PolyVectorField> vs{PolyVectorField::basis(n, i),
                                                PolyVectorField::basis(n, j)};
                CHECK(eval_form_on(ctx.Omega, vs) ==
                      Poly::constant(2 * n, ctx.Omega_mat.at(i, j)));
            }
    }
}

TEST_CASE("form printing matches the documented format") {
    Form laplace = basis_form(2, {1, 4}, Rational(1)) + basis_form(2, {2, 3}, Rational(-1));
    CHECK(form_to_string(laplace) == "1*dq1^dp2 - 1*dq2^dp1");
    Poly p1 = Poly::variable(4, 2), p2 = Poly::variable(4, 3);
    Form alpha = basis_form(2, {4}, p1.scaled(Rational(3))) +
                 basis_form(2, {3}, p2.scaled(Rational(-3)));
    CHECK(form_to_string(alpha) == "3*p1*dp2 - 3*p2*dp1");
    CHECK(form_to_string(form_zero(2, 1)) == "0");
}
