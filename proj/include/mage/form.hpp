#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "mage/linalg.hpp"
#include "mage/poly.hpp"

namespace mage {

// Covector indices run 1..2n: index i <= n is dq_i, index n+i is dp_i.
// A basis k-covector (a strictly increasing index tuple) is stored as the
// bitmask with bit (i-1) set for each member i.
//
// Coefficients are Poly over 2n variables matching the same order
// (q_1..q_n, p_1..p_n), so covector index i pairs with variable i-1.
struct Form {
    int n = 0;       // half-dimension of the underlying R^{2n}
    int degree = 0;  // may exceed 2n only for the zero form
    std::map<uint32_t, Poly> coeffs;

    bool is_zero() const { return coeffs.empty(); }
    bool is_constant() const;
    int nvars() const { return 2 * n; }

    friend bool operator==(const Form& a, const Form& b) {
        return a.n == b.n && a.degree == b.degree && a.coeffs == b.coeffs;
    }
    friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }
};

Form form_zero(int n, int degree);
// The covs list may come in any order; the stored coefficient picks up the
// permutation sign. Repeated indices give the zero form.
Form basis_form(int n, std::initializer_list<int> covs, const Poly& c);
Form basis_form(int n, std::initializer_list<int> covs, const Rational& c);
Form basis_form(int n, const std::vector<int>& covs, const Poly& c);
void form_add_term(Form& f, uint32_t mask, const Poly& c);

// Vector field with polynomial components along (dq_1..dq_n, dp_1..dp_n)
// duals, i.e. (del_q1..del_qn, del_p1..del_pn).
struct PolyVectorField {
    int n = 0;
    std::vector<Poly> comps; // size 2n

    static PolyVectorField zero(int n);
    static PolyVectorField basis(int n, int j); // j in 0..2n-1
    bool is_zero() const;
    friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) {
        return a.n == b.n && a.comps == b.comps;
    }
};

Form operator+(const Form& a, const Form& b);
Form operator-(const Form& a, const Form& b);
Form operator-(const Form& a);
Form scale(const Form& a, const Poly& c);
Form scale(const Form& a, const Rational& c);

Form wedge(const Form& a, const Form& b);
// Interior product with a basis vector e_j, j in 0..2n-1.
Form contract_basis(int j, const Form& a);
Form contract(const PolyVectorField& X, const Form& a);
Form ext_d(const Form& a);

// Lie bracket of vector fields, [X,Y] = X(Y) - Y(X) componentwise.
PolyVectorField lie_bracket(const PolyVectorField& X, const PolyVectorField& Y);

// Substitute exact rational coordinates into every coefficient.
Form eval_form_at(const Form& a, const std::vector<Rational>& pt);

// Value of a 2-form on a pair of numeric tangent vectors at a base point.
double eval_2form_double(const Form& a, const std::vector<double>& base,
                         const std::vector<double>& v1, const std::vector<double>& v2);

// The fixed symplectic background: Omega = sum dq_i ^ dp_i, vol = Omega^n / n!.
struct SymplecticContext {
    int n = 0;
    Form Omega;
    Form vol;
    RatMat Omega_mat; // Omega(e_i, e_j)
    RatMat poisson;   // Omega_mat^{-1}

    static SymplecticContext make(int n);
};

bool is_primitive(const Form& w, const SymplecticContext& ctx);

std::string mask_chain_string(uint32_t mask, int n); // "dq1^dp2"
// Canonical rendering in the CLI grammar; terms in descending mask order.
std::string form_to_string(const Form& f);

} // namespace mage
