#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mage/rational.hpp"

namespace mage {

// Exponent vector. Length always equals the owning polynomial's nvars.
using Mono = std::vector<uint32_t>;

// Sparse multivariate polynomial over the rationals. The variable set is
// positional: callers fix the interpretation (q/p coordinates, jet
// variables, quartic-invariant arguments). No zero coefficients are ever
// stored; the zero polynomial is the empty term map.
class Poly {
public:
    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, const Rational& c);
    static Poly variable(int nvars, int var, uint32_t exp = 1);
    static Poly monomial(int nvars, const Mono& m, const Rational& c);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Value of a constant polynomial (zero polynomial gives 0). Throws on
    // non-constant input.
    Rational constant_value() const;

    int total_degree() const; // 0 for the zero polynomial
    bool depends_on(int var) const;
    bool is_homogeneous(int degree) const;

    const std::map<Mono, Rational>& terms() const { return terms_; }

    void add_term(const Mono& m, const Rational& c);

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

    Poly scaled(const Rational& c) const;
    Poly divided(const Rational& c) const { return scaled(c.inverse()); }
    Poly pow(unsigned k) const;

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly derivative(int var) const;

    // Substitute every variable simultaneously: var i becomes values[i].
    // All values must share a common nvars, which becomes the result's.
    Poly substitute_all(const std::vector<Poly>& values) const;

    // Move variable i of this polynomial to slot var_map[i] of a fresh
    // polynomial with new_nvars variables. Entries must be distinct and in
    // range.
    Poly remap(int new_nvars, const std::vector<int>& var_map) const;

    Rational eval(const std::vector<Rational>& xs) const;
    double eval_double(const std::vector<double>& xs) const;

private:
    int nvars_;
    std::map<Mono, Rational> terms_;
};

// Renders with terms in descending lexicographic order, e.g.
// "q1^2*p2 - 1/2". The namer maps a variable index to its display name.
std::string poly_to_string(const Poly& p, const std::function<std::string(int)>& namer);

// Namer for polynomials on T*R^n: variables 0..n-1 are q1..qn, n..2n-1 are
// p1..pn.
std::function<std::string(int)> qp_namer(int n);

} // namespace mage
