#pragma once

#include <random>
#include <vector>

#include "mage/exterior.hpp"
#include "mage/form.hpp"
#include "mage/invariants.hpp"

namespace mage::testing {

inline Rational random_rational(std::mt19937_64& rng, int max_num = 6, int max_den = 3) {
    std::uniform_int_distribution<int> num(-max_num, max_num);
    std::uniform_int_distribution<int> den(1, max_den);
    return Rational(num(rng), den(rng));
}

inline Poly random_poly(std::mt19937_64& rng, int nvars, int max_deg, int terms) {
    Poly p(nvars);
    std::uniform_int_distribution<int> ed(0, max_deg);
    for (int t = 0; t < terms; ++t) {
        Mono m(nvars, 0);
        int budget = ed(rng);
        std::uniform_int_distribution<int> pick(0, nvars - 1);
        for (int d = 0; d < budget; ++d) m[pick(rng)] += 1;
        p.add_term(m, random_rational(rng));
    }
    return p;
}

inline Form random_form(std::mt19937_64& rng, int n, int degree, bool constant,
                        int max_deg = 2, int terms = 2) {
    Form f = form_zero(n, degree);
    std::uniform_int_distribution<int> keep(0, 2);
    for (uint32_t m = 0; m < (1u << (2 * n)); ++m) {
        if (__builtin_popcount(m) != degree) continue;
        if (keep(rng) == 0) continue;
        Poly c = constant ? Poly::constant(2 * n, random_rational(rng))
                          : random_poly(rng, 2 * n, max_deg, terms);
        form_add_term(f, m, c);
    }
    return f;
}

inline PolyVectorField random_vector_field(std::mt19937_64& rng, int n, bool constant) {
    PolyVectorField v = PolyVectorField::zero(n);
    for (int i = 0; i < 2 * n; ++i)
        v.comps[i] = constant ? Poly::constant(2 * n, random_rational(rng))
                              : random_poly(rng, 2 * n, 2, 2);
    return v;
}

inline Poly poly_det_ref(const std::vector<std::vector<Poly>>& m, int nvars) {
    size_t k = m.size();
    if (k == 0) return Poly::constant(nvars, 1);
    if (k == 1) return m[0][0];
    Poly det(nvars);
    for (size_t col = 0; col < k; ++col) {
        std::vector<std::vector<Poly>> minor;
        for (size_t r = 1; r < k; ++r) {
            std::vector<Poly> row;
            for (size_t c = 0; c < k; ++c)
                if (c != col) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        Poly cof = m[0][col] * poly_det_ref(minor, nvars);
        if (col % 2 == 0)
            det += cof;
        else
            det -= cof;
    }
    return det;
}

// Independent evaluation oracle: the value of a form on a tuple of vector
// fields, by determinant expansion (no wedge/contract machinery involved).
inline Poly eval_form_on(const Form& f, const std::vector<PolyVectorField>& vs) {
    int nv = 2 * f.n;
    Poly total(nv);
    for (const auto& [mask, c] : f.coeffs) {
        std::vector<int> members;
        for (int i = 0; i < 2 * f.n; ++i)
            if (mask & (1u << i)) members.push_back(i);
        size_t k = members.size();
        std::vector<std::vector<Poly>> m(k, std::vector<Poly>(k, Poly(nv)));
        for (size_t a = 0; a < k; ++a)
            for (size_t b = 0; b < k; ++b) m[a][b] = vs[b].comps[members[a]];
        total += c * poly_det_ref(m, nv);
    }
    return total;
}

// Jordan correspondence w = Omega(A_w .,.) for constant 2-forms.
inline RatMat endo_of_2form(const Form& w, const SymplecticContext& ctx) {
    int dim = 2 * ctx.n;
    RatMat W(dim, dim);
    for (const auto& [mask, c] : w.coeffs) {
        uint32_t mm = mask;
        int i = __builtin_ctz(mm);
        mm &= mm - 1;
        int j = __builtin_ctz(mm);
        W.at(i, j) += c.constant_value();
        W.at(j, i) -= c.constant_value();
    }
    return ctx.Omega_mat.scaled(Rational(-1)) * W;
}

inline Form two_form_of_endo(const RatMat& A, const SymplecticContext& ctx) {
    int dim = 2 * ctx.n;
    Form w = form_zero(ctx.n, 2);
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) {
            Rational v(0);
            for (int m = 0; m < dim; ++m) v += A.at(m, i) * ctx.Omega_mat.at(m, j);
            if (!v.is_zero())
                form_add_term(w, (1u << i) | (1u << j), Poly::constant(dim, v));
        }
    return w;
}

// Embed a form on R^{2n} into R^{2(n+1)}: old covectors keep their q/p roles,
// the new q_{n+1}, p_{n+1} pair is fresh.
inline Form embed_form(const Form& w, int old_n) {
    int n2 = old_n + 1;
    Form out = form_zero(n2, w.degree);
    std::vector<int> vmap(2 * old_n);
    for (int i = 0; i < old_n; ++i) {
        vmap[i] = i;
        vmap[old_n + i] = n2 + i;
    }
    for (const auto& [mask, c] : w.coeffs) {
        uint32_t nm = 0;
        for (int i = 0; i < 2 * old_n; ++i)
            if (mask & (1u << i)) nm |= 1u << (i < old_n ? i : i + 1);
        form_add_term(out, nm, c.remap(2 * n2, vmap));
    }
    return out;
}

// Random product of elementary shears: unimodular with det exactly 1.
inline RatMat random_unimodular(std::mt19937_64& rng, int size, int shears = 6) {
    RatMat F = RatMat::identity(size);
    std::uniform_int_distribution<int> pick(0, size - 1);
    std::uniform_int_distribution<int> cval(-2, 2);
    for (int s = 0; s < shears; ++s) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        RatMat S = RatMat::identity(size);
        S.at(i, j) = Rational(cval(rng));
        F = F * S;
    }
    return F;
}

// Random product of symplectic transvections x -> x + c Omega(x, v) v.
inline RatMat random_symplectic(std::mt19937_64& rng, const SymplecticContext& ctx,
                                int count = 4) {
    int size = 2 * ctx.n;
    RatMat F = RatMat::identity(size);
    std::uniform_int_distribution<int> cval(-2, 2);
    for (int s = 0; s < count; ++s) {
        std::vector<Rational> v(size);
        for (int i = 0; i < size; ++i) v[i] = Rational(cval(rng));
        Rational c(cval(rng), 2);
        RatMat T = RatMat::identity(size);
        for (int col = 0; col < size; ++col) {
            // Omega(e_col, v)
            Rational om(0);
            for (int j = 0; j < size; ++j) om += ctx.Omega_mat.at(col, j) * v[j];
            for (int row = 0; row < size; ++row) T.at(row, col) += c * om * v[row];
        }
        F = F * T;
    }
    return F;
}

} // namespace mage::testing
