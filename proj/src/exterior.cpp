#include "mage/exterior.hpp"

#include <bit>
#include <cassert>
#include <numeric>

#include "mage/errors.hpp"

namespace mage {

namespace {

// Replace the member at position `pos` of the sorted product `mask` by
// covector bit j, resorting. Returns the new mask and sign, or sign 0 when
// the product collapses.
std::pair<uint32_t, int> slot_replace(uint32_t mask, int member_bit, int j) {
    uint32_t without = mask & ~(1u << member_bit);
    if (without & (1u << j)) return {0, 0};
    int pos_old = std::popcount(mask & ((1u << member_bit) - 1));
    uint32_t merged = without | (1u << j);
    int pos_new = std::popcount(merged & ((1u << j) - 1));
    int sign = ((pos_old + pos_new) & 1) ? -1 : 1;
    return {merged, sign};
}

std::vector<uint32_t> masks_of_degree(int n, int k) {
    std::vector<uint32_t> out;
    if (k < 0 || k > 2 * n) return out;
    for (uint32_t m = 0; m < (1u << (2 * n)); ++m)
        if (std::popcount(m) == k) out.push_back(m);
    return out;
}

} // namespace

Form lie_action(const PolyMat& A, const Form& a) {
    if (A.rows() != 2 * a.n || A.cols() != 2 * a.n)
        throw DomainError("lie_action: endomorphism size does not match the form");
    Form r = form_zero(a.n, a.degree);
    for (const auto& [mask, c] : a.coeffs) {
        uint32_t rest = mask;
        while (rest) {
            int i = std::countr_zero(rest);
            rest &= rest - 1;
            // slot dx_i picks up -sum_j A_{ij} dx_j
            for (int j = 0; j < 2 * a.n; ++j) {
                const Poly& entry = A.at(i, j);
                if (entry.is_zero()) continue;
                auto [nm, s] = slot_replace(mask, i, j);
                if (s == 0) continue;
                Poly t = c * entry;
                form_add_term(r, nm, s > 0 ? -t : t);
            }
        }
    }
    return r;
}

Form lie_action(const RatMat& A, const Form& a) {
    return lie_action(PolyMat::from_rational(A, 2 * a.n), a);
}

PolyVectorField a_iso(const Form& theta, const SymplecticContext& ctx) {
    int n = ctx.n;
    if (theta.degree != 2 * n - 1)
        throw DomainError("a_iso: expected a form of degree 2n-1");
    uint32_t full = (1u << (2 * n)) - 1;
    Rational vol_coef = ctx.vol.coeffs.at(full).constant_value();
    PolyVectorField X = PolyVectorField::zero(n);
    for (const auto& [mask, c] : theta.coeffs) {
        uint32_t missing = full & ~mask;
        int j = std::countr_zero(missing);
        // dx_j ^ theta = sign * dx_full
        int sign = (std::popcount(mask & ((1u << j) - 1)) & 1) ? -1 : 1;
        Poly comp = c.scaled(Rational(sign) / vol_coef);
        X.comps[j] += comp;
    }
    return X;
}

Form homotopy_potential(const Form& a, const SymplecticContext& ctx) {
    (void)ctx;
    if (a.degree < 1) throw DomainError("homotopy_potential: degree must be >= 1");
    Form da = ext_d(a);
    if (!da.is_zero())
        throw DomainError("homotopy_potential: form is not closed, d(a) = " +
                          form_to_string(da));
    int k = a.degree;
    Form h = form_zero(a.n, k - 1);
    for (const auto& [mask, c] : a.coeffs) {
        for (const auto& [mono, coef] : c.terms()) {
            int d = std::accumulate(mono.begin(), mono.end(), 0);
            Rational factor = Rational(1) / Rational((long)(d + k));
            // euler-field contraction of this single term
            uint32_t rest = mask;
            int pos = 0;
            while (rest) {
                int i = std::countr_zero(rest);
                rest &= rest - 1;
                Mono m2 = mono;
                m2[i] += 1; // multiply by x_i (variable i pairs with covector i+1)
                Rational cc = coef * factor;
                if (pos & 1) cc = -cc;
                form_add_term(h, mask & ~(1u << i), Poly::monomial(c.nvars(), m2, cc));
                ++pos;
            }
        }
    }
    assert(ext_d(h) == a);
    return h;
}

RatMat matrix_of_wedge_with(const Form& beta, int from_degree,
                            std::vector<uint32_t>* src_masks,
                            std::vector<uint32_t>* dst_masks) {
    int n = beta.n;
    auto src = masks_of_degree(n, from_degree);
    auto dst = masks_of_degree(n, from_degree + beta.degree);
    std::map<uint32_t, int> dst_index;
    for (size_t i = 0; i < dst.size(); ++i) dst_index[dst[i]] = (int)i;
    RatMat M((int)dst.size(), (int)src.size());
    for (size_t j = 0; j < src.size(); ++j) {
        Form unit = form_zero(n, from_degree);
        form_add_term(unit, src[j], Poly::constant(2 * n, 1));
        Form img = wedge(unit, beta);
        for (const auto& [m, c] : img.coeffs)
            M.at(dst_index.at(m), (int)j) = c.constant_value();
    }
    if (src_masks) *src_masks = src;
    if (dst_masks) *dst_masks = dst;
    return M;
}

Form divide_by_omega(const Form& theta, const SymplecticContext& ctx) {
    int n = ctx.n;
    int k = theta.degree - 2;
    if (k < 0) throw DomainError("divide_by_omega: degree too small");
    std::vector<uint32_t> src, dst;
    RatMat M = matrix_of_wedge_with(ctx.Omega, k, &src, &dst);
    std::vector<Poly> rhs(dst.size(), Poly(2 * n));
    std::map<uint32_t, int> dst_index;
    for (size_t i = 0; i < dst.size(); ++i) dst_index[dst[i]] = (int)i;
    for (const auto& [m, c] : theta.coeffs) rhs[dst_index.at(m)] = c;
    LinSolve sol = solve_linear(M, rhs);
    if (sol.status == LinSolve::Status::Inconsistent) {
        Form res = form_zero(n, theta.degree);
        for (size_t i = 0; i < dst.size(); ++i) form_add_term(res, dst[i], sol.residual[i]);
        throw DomainError("divide_by_omega: theta is not a multiple of Omega, residual = " +
                          form_to_string(res));
    }
    if (sol.status == LinSolve::Status::Underdetermined || k > n - 1)
        throw DomainError(
            "divide_by_omega: degree outside the injective Lefschetz range; "
            "use lepage_decompose instead");
    Form beta = form_zero(n, k);
    for (size_t j = 0; j < src.size(); ++j) form_add_term(beta, src[j], sol.solution[j]);
    return beta;
}

LepageParts lepage_decompose(const Form& w, const SymplecticContext& ctx) {
    int n = ctx.n;
    if (w.degree != n)
        throw DomainError("lepage_decompose: expected a form of degree n");
    LepageParts parts;
    if (n < 2) {
        parts.primitive = w;
        parts.multiplier = form_zero(n, n - 2);
        return parts;
    }
    // Solve w1 ^ Omega^2 = w ^ Omega; the Lefschetz square is an isomorphism
    // from degree n-2 to degree n+2.
    Form Omega2 = wedge(ctx.Omega, ctx.Omega);
    std::vector<uint32_t> src, dst;
    RatMat M = matrix_of_wedge_with(Omega2, n - 2, &src, &dst);
    std::map<uint32_t, int> dst_index;
    for (size_t i = 0; i < dst.size(); ++i) dst_index[dst[i]] = (int)i;
    std::vector<Poly> rhs(dst.size(), Poly(2 * n));
    Form wO = wedge(w, ctx.Omega);
    for (const auto& [m, c] : wO.coeffs) rhs[dst_index.at(m)] = c;
    LinSolve sol = solve_linear(M, rhs);
    if (sol.status != LinSolve::Status::Unique)
        throw DomainError("lepage_decompose: Lefschetz solve failed unexpectedly");
    Form w1 = form_zero(n, n - 2);
    for (size_t j = 0; j < src.size(); ++j) form_add_term(w1, src[j], sol.solution[j]);
    parts.multiplier = w1;
    parts.primitive = w - wedge(w1, ctx.Omega);
    assert(wedge(parts.primitive, ctx.Omega).is_zero());
    return parts;
}

Form pullback_linear(const RatMat& F, const Form& a) {
    int n = a.n;
    if (F.rows() != 2 * n || F.cols() != 2 * n)
        throw DomainError("pullback_linear: matrix size does not match the form");
    if (F.det().is_zero()) throw DomainError("pullback_linear: singular map");
    // Coefficients become f(F x); covector dx_i becomes sum_j F_{ij} dx_j.
    std::vector<Poly> subst(2 * n, Poly(2 * n));
    for (int v = 0; v < 2 * n; ++v) {
        Poly s(2 * n);
        for (int w = 0; w < 2 * n; ++w) {
            if (F.at(v, w).is_zero()) continue;
            s += Poly::variable(2 * n, w).scaled(F.at(v, w));
        }
        subst[v] = s;
    }
    Form r = form_zero(n, a.degree);
    for (const auto& [mask, c] : a.coeffs) {
        Poly cf = c.substitute_all(subst);
        // expand the product of pulled-back covectors
        std::map<uint32_t, Rational> acc;
        acc[0] = Rational(1);
        uint32_t rest = mask;
        while (rest) {
            int i = std::countr_zero(rest);
            rest &= rest - 1;
            std::map<uint32_t, Rational> next;
            for (const auto& [pm, pc] : acc) {
                for (int j = 0; j < 2 * n; ++j) {
                    const Rational& fij = F.at(i, j);
                    if (fij.is_zero()) continue;
                    uint32_t bit = 1u << j;
                    if (pm & bit) continue;
                    int sign = (std::popcount(pm >> (j + 1)) & 1) ? -1 : 1;
                    Rational add = pc * fij;
                    if (sign < 0) add = -add;
                    auto it = next.find(pm | bit);
                    if (it == next.end())
                        next.emplace(pm | bit, add);
                    else {
                        it->second += add;
                        if (it->second.is_zero()) next.erase(it);
                    }
                }
            }
            acc = std::move(next);
        }
        for (const auto& [pm, pc] : acc) form_add_term(r, pm, cf.scaled(pc));
    }
    return r;
}

} // namespace mage
