#include "mage/invariants.hpp"

#include <bit>
#include <cassert>
#include <map>
#include <mutex>

#include "mage/errors.hpp"
#include "mage/parallel.hpp"

namespace mage {

namespace {

// ad_w^2(A) = Phi(w, lie_action(A, w)); the composition sign is pinned by
// the n = 2 anchor tr(ad_w^2) = 16 pf(w). (The opposite composition, the
// literal double bracket [w,[w,A]], lands on -16 pf.)
constexpr int kAdSquareSign = 1;

// Global sign of g_w, frozen so that the special lagrangian 3-form gets
// signature (0,6).
constexpr int kLrSign = 1;

} // namespace

const SpBasis& sp_basis(int n) {
    static std::map<int, SpBasis> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    SymplecticContext ctx = SymplecticContext::make(n);
    SpBasis basis;
    basis.n = n;
    int m = 2 * n;
    // A = Omega_mat . S runs over sp(n,R) as S runs over symmetric matrices.
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            RatMat S(m, m);
            S.at(i, j) = Rational(1);
            S.at(j, i) = Rational(1);
            basis.elems.push_back(ctx.Omega_mat * S);
        }
    }
    assert((int)basis.elems.size() == n * (2 * n + 1));
    return cache.emplace(n, std::move(basis)).first->second;
}

Endo phi_bracket(const Form& w1, const Form& w2, const SymplecticContext& ctx) {
    int n = ctx.n;
    if (w1.degree != n || w2.degree != n || w1.n != n || w2.n != n)
        throw DomainError("phi_bracket: both forms must have degree n");
    int sign_n = (n % 2 == 0) ? 1 : -1;
    Endo M(2 * n, 2 * n, 2 * n);
    for (int j = 0; j < 2 * n; ++j) {
        Form theta = wedge(contract_basis(j, w1), w2) -
                     scale(wedge(w1, contract_basis(j, w2)), Rational(sign_n));
        PolyVectorField col = a_iso(theta, ctx);
        for (int i = 0; i < 2 * n; ++i) M.at(i, j) = col.comps[i];
    }
    return M;
}

Endo hitchin_tensor(const Form& w, const SymplecticContext& ctx) {
    if (ctx.n % 2 == 0)
        throw DomainError(
            "hitchin_tensor: vanishes identically for even n; use the ad^2 "
            "invariants instead");
    return phi_bracket(w, w, ctx).scaled(Rational(1, 2));
}

Poly pfaffian2(const Form& w, const SymplecticContext& ctx) {
    if (ctx.n != 2 || w.degree != 2)
        throw DomainError("pfaffian2: defined for 2-forms at n = 2");
    Form w2 = wedge(w, w);
    Form O2 = wedge(ctx.Omega, ctx.Omega);
    uint32_t full = (1u << 4) - 1;
    Rational denom = O2.coeffs.at(full).constant_value();
    if (w2.is_zero()) return Poly(4);
    return w2.coeffs.at(full).divided(denom);
}

Poly hitchin_pfaffian(const Form& w, const SymplecticContext& ctx) {
    if (ctx.n != 3 || w.degree != 3)
        throw DomainError("hitchin_pfaffian: defined for 3-forms at n = 3");
    Endo K = hitchin_tensor(w, ctx);
    Endo K2 = polymat_mul(K, K);
    Poly lambda = K2.trace().divided(Rational(6));
    PolyMat lambdaId = PolyMat::identity(6, 6).scaled(lambda);
    if (!(K2 == lambdaId))
        throw std::logic_error("hitchin_pfaffian: K^2 is not a multiple of the identity");
    return lambda;
}

PolyMat lr_metric(const Form& w, const SymplecticContext& ctx) {
    if (ctx.n != 3 || w.degree != 3)
        throw DomainError("lr_metric: defined for 3-forms at n = 3");
    Endo K = hitchin_tensor(w, ctx);
    PolyMat g = polymat_mul(PolyMat::from_rational(ctx.Omega_mat, 2 * ctx.n), K)
                    .scaled(Rational(kLrSign));
    if (!(g == g.transpose()))
        throw std::logic_error("lr_metric: result is not symmetric (convention bug)");
    return g;
}

SignatureResult signature_exact(const RatMat& M) {
    if (!M.is_symmetric()) throw DomainError("signature_exact: matrix is not symmetric");
    std::vector<Rational> p = char_poly(M);
    int size = M.rows();
    int zero = 0;
    for (int i = size; i >= 0; --i) {
        if (p[i].is_zero())
            ++zero;
        else
            break;
    }
    std::vector<Rational> p_neg = p;
    for (int i = 0; i <= size; ++i)
        if ((size - i) % 2 == 1) p_neg[i] = -p_neg[i];
    SignatureResult r;
    r.zero = zero;
    r.positive = descartes_positive_roots(p);
    r.negative = descartes_positive_roots(p_neg);
    assert(r.positive + r.negative + r.zero == size);
    return r;
}

Endo ad2_apply(const Form& w, const PolyMat& A, const SymplecticContext& ctx) {
    Form law = lie_action(A, w);
    return phi_bracket(w, law, ctx).scaled(Rational(kAdSquareSign));
}

namespace {

RatMat ad2_matrix_impl(const Form& w, const SymplecticContext& ctx, bool parallel) {
    int n = ctx.n;
    if (n % 2 != 0) throw DomainError("ad2_matrix: defined for even n");
    if (!w.is_constant())
        throw DomainError("ad2_matrix: non-constant coefficients; evaluate at a point first");
    const SpBasis& basis = sp_basis(n);
    int m = (int)basis.elems.size();
    int dim = 2 * n;
    // flatten the basis once: columns are vec(B_i)
    RatMat B(dim * dim, m);
    for (int c = 0; c < m; ++c)
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) B.at(i * dim + j, c) = basis.elems[c].at(i, j);
    RatMat images(dim * dim, m);
    auto column = [&](size_t c) {
        Endo T = ad2_apply(w, PolyMat::from_rational(basis.elems[c], 2 * n), ctx);
        if (!T.is_constant())
            throw DomainError("ad2_matrix: image has non-constant entries");
        RatMat Tr = T.to_rational();
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) images.at(i * dim + j, (int)c) = Tr.at(i, j);
    };
    if (parallel)
        par_for((size_t)m, column);
    else
        for (int c = 0; c < m; ++c) column((size_t)c);
    auto X = solve_many(B, images);
    if (!X)
        throw DomainError(
            "ad2_matrix: image leaves sp(n,R); the form must be primitive");
    return *X;
}

} // namespace

RatMat ad2_matrix(const Form& w, const SymplecticContext& ctx) {
    return ad2_matrix_impl(w, ctx, true);
}

RatMat ad2_matrix_serial(const Form& w, const SymplecticContext& ctx) {
    return ad2_matrix_impl(w, ctx, false);
}

std::vector<Rational> scalar_invariants(const Form& w, int kmax,
                                        const SymplecticContext& ctx) {
    if (!w.is_constant())
        throw DomainError(
            "scalar_invariants: non-constant coefficients; evaluate at a point first");
    std::vector<Rational> out;
    if (ctx.n % 2 == 1) {
        Endo K = hitchin_tensor(w, ctx);
        RatMat Kr = K.to_rational();
        RatMat K2 = Kr * Kr;
        RatMat P = K2;
        for (int k = 1; k <= kmax; ++k) {
            out.push_back(P.trace());
            if (k < kmax) P = P * K2;
        }
    } else {
        RatMat R = ad2_matrix(w, ctx);
        RatMat P = R;
        for (int k = 1; k <= kmax; ++k) {
            out.push_back(P.trace());
            if (k < kmax) P = P * R;
        }
    }
    return out;
}

QInvariant q_invariant(const Form& w, const SymplecticContext& ctx) {
    if (!w.is_constant())
        throw DomainError("q_invariant: non-constant coefficients");
    QInvariant out;
    int n = ctx.n;
    int dim = 2 * n;
    if (n % 2 == 1) {
        out.odd = true;
        if (n != 3)
            throw DomainError("q_invariant: odd case implemented for n = 3");
        out.quadratic = lr_metric(w, ctx).to_rational();
        return out;
    }
    out.odd = false;
    // Rank-one sp element X (x) i_X Omega for a formal vector X: column j is
    // Omega(X, e_j) X, quadratic in the components of X.
    PolyMat MX(dim, dim, dim);
    for (int j = 0; j < dim; ++j) {
        Poly omega_Xj(dim);
        for (int v = 0; v < dim; ++v) {
            if (ctx.Omega_mat.at(v, j).is_zero()) continue;
            omega_Xj += Poly::variable(dim, v).scaled(ctx.Omega_mat.at(v, j));
        }
        for (int a = 0; a < dim; ++a)
            MX.at(a, j) = Poly::variable(dim, a) * omega_Xj;
    }
    Endo T = ad2_apply(w, MX, ctx);
    Poly q = polymat_mul(T, T).trace();
    if (!q.is_zero() && !q.is_homogeneous(4))
        throw std::logic_error("q_invariant: quartic is not homogeneous of degree 4");
    out.quartic = QuarticInvariant{dim, q};
    return out;
}

std::optional<std::pair<Poly, int>> perfect_square_root(const QuarticInvariant& q) {
    if (q.poly.is_zero()) return std::make_pair(Poly(q.nvars), 1);
    // q is only meaningful up to positive scale, so normalize the leading
    // coefficient to 1 and record its sign; then term-by-term square root.
    auto lead = q.poly.terms().rbegin(); // largest monomial in lex order
    int s = lead->second.sign();
    Poly qn = q.poly.scaled(lead->second.inverse());
    Poly r(q.nvars);
    Poly rem = qn;
    Mono prev_lead;
    bool have_prev = false;
    while (!rem.is_zero()) {
        auto rl = rem.terms().rbegin();
        const Mono m = rl->first;
        const Rational c = rl->second;
        if (have_prev && !(m < prev_lead)) return std::nullopt;
        prev_lead = m;
        have_prev = true;
        Poly t;
        if (r.is_zero()) {
            Mono half(m.size());
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] % 2 != 0) return std::nullopt;
                half[i] = m[i] / 2;
            }
            Rational root;
            if (!c.perfect_square(&root)) return std::nullopt;
            t = Poly::monomial(q.nvars, half, root);
        } else {
            auto rlead = r.terms().rbegin();
            const Mono& mr = rlead->first;
            Mono diff(m.size());
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] < mr[i]) return std::nullopt;
                diff[i] = m[i] - mr[i];
            }
            t = Poly::monomial(q.nvars, diff, c / (rlead->second * Rational(2)));
        }
        if (!t.is_homogeneous(2)) return std::nullopt;
        rem -= (r * t).scaled(Rational(2)) + t * t;
        r += t;
    }
    assert(r * r == qn);
    return std::make_pair(r, s);
}

std::optional<Form> DualForm::rational_form() const {
    Rational root;
    if (!lambda_abs.perfect_square(&root)) return std::nullopt;
    return scale(unnormalized, Rational(sign) / root);
}

namespace {

// Value of a constant 3-form on basis vectors (e_a, e_b, e_c).
Rational form_value_basis3(const Form& w, int a, int b, int c) {
    if (a == b || b == c || a == c) return Rational(0);
    int idx[3] = {a, b, c};
    int sign = 1;
    // sort three indices, tracking parity
    for (int pass = 0; pass < 2; ++pass)
        for (int t = 0; t + 1 < 3 - pass; ++t)
            if (idx[t] > idx[t + 1]) {
                std::swap(idx[t], idx[t + 1]);
                sign = -sign;
            }
    uint32_t mask = (1u << idx[0]) | (1u << idx[1]) | (1u << idx[2]);
    auto it = w.coeffs.find(mask);
    if (it == w.coeffs.end()) return Rational(0);
    return it->second.constant_value() * Rational(sign);
}

// The 5-form (i_{e_j} phi) ^ psi; a 3-form phi is decomposable iff
// (i_X phi) ^ phi vanishes for every X.
Form plucker_form(const Form& phi, const Form& psi, int j) {
    return wedge(contract_basis(j, phi), psi);
}

} // namespace

DualForm dual_form(const Form& w, const SymplecticContext& ctx) {
    if (ctx.n != 3 || w.degree != 3)
        throw DomainError("dual_form: defined for 3-forms at n = 3");
    if (!w.is_constant())
        throw DomainError("dual_form: non-constant coefficients");
    Rational lambda = hitchin_pfaffian(w, ctx).constant_value();
    if (lambda.is_zero()) throw DomainError("dual_form: degenerate form, no dual exists");
    int eps = lambda.sign();
    Rational d = lambda.abs();

    RatMat K = hitchin_tensor(w, ctx).to_rational();
    int dim = 6;
    // u(X,Y,Z) = w(K X, Y, Z); built from increasing triples, then verified
    // to be alternating in all slots.
    Form u = form_zero(3, 3);
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b)
            for (int c = b + 1; c < dim; ++c) {
                Rational val(0);
                for (int m = 0; m < dim; ++m) {
                    if (K.at(m, a).is_zero()) continue;
                    val += K.at(m, a) * form_value_basis3(w, m, b, c);
                }
                if (!val.is_zero())
                    form_add_term(u, (1u << a) | (1u << b) | (1u << c),
                                  Poly::constant(6, val));
            }
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c) {
                Rational direct(0);
                for (int m = 0; m < dim; ++m) {
                    if (K.at(m, a).is_zero()) continue;
                    direct += K.at(m, a) * form_value_basis3(w, m, b, c);
                }
                if (direct != form_value_basis3(u, a, b, c))
                    throw std::logic_error("dual_form: w(K.,.,.) is not alternating");
            }

    // Eigen-volume decomposability of w +- sqrt(eps) w_hat reduces to exact
    // rational identities in w and u.
    for (int j = 0; j < dim; ++j) {
        Form rw = plucker_form(w, w, j);
        Form ru = plucker_form(u, u, j);
        Form rm = plucker_form(w, u, j) + plucker_form(u, w, j);
        if (!(scale(rw, d) + scale(ru, Rational(eps))).is_zero() || !rm.is_zero())
            throw std::logic_error("dual_form: eigen-volume decomposability failed");
    }

    // Orientation fixes the sign: (w + sqrt(eps) w_hat) ^ (w - sqrt(eps) w_hat)
    // = -2 sqrt(eps) w ^ w_hat must pair positively with vol.
    uint32_t full = (1u << dim) - 1;
    Form wu = wedge(w, u);
    if (wu.is_zero()) throw std::logic_error("dual_form: w ^ u vanishes");
    Rational vol_c = ctx.vol.coeffs.at(full).constant_value();
    Rational pairing = wu.coeffs.at(full).constant_value() / vol_c;
    DualForm out;
    out.unnormalized = u;
    out.lambda_abs = d;
    out.lambda_sign = eps;
    out.sign = pairing.sign() < 0 ? 1 : -1;
    return out;
}

const PolyVectorField& NijenhuisTable::at(int i, int j) const {
    assert(i < j);
    int dim = 2 * n;
    int idx = 0;
    for (int a = 0; a < dim; ++a) {
        for (int b = a + 1; b < dim; ++b) {
            if (a == i && b == j) return entries[idx];
            ++idx;
        }
    }
    throw DomainError("nijenhuis: index out of range");
}

bool NijenhuisTable::is_zero() const {
    for (const auto& v : entries)
        if (!v.is_zero()) return false;
    return true;
}

NijenhuisTable nijenhuis_endo(const PolyMat& A) {
    if (A.rows() != A.cols() || A.rows() % 2 != 0)
        throw DomainError("nijenhuis_endo: expected a square even-size matrix");
    int dim = A.rows();
    int n = dim / 2;
    int nv = A.nvars();
    auto col_field = [&](int i) {
        PolyVectorField v = PolyVectorField::zero(n);
        for (int k = 0; k < dim; ++k) v.comps[k] = A.at(k, i);
        return v;
    };
    auto apply_A = [&](const PolyVectorField& x) {
        PolyVectorField r = PolyVectorField::zero(n);
        for (int k = 0; k < dim; ++k) {
            Poly s(nv);
            for (int j = 0; j < dim; ++j) s += A.at(k, j) * x.comps[j];
            r.comps[k] = s;
        }
        return r;
    };
    NijenhuisTable table;
    table.n = n;
    for (int i = 0; i < dim; ++i) {
        PolyVectorField Vi = col_field(i);
        for (int j = i + 1; j < dim; ++j) {
            PolyVectorField Vj = col_field(j);
            // [A d_i, A d_j]
            PolyVectorField term = lie_bracket(Vi, Vj);
            // -A [A d_i, d_j] = +A (d_j . grad Vi), -A [d_i, A d_j] = -A (d_i . grad Vj)
            PolyVectorField dVi = PolyVectorField::zero(n);
            PolyVectorField dVj = PolyVectorField::zero(n);
            for (int k = 0; k < dim; ++k) {
                dVi.comps[k] = Vi.comps[k].derivative(j);
                dVj.comps[k] = Vj.comps[k].derivative(i);
            }
            PolyVectorField corr1 = apply_A(dVi);
            PolyVectorField corr2 = apply_A(dVj);
            for (int k = 0; k < dim; ++k)
                term.comps[k] += corr1.comps[k] - corr2.comps[k];
            table.entries.push_back(std::move(term));
        }
    }
    return table;
}

} // namespace mage
