#include "mage/mae.hpp"

#include <bit>
#include <cassert>

#include "mage/errors.hpp"

namespace mage {

int hess_nvars(int n) { return 2 * n + n * (n + 1) / 2; }
int hess_q_var(int n, int i) { (void)n; return i; }
int hess_u_var(int n, int i) { return n + i; }

int hess_uij_var(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    // pairs (0,0)..(0,n-1), (1,1)..(1,n-1), ...
    return 2 * n + i * n - i * (i - 1) / 2 + (j - i);
}

std::function<std::string(int)> hess_namer(int n) {
    return [n](int v) -> std::string {
        if (v < n) return "q" + std::to_string(v + 1);
        if (v < 2 * n) return "u" + std::to_string(v - n + 1);
        int k = v - 2 * n;
        for (int i = 0; i < n; ++i) {
            int row = n - i;
            if (k < row) return "u" + std::to_string(i + 1) + std::to_string(i + k + 1);
            k -= row;
        }
        return "?";
    };
}

namespace {

// Subsets of {0..n-1} as bitmasks, |I| = k, increasing numeric order.
std::vector<uint32_t> subsets_of_size(int n, int k) {
    std::vector<uint32_t> out;
    for (uint32_t m = 0; m < (1u << n); ++m)
        if (std::popcount(m) == k) out.push_back(m);
    return out;
}

std::vector<int> mask_members(uint32_t m) {
    std::vector<int> out;
    while (m) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

Poly poly_det(const std::vector<std::vector<Poly>>& m, int nvars) {
    size_t k = m.size();
    if (k == 0) return Poly::constant(nvars, 1);
    if (k == 1) return m[0][0];
    Poly det(nvars);
    std::vector<std::vector<Poly>> minor(k - 1, std::vector<Poly>(k - 1, Poly(nvars)));
    for (size_t col = 0; col < k; ++col) {
        for (size_t r = 1; r < k; ++r) {
            size_t cc = 0;
            for (size_t c = 0; c < k; ++c) {
                if (c == col) continue;
                minor[r - 1][cc++] = m[r][c];
            }
        }
        Poly cof = m[0][col] * poly_det(minor, nvars);
        if (col % 2 == 0)
            det += cof;
        else
            det -= cof;
    }
    return det;
}

// det of the submatrix (u_ab) with rows I, columns J, as a polynomial in
// the symbol variables.
Poly minor_poly(int n, uint32_t I, uint32_t J) {
    auto rows = mask_members(I);
    auto cols = mask_members(J);
    int nv = hess_nvars(n);
    std::vector<std::vector<Poly>> m(rows.size(), std::vector<Poly>(cols.size(), Poly(nv)));
    for (size_t a = 0; a < rows.size(); ++a)
        for (size_t b = 0; b < cols.size(); ++b)
            m[a][b] = Poly::variable(nv, hess_uij_var(n, rows[a], cols[b]));
    return poly_det(m, nv);
}

struct MinorTerm {
    uint32_t I, J;
    Poly coeff; // in (q, u) only
};

// Decompose h into sum coeff_IJ(q,u) * minor_IJ(u_..). Throws when h is not
// of Monge-Ampere type. Minors are enumerated over unordered pairs {I,J}
// (u is symmetric, so minor_IJ = minor_JI).
std::vector<MinorTerm> ma_decompose(int n, const Poly& h) {
    int nv = hess_nvars(n);
    int hess_base = 2 * n;
    struct MinorDef {
        uint32_t I, J;
        Poly poly;
    };
    std::vector<MinorDef> minors;
    for (int k = 0; k <= n; ++k) {
        auto subs = subsets_of_size(n, k);
        for (uint32_t I : subs)
            for (uint32_t J : subs) {
                if (J < I) continue;
                minors.push_back({I, J, minor_poly(n, I, J)});
            }
    }
    // index the u_ij-monomials seen anywhere
    auto uij_part = [&](const Mono& m) {
        Mono part(nv, 0);
        for (int v = hess_base; v < nv; ++v) part[v] = m[v];
        return part;
    };
    auto qu_part = [&](const Mono& m) {
        Mono part(nv, 0);
        for (int v = 0; v < hess_base; ++v) part[v] = m[v];
        return part;
    };
    std::map<Mono, int> row_of;
    auto row_index = [&](const Mono& m) {
        auto it = row_of.find(m);
        if (it != row_of.end()) return it->second;
        int idx = (int)row_of.size();
        row_of.emplace(m, idx);
        return idx;
    };
    for (const auto& md : minors)
        for (const auto& [m, c] : md.poly.terms()) row_index(m);
    std::vector<std::pair<int, Poly>> rhs_entries;
    for (const auto& [m, c] : h.terms()) {
        Mono u = uij_part(m);
        int row = row_index(u);
        Poly qu = Poly::monomial(nv, qu_part(m), c);
        bool found = false;
        for (auto& [r, p] : rhs_entries)
            if (r == row) {
                p += qu;
                found = true;
            }
        if (!found) rhs_entries.emplace_back(row, qu);
    }
    int nrows = (int)row_of.size();
    RatMat M(nrows, (int)minors.size());
    for (size_t c = 0; c < minors.size(); ++c)
        for (const auto& [m, coef] : minors[c].poly.terms())
            M.at(row_of.at(m), (int)c) = coef;
    std::vector<Poly> rhs(nrows, Poly(nv));
    for (auto& [r, p] : rhs_entries) rhs[r] = p;

    LinSolve sol = solve_linear_any(M, rhs);
    if (sol.status == LinSolve::Status::Inconsistent)
        throw DomainError(
            "not of Monge-Ampere type: the Hessian part is not a combination of "
            "minors of (u_ij)");
    std::vector<MinorTerm> out;
    for (size_t c = 0; c < minors.size(); ++c) {
        if (sol.solution[c].is_zero()) continue;
        for (int v = hess_base; v < nv; ++v)
            if (sol.solution[c].depends_on(v))
                throw DomainError("not of Monge-Ampere type: minor coefficients depend on u_ij");
        out.push_back({minors[c].I, minors[c].J, sol.solution[c]});
    }
    return out;
}

} // namespace

HessSymbol HessSymbol::make(int n, const Poly& p) {
    if (p.nvars() != hess_nvars(n))
        throw DomainError("HessSymbol: wrong variable count for this dimension");
    ma_decompose(n, p); // validation only
    HessSymbol h;
    h.n = n;
    h.poly = p;
    return h;
}

HessSymbol mae_symbol(const Form& w, const SymplecticContext& ctx) {
    int n = ctx.n;
    if (w.degree != n || w.n != n)
        throw DomainError("mae_symbol: expected a degree-n form");
    int nv = hess_nvars(n);
    // coefficient variables: q_i stays q_i, p_i becomes u_i
    std::vector<int> var_map(2 * n);
    for (int i = 0; i < n; ++i) {
        var_map[i] = hess_q_var(n, i);
        var_map[n + i] = hess_u_var(n, i);
    }
    uint32_t q_full = (1u << n) - 1;
    Poly total(nv);
    for (const auto& [mask, coeff] : w.coeffs) {
        Poly base = coeff.remap(nv, var_map);
        // expand the covector chain left to right; dp_i branches into
        // sum_j u_ij dq_j
        struct State {
            uint32_t qmask;
            int sign;
            Poly factor;
        };
        std::vector<State> states{{0u, 1, Poly::constant(nv, 1)}};
        auto append_q = [&](std::vector<State>& in, int qbit) {
            std::vector<State> out;
            for (auto& st : in) {
                if (st.qmask & (1u << qbit)) continue;
                int s = (std::popcount(st.qmask >> (qbit + 1)) & 1) ? -1 : 1;
                out.push_back({st.qmask | (1u << qbit), st.sign * s, std::move(st.factor)});
            }
            return out;
        };
        uint32_t rest = mask;
        while (rest) {
            int bit = std::countr_zero(rest);
            rest &= rest - 1;
            if (bit < n) {
                states = append_q(states, bit);
            } else {
                int i = bit - n;
                std::vector<State> next;
                for (auto& st : states) {
                    for (int j = 0; j < n; ++j) {
                        if (st.qmask & (1u << j)) continue;
                        int s = (std::popcount(st.qmask >> (j + 1)) & 1) ? -1 : 1;
                        Poly f = st.factor * Poly::variable(nv, hess_uij_var(n, i, j));
                        next.push_back({st.qmask | (1u << j), st.sign * s, std::move(f)});
                    }
                }
                states = std::move(next);
            }
        }
        for (auto& st : states) {
            if (st.qmask != q_full) continue;
            Poly t = base * st.factor;
            total += st.sign > 0 ? t : -t;
        }
    }
    HessSymbol h;
    h.n = n;
    h.poly = total;
    return h;
}

Form mae_apply(const Form& w, const Poly& f, const SymplecticContext& ctx) {
    int n = ctx.n;
    if (f.nvars() != 2 * n) throw DomainError("mae_apply: function has wrong variable count");
    for (int v = n; v < 2 * n; ++v)
        if (f.depends_on(v))
            throw DomainError("mae_apply: function must depend on the base variables only");
    HessSymbol h = mae_symbol(w, ctx);
    std::vector<Poly> values(hess_nvars(n), Poly(2 * n));
    for (int i = 0; i < n; ++i) {
        values[hess_q_var(n, i)] = Poly::variable(2 * n, i);
        values[hess_u_var(n, i)] = f.derivative(i);
        for (int j = i; j < n; ++j)
            values[hess_uij_var(n, i, j)] = f.derivative(i).derivative(j);
    }
    Poly g = h.poly.substitute_all(values);
    Form r = form_zero(n, n);
    form_add_term(r, (1u << n) - 1, g);
    return r;
}

Form form_from_symbol(const HessSymbol& h, const SymplecticContext& ctx) {
    int n = ctx.n;
    if (h.n != n) throw DomainError("form_from_symbol: dimension mismatch");
    auto terms = ma_decompose(n, h.poly);
    // (q,u) coefficients move back to (q,p)
    std::vector<int> back(hess_nvars(n), 0);
    for (int i = 0; i < n; ++i) {
        back[hess_q_var(n, i)] = i;
        back[hess_u_var(n, i)] = n + i;
    }
    Form candidate = form_zero(n, n);
    for (const auto& term : terms) {
        std::vector<int> covs;
        for (int i = 0; i < n; ++i)
            if (!(term.I & (1u << i))) covs.push_back(i + 1); // dq over I^c
        for (int j = 0; j < n; ++j)
            if (term.J & (1u << j)) covs.push_back(n + j + 1); // dp over J
        Form base = basis_form(n, covs, Poly::constant(2 * n, 1));
        // the raw basis form realizes the minor only up to sign
        Poly probe = mae_symbol(base, ctx).poly;
        Poly minor = minor_poly(n, term.I, term.J);
        int sigma;
        if (probe == minor)
            sigma = 1;
        else if (probe == -minor)
            sigma = -1;
        else
            throw std::logic_error("form_from_symbol: basis form does not realize its minor");
        Poly c_qp = term.coeff.remap(2 * n, back);
        candidate = candidate + scale(base, sigma > 0 ? c_qp : -c_qp);
    }
    Form w0 = lepage_decompose(candidate, ctx).primitive;
    if (!(mae_symbol(w0, ctx).poly == h.poly))
        throw std::logic_error("form_from_symbol: roundtrip through mae_symbol failed");
    return w0;
}

DivergentReport divergent_type(const Form& w, const SymplecticContext& ctx) {
    if (ctx.n != 2 || w.degree != 2)
        throw DomainError("divergent_type: defined for 2-forms at n = 2");
    DivergentReport rep;
    Form dw = ext_d(w);
    rep.alpha = divide_by_omega(dw, ctx);
    rep.euler = ext_d(rep.alpha);
    rep.is_divergent = rep.euler.is_zero();
    if (rep.is_divergent) {
        if (rep.alpha.is_zero()) {
            rep.mu = Poly(4);
        } else {
            Form pot = homotopy_potential(rep.alpha, ctx);
            Poly mu = -(pot.coeffs.count(0) ? pot.coeffs.at(0) : Poly(4));
            rep.mu = mu;
            Form closed = w + scale(ctx.Omega, mu);
            if (!ext_d(closed).is_zero())
                throw std::logic_error("divergent_type: d(w + mu Omega) != 0");
        }
    }
    return rep;
}

std::string pde_class_name(PdeClass c) {
    switch (c) {
        case PdeClass::Elliptic: return "elliptic";
        case PdeClass::Hyperbolic: return "hyperbolic";
        case PdeClass::Parabolic: return "parabolic";
        case PdeClass::Indefinite: return "indefinite";
    }
    return "?";
}

LinearizationResult linearize(const Form& w, const Poly& phi,
                              const std::vector<Rational>& point,
                              const SymplecticContext& ctx) {
    int n = ctx.n;
    if ((int)point.size() != n) throw DomainError("linearize: point has wrong length");
    if (phi.nvars() != 2 * n) throw DomainError("linearize: phi has wrong variable count");
    for (int v = n; v < 2 * n; ++v)
        if (phi.depends_on(v))
            throw DomainError("linearize: phi must depend on the base variables only");
    HessSymbol h = mae_symbol(w, ctx);
    std::vector<Rational> qp(2 * n, Rational(0));
    for (int i = 0; i < n; ++i) qp[i] = point[i];
    std::vector<Rational> jet(hess_nvars(n), Rational(0));
    for (int i = 0; i < n; ++i) {
        jet[hess_q_var(n, i)] = point[i];
        jet[hess_u_var(n, i)] = phi.derivative(i).eval(qp);
        for (int j = i; j < n; ++j)
            jet[hess_uij_var(n, i, j)] = phi.derivative(i).derivative(j).eval(qp);
    }
    LinearizationResult out;
    out.principal = RatMat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Rational v = h.poly.derivative(hess_uij_var(n, i, j)).eval(jet);
            if (i != j) v /= Rational(2);
            out.principal.at(i, j) = v;
            out.principal.at(j, i) = v;
        }
    out.lower_order.resize(n);
    for (int i = 0; i < n; ++i)
        out.lower_order[i] = h.poly.derivative(hess_u_var(n, i)).eval(jet);
    SignatureResult sig = signature_exact(out.principal);
    if (sig.zero > 0)
        out.cls = PdeClass::Parabolic;
    else if (sig.positive == n || sig.negative == n)
        out.cls = PdeClass::Elliptic;
    else if (sig.positive == n - 1 || sig.negative == n - 1)
        out.cls = PdeClass::Hyperbolic;
    else
        out.cls = PdeClass::Indefinite;
    return out;
}

PdeClass ellipticity_class(const Form& w, const Poly& phi,
                           const std::vector<Rational>& point,
                           const SymplecticContext& ctx) {
    return linearize(w, phi, point, ctx).cls;
}

RatMat linearize_via_dual(const Form& w, const Poly& phi,
                          const std::vector<Rational>& point,
                          const SymplecticContext& ctx) {
    int n = ctx.n;
    if (n != 3) throw DomainError("linearize_via_dual: defined at n = 3");
    if ((int)point.size() != n) throw DomainError("linearize_via_dual: point has wrong length");
    std::vector<Rational> qp(2 * n, Rational(0));
    for (int i = 0; i < n; ++i) qp[i] = point[i];
    std::vector<Rational> full_pt(2 * n);
    for (int i = 0; i < n; ++i) full_pt[i] = point[i];
    for (int i = 0; i < n; ++i) full_pt[n + i] = phi.derivative(i).eval(qp);
    Form w_eval = eval_form_at(w, full_pt);
    // The scale-free dual representative w(K .,.,.). With it the identity
    // B = principal holds with global constant 1; the normalized dual of
    // dual_form would reintroduce a lambda-dependent factor.
    DualForm dual = dual_form(w_eval, ctx); // throws when lambda = 0
    HessSymbol h_hat = mae_symbol(dual.unnormalized, ctx);
    std::vector<Rational> jet(hess_nvars(n), Rational(0));
    for (int i = 0; i < n; ++i) {
        jet[hess_q_var(n, i)] = point[i];
        jet[hess_u_var(n, i)] = phi.derivative(i).eval(qp);
        for (int j = i; j < n; ++j)
            jet[hess_uij_var(n, i, j)] = phi.derivative(i).derivative(j).eval(qp);
    }
    Rational delta_hat = h_hat.poly.eval(jet);
    RatMat g = lr_metric(w_eval, ctx).to_rational();
    // tangent frame of the graph: t_i = (e_i, Hess phi . e_i)
    RatMat frame(2 * n, n);
    for (int i = 0; i < n; ++i) {
        frame.at(i, i) = Rational(1);
        for (int j = 0; j < n; ++j)
            frame.at(n + j, i) = phi.derivative(i).derivative(j).eval(qp);
    }
    RatMat G(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Rational s(0);
            for (int i = 0; i < 2 * n; ++i)
                for (int j = 0; j < 2 * n; ++j)
                    s += frame.at(i, a) * g.at(i, j) * frame.at(j, b);
            G.at(a, b) = s;
        }
    auto Ginv = G.inverse();
    if (!Ginv)
        throw DomainError("linearize_via_dual: g_w restricted to the graph is degenerate");
    return Ginv->scaled(delta_hat);
}

ClassifyResult classify(const Form& w_in, const SymplecticContext& ctx) {
    int n = ctx.n;
    if (w_in.degree != n) throw DomainError("classify: expected a degree-n form");
    if (!w_in.is_constant())
        throw DomainError("classify: non-constant coefficients; evaluate at a point first");
    ClassifyResult out;
    out.n = n;
    Form w = w_in;
    if (!is_primitive(w, ctx)) {
        out.warnings.push_back("form is not primitive; classified its primitive part");
        w = lepage_decompose(w, ctx).primitive;
    }
    if (n == 2) {
        out.pfaffian = pfaffian2(w, ctx).constant_value();
        int s = out.pfaffian.sign();
        if (s > 0) {
            out.orbit2 = "Laplace";
            out.normal_form = "Δf = 0";
        } else if (s < 0) {
            out.orbit2 = "Wave";
            out.normal_form = "□f = 0";
        } else {
            out.orbit2 = "Degenerate";
            out.normal_form = "f_q1q1 = 0";
        }
        return out;
    }
    if (n == 3) {
        out.lambda = hitchin_pfaffian(w, ctx).constant_value();
        out.signature = signature_exact(lr_metric(w, ctx).to_rational());
        int ls = out.lambda.sign();
        int p = out.signature.positive, m = out.signature.negative;
        struct Row {
            int ls, p, m, orbit;
            const char* nf;
        };
        static const Row rows[] = {
            {1, 3, 3, 1, "hess(f) = 1"},
            {-1, 0, 6, 2, "Δf - hess(f) = 0"},
            {-1, 4, 2, 3, "□f + hess(f) = 0"},
            {0, 0, 3, 4, "Δf = 0"},
            {0, 2, 1, 5, "□f = 0"},
            {0, 0, 1, 6, "Δ_q2q3 f = 0"},
            {0, 1, 0, 7, "□_q2q3 f = 0"},
            {0, 0, 0, 8, "f_q1q1 = 0"},
        };
        for (const Row& r : rows)
            if (r.ls == ls && r.p == p && r.m == m) {
                out.orbit3 = r.orbit;
                out.normal_form = r.nf;
                return out;
            }
        out.orbit3 = 0;
        out.normal_form = "unclassified";
        return out;
    }
    if (n == 4) {
        out.report4d.a = scalar_invariants(w, 4, ctx);
        QInvariant q = q_invariant(w, ctx);
        out.report4d.q = q.quartic;
        out.report4d.square_root = perfect_square_root(q.quartic);
        return out;
    }
    throw DomainError("classify: implemented for n in {2,3,4}");
}

GeneratingReport generating_check(const Form& w, const Poly& f,
                                  const SymplecticContext& ctx) {
    if (ctx.n != 2 || w.degree != 2)
        throw DomainError("generating_check: defined for 2-forms at n = 2");
    if (!ext_d(w).is_zero())
        throw DomainError(
            "generating_check: w is not closed; normalize with divergent_type first");
    GeneratingReport rep;
    Form fw = scale(w, f);
    Form beta = divide_by_omega(ext_d(fw), ctx);
    rep.is_generating = ext_d(beta).is_zero();
    if (!rep.is_generating) return rep;
    Poly g(4);
    if (!beta.is_zero()) {
        Form pot = homotopy_potential(beta, ctx);
        g = -(pot.coeffs.count(0) ? pot.coeffs.at(0) : Poly(4));
    }
    rep.conjugate = g;
    Form target = fw + scale(ctx.Omega, g);
    Form alpha = target.is_zero() ? form_zero(2, 1) : homotopy_potential(target, ctx);
    if (!(ext_d(alpha) == target) && !(target.is_zero() && ext_d(alpha).is_zero()))
        throw std::logic_error("generating_check: potential verification failed");
    rep.potential = alpha;
    return rep;
}

} // namespace mage
