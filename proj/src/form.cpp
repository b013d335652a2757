#include "mage/form.hpp"

#include <bit>
#include <cassert>

#include "mage/errors.hpp"

namespace mage {

namespace {

inline int popcount(uint32_t m) { return std::popcount(m); }

// Sign of appending covector bit b (0-based) on the right of the sorted
// product `mask`: the new factor commutes past every member above it.
inline int append_sign(uint32_t mask, int b) {
    return (popcount(mask >> (b + 1)) & 1) ? -1 : 1;
}

// Sign of merging two disjoint sorted products a ^ b: each member of b
// commutes past the members of a above it.
inline int merge_sign(uint32_t a, uint32_t b) {
    int s = 1;
    while (b) {
        int bit = std::countr_zero(b);
        s *= append_sign(a, bit);
        b &= b - 1;
    }
    return s;
}

} // namespace

bool Form::is_constant() const {
    for (const auto& [m, c] : coeffs)
        if (!c.is_constant()) return false;
    return true;
}

Form form_zero(int n, int degree) {
    Form f;
    f.n = n;
    f.degree = degree;
    return f;
}

void form_add_term(Form& f, uint32_t mask, const Poly& c) {
    assert(popcount(mask) == f.degree);
    if (c.is_zero()) return;
    auto it = f.coeffs.find(mask);
    if (it == f.coeffs.end()) {
        f.coeffs.emplace(mask, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) f.coeffs.erase(it);
    }
}

Form basis_form(int n, const std::vector<int>& covs, const Poly& c) {
    Form f = form_zero(n, (int)covs.size());
    uint32_t mask = 0;
    int sign = 1;
    for (int i : covs) {
        assert(i >= 1 && i <= 2 * n);
        uint32_t bit = 1u << (i - 1);
        if (mask & bit) return f; // repeated covector
        sign *= append_sign(mask, i - 1);
        mask |= bit;
    }
    form_add_term(f, mask, sign == 1 ? c : -c);
    return f;
}

Form basis_form(int n, std::initializer_list<int> covs, const Poly& c) {
    return basis_form(n, std::vector<int>(covs), c);
}

Form basis_form(int n, std::initializer_list<int> covs, const Rational& c) {
    return basis_form(n, covs, Poly::constant(2 * n, c));
}

PolyVectorField PolyVectorField::zero(int n) {
    PolyVectorField v;
    v.n = n;
    v.comps.assign(2 * n, Poly(2 * n));
    return v;
}

PolyVectorField PolyVectorField::basis(int n, int j) {
    PolyVectorField v = zero(n);
    v.comps[j] = Poly::constant(2 * n, 1);
    return v;
}

bool PolyVectorField::is_zero() const {
    for (const Poly& p : comps)
        if (!p.is_zero()) return false;
    return true;
}

Form operator+(const Form& a, const Form& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.n != b.n || a.degree != b.degree)
        throw DomainError("form addition: mismatched dimension or degree");
    Form r = a;
    for (const auto& [m, c] : b.coeffs) form_add_term(r, m, c);
    return r;
}

Form operator-(const Form& a) {
    Form r = form_zero(a.n, a.degree);
    for (const auto& [m, c] : a.coeffs) r.coeffs.emplace(m, -c);
    return r;
}

Form operator-(const Form& a, const Form& b) { return a + (-b); }

Form scale(const Form& a, const Poly& c) {
    Form r = form_zero(a.n, a.degree);
    for (const auto& [m, k] : a.coeffs) form_add_term(r, m, k * c);
    return r;
}

Form scale(const Form& a, const Rational& c) {
    Form r = form_zero(a.n, a.degree);
    if (c.is_zero()) return r;
    for (const auto& [m, k] : a.coeffs) r.coeffs.emplace(m, k.scaled(c));
    return r;
}

Form wedge(const Form& a, const Form& b) {
    if (a.n != b.n) throw DomainError("wedge: dimension mismatch");
    Form r = form_zero(a.n, a.degree + b.degree);
    if (r.degree > 2 * a.n) return r; // identically zero above the top degree
    for (const auto& [ma, ca] : a.coeffs) {
        for (const auto& [mb, cb] : b.coeffs) {
            if (ma & mb) continue;
            int s = merge_sign(ma, mb);
            Poly c = ca * cb;
            form_add_term(r, ma | mb, s == 1 ? c : -c);
        }
    }
    return r;
}

Form contract_basis(int j, const Form& a) {
    if (a.degree == 0) throw DomainError("contract: cannot contract a 0-form");
    Form r = form_zero(a.n, a.degree - 1);
    uint32_t bit = 1u << j;
    for (const auto& [m, c] : a.coeffs) {
        if (!(m & bit)) continue;
        int pos = popcount(m & (bit - 1)); // members below j
        Poly t = (pos & 1) ? -c : c;
        form_add_term(r, m & ~bit, t);
    }
    return r;
}

Form contract(const PolyVectorField& X, const Form& a) {
    if (X.n != a.n) throw DomainError("contract: dimension mismatch");
    if (a.degree == 0) throw DomainError("contract: cannot contract a 0-form");
    Form r = form_zero(a.n, a.degree - 1);
    for (int j = 0; j < 2 * a.n; ++j) {
        if (X.comps[j].is_zero()) continue;
        Form part = contract_basis(j, a);
        r = r + scale(part, X.comps[j]);
    }
    return r;
}

Form ext_d(const Form& a) {
    Form r = form_zero(a.n, a.degree + 1);
    if (r.degree > 2 * a.n) return r;
    for (const auto& [m, c] : a.coeffs) {
        for (int v = 0; v < 2 * a.n; ++v) {
            uint32_t bit = 1u << v;
            if (m & bit) continue;
            Poly dc = c.derivative(v);
            if (dc.is_zero()) continue;
            // dx_v ^ dx_m: dx_v commutes past the members of m below v.
            int s = (popcount(m & (bit - 1)) & 1) ? -1 : 1;
            form_add_term(r, m | bit, s == 1 ? dc : -dc);
        }
    }
    return r;
}

PolyVectorField lie_bracket(const PolyVectorField& X, const PolyVectorField& Y) {
    assert(X.n == Y.n);
    PolyVectorField r = PolyVectorField::zero(X.n);
    for (int k = 0; k < 2 * X.n; ++k) {
        Poly s(2 * X.n);
        for (int v = 0; v < 2 * X.n; ++v) {
            s += X.comps[v] * Y.comps[k].derivative(v);
            s -= Y.comps[v] * X.comps[k].derivative(v);
        }
        r.comps[k] = s;
    }
    return r;
}

Form eval_form_at(const Form& a, const std::vector<Rational>& pt) {
    assert((int)pt.size() == 2 * a.n);
    Form r = form_zero(a.n, a.degree);
    for (const auto& [m, c] : a.coeffs)
        form_add_term(r, m, Poly::constant(2 * a.n, c.eval(pt)));
    return r;
}

double eval_2form_double(const Form& a, const std::vector<double>& base,
                         const std::vector<double>& v1, const std::vector<double>& v2) {
    assert(a.degree == 2);
    double total = 0;
    for (const auto& [m, c] : a.coeffs) {
        uint32_t mm = m;
        int i = std::countr_zero(mm);
        mm &= mm - 1;
        int j = std::countr_zero(mm);
        double minor = v1[i] * v2[j] - v1[j] * v2[i];
        total += c.eval_double(base) * minor;
    }
    return total;
}

SymplecticContext SymplecticContext::make(int n) {
    SymplecticContext ctx;
    ctx.n = n;
    ctx.Omega = form_zero(n, 2);
    for (int i = 1; i <= n; ++i)
        ctx.Omega = ctx.Omega + basis_form(n, {i, n + i}, Rational(1));
    Form v = form_zero(n, 0);
    form_add_term(v, 0, Poly::constant(2 * n, 1));
    Rational factorial(1);
    for (int i = 1; i <= n; ++i) {
        v = wedge(v, ctx.Omega);
        factorial *= Rational(i);
    }
    ctx.vol = scale(v, factorial.inverse());
    ctx.Omega_mat = RatMat(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        ctx.Omega_mat.at(i, n + i) = Rational(1);
        ctx.Omega_mat.at(n + i, i) = Rational(-1);
    }
    auto inv = ctx.Omega_mat.inverse();
    ctx.poisson = *inv;
    return ctx;
}

bool is_primitive(const Form& w, const SymplecticContext& ctx) {
    return wedge(w, ctx.Omega).is_zero();
}

std::string mask_chain_string(uint32_t mask, int n) {
    std::string s;
    for (int i = 0; i < 2 * n; ++i) {
        if (!(mask & (1u << i))) continue;
        if (!s.empty()) s += "^";
        if (i < n)
            s += "dq" + std::to_string(i + 1);
        else
            s += "dp" + std::to_string(i - n + 1);
    }
    return s;
}

std::string form_to_string(const Form& f) {
    if (f.is_zero()) return "0";
    auto namer = qp_namer(f.n);
    std::string out;
    bool first = true;
    for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) {
        uint32_t mask = it->first;
        const Poly& c = it->second;
        std::string chain = mask_chain_string(mask, f.n);
        if (chain.empty()) { // degree-0 form
            out = poly_to_string(c, namer);
            continue;
        }
        if (c.terms().size() == 1) {
            const auto& [mono, coef] = *c.terms().begin();
            bool has_vars = false;
            for (uint32_t e : mono)
                if (e) has_vars = true;
            Rational a = coef.abs();
            std::string body;
            if (!has_vars) {
                body = a.str() + "*" + chain;
            } else {
                std::string vars = poly_to_string(Poly::monomial(c.nvars(), mono, a), namer);
                body = vars + "*" + chain;
            }
            if (first)
                out += (coef.sign() < 0 ? "-" : "") + body;
            else
                out += (coef.sign() < 0 ? " - " : " + ") + body;
        } else {
            std::string body = "(" + poly_to_string(c, namer) + ")*" + chain;
            out += first ? body : " + " + body;
        }
        first = false;
    }
    return out;
}

} // namespace mage
