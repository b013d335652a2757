#include "mage/poly.hpp"

#include <cassert>
#include <numeric>
#include <sstream>

namespace mage {

Poly Poly::constant(int nvars, const Rational& c) {
    Poly p(nvars);
    if (!c.is_zero()) p.terms_[Mono(nvars, 0)] = c;
    return p;
}

Poly Poly::variable(int nvars, int var, uint32_t exp) {
    assert(var >= 0 && var < nvars);
    Poly p(nvars);
    if (exp == 0) return constant(nvars, 1);
    Mono m(nvars, 0);
    m[var] = exp;
    p.terms_[m] = Rational(1);
    return p;
}

Poly Poly::monomial(int nvars, const Mono& m, const Rational& c) {
    assert((int)m.size() == nvars);
    Poly p(nvars);
    if (!c.is_zero()) p.terms_[m] = c;
    return p;
}

bool Poly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Mono& m = terms_.begin()->first;
    for (uint32_t e : m)
        if (e != 0) return false;
    return true;
}

Rational Poly::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw DomainError("polynomial is not constant");
    return terms_.begin()->second;
}

int Poly::total_degree() const {
    int deg = 0;
    for (const auto& [m, c] : terms_) {
        int d = std::accumulate(m.begin(), m.end(), 0);
        if (d > deg) deg = d;
    }
    return deg;
}

bool Poly::depends_on(int var) const {
    for (const auto& [m, c] : terms_)
        if (m[var] != 0) return true;
    return false;
}

bool Poly::is_homogeneous(int degree) const {
    for (const auto& [m, c] : terms_)
        if (std::accumulate(m.begin(), m.end(), 0) != degree) return false;
    return true;
}

void Poly::add_term(const Mono& m, const Rational& c) {
    assert((int)m.size() == nvars_);
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    assert(nvars_ == o.nvars_ || terms_.empty() || o.terms_.empty());
    if (terms_.empty()) nvars_ = o.nvars_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    assert(nvars_ == o.nvars_ || terms_.empty() || o.terms_.empty());
    if (terms_.empty()) nvars_ = o.nvars_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    assert(a.nvars_ == b.nvars_ || a.terms_.empty() || b.terms_.empty());
    Poly r(a.terms_.empty() ? b.nvars_ : a.nvars_);
    if (a.terms_.empty() || b.terms_.empty()) return r;
    const Poly& outer = a.terms_.size() <= b.terms_.size() ? a : b;
    const Poly& inner = a.terms_.size() <= b.terms_.size() ? b : a;
    Mono m(r.nvars_);
    for (const auto& [ma, ca] : outer.terms_) {
        for (const auto& [mb, cb] : inner.terms_) {
            for (int i = 0; i < r.nvars_; ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Poly Poly::scaled(const Rational& c) const {
    Poly r(nvars_);
    if (c.is_zero()) return r;
    for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
    return r;
}

Poly Poly::pow(unsigned k) const {
    Poly r = Poly::constant(nvars_, 1);
    Poly base = *this;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

Poly Poly::derivative(int var) const {
    assert(var >= 0 && var < nvars_);
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) {
        if (m[var] == 0) continue;
        Mono d = m;
        d[var] -= 1;
        r.add_term(d, c * Rational((long)m[var]));
    }
    return r;
}

Poly Poly::substitute_all(const std::vector<Poly>& values) const {
    assert((int)values.size() == nvars_);
    int out_vars = nvars_ == 0 ? 0 : values[0].nvars();
    // powers[v][k] = values[v]^k, filled on demand
    std::vector<std::vector<Poly>> powers(nvars_);
    for (int v = 0; v < nvars_; ++v) powers[v].push_back(Poly::constant(out_vars, 1));
    Poly r(out_vars);
    for (const auto& [m, c] : terms_) {
        Poly t = Poly::constant(out_vars, c);
        for (int v = 0; v < nvars_; ++v) {
            uint32_t e = m[v];
            if (e == 0) continue;
            auto& pw = powers[v];
            while (pw.size() <= e) pw.push_back(pw.back() * values[v]);
            t = t * pw[e];
        }
        r += t;
    }
    return r;
}

Poly Poly::remap(int new_nvars, const std::vector<int>& var_map) const {
    assert((int)var_map.size() == nvars_);
    Poly r(new_nvars);
    for (const auto& [m, c] : terms_) {
        Mono nm(new_nvars, 0);
        for (int v = 0; v < nvars_; ++v) {
            if (m[v] == 0) continue;
            assert(var_map[v] >= 0 && var_map[v] < new_nvars);
            nm[var_map[v]] += m[v];
        }
        r.add_term(nm, c);
    }
    return r;
}

Rational Poly::eval(const std::vector<Rational>& xs) const {
    assert((int)xs.size() == nvars_);
    Rational r(0);
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (int v = 0; v < nvars_; ++v)
            if (m[v] != 0) t *= xs[v].pow(m[v]);
        r += t;
    }
    return r;
}

double Poly::eval_double(const std::vector<double>& xs) const {
    assert((int)xs.size() == nvars_);
    double r = 0;
    for (const auto& [m, c] : terms_) {
        double t = c.to_double();
        for (int v = 0; v < nvars_; ++v)
            for (uint32_t k = 0; k < m[v]; ++k) t *= xs[v];
        r += t;
    }
    return r;
}

namespace {

std::string mono_vars_string(const Mono& m, const std::function<std::string(int)>& namer) {
    std::string s;
    for (size_t v = 0; v < m.size(); ++v) {
        if (m[v] == 0) continue;
        if (!s.empty()) s += "*";
        s += namer((int)v);
        if (m[v] > 1) s += "^" + std::to_string(m[v]);
    }
    return s;
}

} // namespace

std::string poly_to_string(const Poly& p, const std::function<std::string(int)>& namer) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    const auto& terms = p.terms();
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const Rational& c = it->second;
        Rational a = c.abs();
        std::string vars = mono_vars_string(it->first, namer);
        std::string body;
        if (vars.empty())
            body = a.str();
        else if (a.is_one())
            body = vars;
        else
            body = a.str() + "*" + vars;
        if (first) {
            out += (c.sign() < 0 ? "-" : "") + body;
            first = false;
        } else {
            out += (c.sign() < 0 ? " - " : " + ") + body;
        }
    }
    return out;
}

std::function<std::string(int)> qp_namer(int n) {
    return [n](int v) {
        if (v < n) return "q" + std::to_string(v + 1);
        return "p" + std::to_string(v - n + 1);
    };
}

} // namespace mage
