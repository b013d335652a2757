#include "mage/gcs.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <istream>
#include <sstream>

#include "mage/errors.hpp"
#include "mage/parallel.hpp"

namespace mage {

GenSection GenSection::zero(int n) {
    GenSection s;
    s.n = n;
    s.X = PolyVectorField::zero(n);
    s.xi = form_zero(n, 1);
    return s;
}

GenSection GenSection::from_vector(const PolyVectorField& v) {
    GenSection s = zero(v.n);
    s.X = v;
    return s;
}

GenSection GenSection::from_form(const Form& a) {
    if (a.degree != 1) throw DomainError("GenSection: form part must have degree 1");
    GenSection s = zero(a.n);
    s.xi = a;
    return s;
}

GenSection operator+(const GenSection& a, const GenSection& b) {
    assert(a.n == b.n);
    GenSection s = GenSection::zero(a.n);
    for (int i = 0; i < 2 * a.n; ++i) s.X.comps[i] = a.X.comps[i] + b.X.comps[i];
    s.xi = a.xi + b.xi;
    return s;
}

GenSection operator-(const GenSection& a, const GenSection& b) {
    assert(a.n == b.n);
    GenSection s = GenSection::zero(a.n);
    for (int i = 0; i < 2 * a.n; ++i) s.X.comps[i] = a.X.comps[i] - b.X.comps[i];
    s.xi = a.xi - b.xi;
    return s;
}

Poly pairing(const GenSection& a, const GenSection& b) {
    if (a.n != b.n) throw DomainError("pairing: dimension mismatch");
    int dim = 2 * a.n;
    Poly s(dim);
    for (int i = 0; i < dim; ++i) {
        uint32_t bit = 1u << i;
        auto ita = a.xi.coeffs.find(bit);
        if (ita != a.xi.coeffs.end()) s += ita->second * b.X.comps[i];
        auto itb = b.xi.coeffs.find(bit);
        if (itb != b.xi.coeffs.end()) s += itb->second * a.X.comps[i];
    }
    return s.scaled(Rational(1, 2));
}

namespace {

// Lie derivative of a 1-form along a polynomial vector field, by Cartan's
// formula.
Form lie_derivative_1form(const PolyVectorField& X, const Form& eta) {
    Form d_eta = ext_d(eta);
    Form part1 = contract(X, d_eta);
    Form ixeta = contract(X, eta); // 0-form
    return part1 + ext_d(ixeta);
}

} // namespace

GenSection courant_bracket(const GenSection& a, const GenSection& b) {
    if (a.n != b.n) throw DomainError("courant_bracket: dimension mismatch");
    GenSection out = GenSection::zero(a.n);
    out.X = lie_bracket(a.X, b.X);
    Form lx_eta = lie_derivative_1form(a.X, b.xi);
    Form ly_xi = lie_derivative_1form(b.X, a.xi);
    Form inner = contract(a.X, b.xi) - contract(b.X, a.xi); // 0-form
    out.xi = lx_eta - ly_xi - scale(ext_d(inner), Rational(1, 2));
    return out;
}

namespace {

PolyMat form_matrix(const Form& w) {
    int dim = 2 * w.n;
    PolyMat W(dim, dim, dim);
    for (const auto& [mask, c] : w.coeffs) {
        uint32_t mm = mask;
        int i = std::countr_zero(mm);
        mm &= mm - 1;
        int j = std::countr_zero(mm);
        W.at(i, j) += c;
        W.at(j, i) -= c;
    }
    return W;
}

Form matrix_form(const PolyMat& W, int n) {
    Form w = form_zero(n, 2);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i + 1; j < 2 * n; ++j)
            form_add_term(w, (1u << i) | (1u << j), W.at(i, j));
    return w;
}

GCStructure assemble(const Form& w, const SymplecticContext& ctx) {
    int n = ctx.n;
    if (w.degree != 2 || w.n != n) throw DomainError("gcs: expected a 2-form");
    int dim = 2 * n;
    PolyMat W = form_matrix(w);
    // w = Omega(A .,.)  =>  A = -Omega_mat . W
    PolyMat A = polymat_mul(PolyMat::from_rational(ctx.Omega_mat, dim), W)
                    .scaled(Rational(-1));
    // omega~ = -Omega((1 + A^2).,.)  =>  Wtilde = -(1 + A^2)^T Omega_mat
    PolyMat one_plus_A2 = PolyMat::identity(dim, dim) + polymat_mul(A, A);
    PolyMat Wtilde = polymat_mul(one_plus_A2.transpose(),
                                 PolyMat::from_rational(ctx.Omega_mat, dim))
                         .scaled(Rational(-1));
    GCStructure g;
    g.n = n;
    g.A = A;
    g.wtilde = matrix_form(Wtilde, n);
    g.J = PolyMat(2 * dim, 2 * dim, dim);
    PolyMat P = PolyMat::from_rational(ctx.poisson, dim);
    PolyMat Astar = A.transpose();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            g.J.at(i, j) = A.at(i, j);
            g.J.at(i, dim + j) = P.at(i, j);
            g.J.at(dim + i, j) = Wtilde.at(i, j);
            g.J.at(dim + i, dim + j) = -Astar.at(i, j);
        }
    // invariants: J^2 = -Id and (J.,.) = -(.,J.) as polynomial identities
    PolyMat J2 = polymat_mul(g.J, g.J);
    if (!(J2 == PolyMat::identity(2 * dim, dim).scaled(Rational(-1))))
        throw std::logic_error("gcs: J^2 != -Id");
    // pairing matrix (block off-diagonal halves)
    PolyMat Pm(2 * dim, 2 * dim, dim);
    for (int i = 0; i < dim; ++i) {
        Pm.at(i, dim + i) = Poly::constant(dim, Rational(1, 2));
        Pm.at(dim + i, i) = Poly::constant(dim, Rational(1, 2));
    }
    PolyMat compat = polymat_mul(g.J.transpose(), Pm) + polymat_mul(Pm, g.J);
    if (!compat.is_zero())
        throw std::logic_error("gcs: pairing compatibility failed");
    return g;
}

} // namespace

GCStructure gcs_from_hitchin_pair(const Form& w, const SymplecticContext& ctx) {
    if (!ext_d(w).is_zero())
        throw DomainError(
            "gcs_from_hitchin_pair: w is not closed, so (w, Omega) is not a Hitchin "
            "pair; normalize via divergent_type first");
    return assemble(w, ctx);
}

GCStructure gcs_assemble_unchecked(const Form& w, const SymplecticContext& ctx) {
    return assemble(w, ctx);
}

GenSection apply_gcs(const GCStructure& J, const GenSection& s) {
    if (J.n != s.n) throw DomainError("apply_gcs: dimension mismatch");
    int dim = 2 * J.n;
    std::vector<Poly> in(2 * dim, Poly(dim));
    for (int i = 0; i < dim; ++i) in[i] = s.X.comps[i];
    for (const auto& [mask, c] : s.xi.coeffs) in[dim + std::countr_zero(mask)] = c;
    GenSection out = GenSection::zero(J.n);
    for (int i = 0; i < 2 * dim; ++i) {
        Poly acc(dim);
        for (int j = 0; j < 2 * dim; ++j) {
            if (J.J.at(i, j).is_zero() || in[j].is_zero()) continue;
            acc += J.J.at(i, j) * in[j];
        }
        if (i < dim)
            out.X.comps[i] = acc;
        else if (!acc.is_zero())
            form_add_term(out.xi, 1u << (i - dim), acc);
    }
    return out;
}

std::vector<GenSection> gcs_frame(int n) {
    std::vector<GenSection> frame;
    for (int i = 0; i < 2 * n; ++i)
        frame.push_back(GenSection::from_vector(PolyVectorField::basis(n, i)));
    for (int i = 0; i < 2 * n; ++i) {
        Form dx = form_zero(n, 1);
        form_add_term(dx, 1u << i, Poly::constant(2 * n, 1));
        frame.push_back(GenSection::from_form(dx));
    }
    return frame;
}

bool ResidualTable::is_zero() const {
    for (const auto& e : entries)
        if (!e.is_zero()) return false;
    return true;
}

ResidualTable gcs_integrability_residual(const GCStructure& J) {
    ResidualTable table;
    table.n = J.n;
    auto frame = gcs_frame(J.n);
    int m = (int)frame.size();
    std::vector<GenSection> jframe;
    jframe.reserve(m);
    for (const auto& s : frame) jframe.push_back(apply_gcs(J, s));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            GenSection r = courant_bracket(jframe[i], jframe[j]) -
                           apply_gcs(J, courant_bracket(jframe[i], frame[j])) -
                           apply_gcs(J, courant_bracket(frame[i], jframe[j])) -
                           courant_bracket(frame[i], frame[j]);
            table.entries.push_back(std::move(r));
        }
    return table;
}

std::vector<SurfaceSample> load_surface(std::istream& in) {
    std::vector<SurfaceSample> samples;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream is(line);
        std::vector<double> vals;
        double v;
        while (is >> v) vals.push_back(v);
        if (vals.size() != 12)
            throw ParseError("surface sample needs 12 numbers, got " +
                                 std::to_string(vals.size()),
                             lineno, 1);
        SurfaceSample s;
        for (int i = 0; i < 4; ++i) s.base[i] = vals[i];
        for (int i = 0; i < 4; ++i) s.t1[i] = vals[4 + i];
        for (int i = 0; i < 4; ++i) s.t2[i] = vals[8 + i];
        samples.push_back(s);
    }
    return samples;
}

namespace {

double norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// residual of v against span(basis); basis vectors are orthonormalized
// in place on first use by the caller
double span_residual(const std::vector<std::vector<double>>& onb, std::vector<double> v) {
    double nv = norm(v);
    if (nv == 0) return 0;
    for (const auto& b : onb) {
        double dot = 0;
        for (size_t i = 0; i < v.size(); ++i) dot += v[i] * b[i];
        for (size_t i = 0; i < v.size(); ++i) v[i] -= dot * b[i];
    }
    return norm(v) / std::max(1.0, nv);
}

std::vector<std::vector<double>> orthonormalize(std::vector<std::vector<double>> vs,
                                                double drop_tol) {
    std::vector<std::vector<double>> onb;
    for (auto& v : vs) {
        for (const auto& b : onb) {
            double dot = 0;
            for (size_t i = 0; i < v.size(); ++i) dot += v[i] * b[i];
            for (size_t i = 0; i < v.size(); ++i) v[i] -= dot * b[i];
        }
        double nv = norm(v);
        if (nv > drop_tol) {
            for (double& x : v) x /= nv;
            onb.push_back(v);
        }
    }
    return onb;
}

} // namespace

std::vector<SampleReport> generalized_solution_check(const GCStructure& J,
                                                     const std::vector<SurfaceSample>& L,
                                                     double tol,
                                                     const SymplecticContext& ctx) {
    if (J.n != 2) throw DomainError("generalized_solution_check: defined for n = 2");
    std::vector<SampleReport> reports(L.size());
    par_for(L.size(), [&](size_t idx) {
        const SurfaceSample& s = L[idx];
        SampleReport& rep = reports[idx];
        std::vector<double> base(s.base.begin(), s.base.end());
        std::vector<double> t1(s.t1.begin(), s.t1.end());
        std::vector<double> t2(s.t2.begin(), s.t2.end());
        double scale_t = std::max(norm(t1), norm(t2));
        if (scale_t == 0) return; // tangent_ok stays false
        auto tan_onb = orthonormalize({t1, t2}, tol * scale_t);
        rep.tangent_ok = tan_onb.size() == 2;
        if (!rep.tangent_ok) return;

        // annihilator of span(t1,t2): null space of the 2x4 system
        std::vector<std::vector<double>> rowsys = {t1, t2};
        // gaussian elimination with partial pivoting
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < 4 && r < 2; ++c) {
            int p = -1;
            double best = 0;
            for (int rr = r; rr < 2; ++rr)
                if (std::abs(rowsys[rr][c]) > best) {
                    best = std::abs(rowsys[rr][c]);
                    p = rr;
                }
            if (p < 0 || best <= tol * scale_t) continue;
            std::swap(rowsys[p], rowsys[r]);
            for (int rr = 0; rr < 2; ++rr) {
                if (rr == r) continue;
                double f = rowsys[rr][c] / rowsys[r][c];
                for (int cc = 0; cc < 4; ++cc) rowsys[rr][cc] -= f * rowsys[r][cc];
            }
            pivots.push_back(c);
            ++r;
        }
        std::vector<std::vector<double>> xi;
        for (int c = 0; c < 4; ++c) {
            bool is_piv = false;
            for (int p : pivots)
                if (p == c) is_piv = true;
            if (is_piv) continue;
            std::vector<double> v(4, 0.0);
            v[c] = 1.0;
            for (int rr = 0; rr < (int)pivots.size(); ++rr)
                v[pivots[rr]] = -rowsys[rr][c] / rowsys[rr][pivots[rr]];
            xi.push_back(v);
        }

        // W = T_L (+) T_L^0 inside R^8
        std::vector<std::vector<double>> W;
        for (const auto& t : {t1, t2}) {
            std::vector<double> v(8, 0.0);
            for (int i = 0; i < 4; ++i) v[i] = t[i];
            W.push_back(v);
        }
        for (const auto& x : xi) {
            std::vector<double> v(8, 0.0);
            for (int i = 0; i < 4; ++i) v[4 + i] = x[i];
            W.push_back(v);
        }
        auto onbW = orthonormalize(W, 1e-300);

        // J evaluated at the base point
        std::vector<std::vector<double>> Jnum(8, std::vector<double>(8));
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) Jnum[i][j] = J.J.at(i, j).eval_double(base);
        double jr = 0;
        for (const auto& wv : W) {
            std::vector<double> img(8, 0.0);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) img[i] += Jnum[i][j] * wv[j];
            jr = std::max(jr, span_residual(onbW, img));
        }
        rep.j_residual = jr;
        rep.j_closed = jr <= tol;

        double o = eval_2form_double(ctx.Omega, base, t1, t2);
        rep.omega_residual = std::abs(o) / (norm(t1) * norm(t2));
        rep.omega_lagrangian = rep.omega_residual <= tol;

        std::vector<std::vector<double>> Anum(4, std::vector<double>(4));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) Anum[i][j] = J.A.at(i, j).eval_double(base);
        double ar = 0;
        for (const auto& t : {t1, t2}) {
            std::vector<double> img(4, 0.0);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) img[i] += Anum[i][j] * t[j];
            ar = std::max(ar, span_residual(tan_onb, img));
        }
        rep.a_residual = ar;
        rep.a_closed = ar <= tol;
        rep.pass = rep.tangent_ok && rep.j_closed;
    });
    return reports;
}

} // namespace mage
