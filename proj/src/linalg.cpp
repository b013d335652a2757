#include "mage/linalg.hpp"

#include <cassert>

#include "mage/parallel.hpp"

namespace mage {

RatMat RatMat::identity(int n) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

RatMat RatMat::transpose() const {
    RatMat m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
}

Rational RatMat::trace() const {
    assert(rows_ == cols_);
    Rational t(0);
    for (int i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

bool RatMat::is_zero() const {
    for (const Rational& r : d_)
        if (!r.is_zero()) return false;
    return true;
}

bool RatMat::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j)
            if (at(i, j) != at(j, i)) return false;
    return true;
}

RatMat operator*(const RatMat& a, const RatMat& b) {
    assert(a.cols_ == b.rows_);
    RatMat r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int k = 0; k < a.cols_; ++k) {
            if (a.at(i, k).is_zero()) continue;
            for (int j = 0; j < b.cols_; ++j)
                r.at(i, j) += a.at(i, k) * b.at(k, j);
        }
    return r;
}

RatMat operator+(const RatMat& a, const RatMat& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    RatMat r(a.rows_, a.cols_);
    for (int i = 0; i < a.rows_ * a.cols_; ++i) r.d_[i] = a.d_[i] + b.d_[i];
    return r;
}

RatMat operator-(const RatMat& a, const RatMat& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    RatMat r(a.rows_, a.cols_);
    for (int i = 0; i < a.rows_ * a.cols_; ++i) r.d_[i] = a.d_[i] - b.d_[i];
    return r;
}

RatMat RatMat::scaled(const Rational& c) const {
    RatMat r(rows_, cols_);
    for (int i = 0; i < rows_ * cols_; ++i) r.d_[i] = d_[i] * c;
    return r;
}

Rational RatMat::det() const {
    assert(rows_ == cols_);
    RatMat m = *this;
    Rational det(1);
    for (int col = 0; col < cols_; ++col) {
        int piv = -1;
        for (int r = col; r < rows_; ++r)
            if (!m.at(r, col).is_zero()) { piv = r; break; }
        if (piv < 0) return Rational(0);
        if (piv != col) {
            for (int j = 0; j < cols_; ++j) std::swap(m.at(piv, j), m.at(col, j));
            det = -det;
        }
        det *= m.at(col, col);
        Rational inv = m.at(col, col).inverse();
        for (int r = col + 1; r < rows_; ++r) {
            if (m.at(r, col).is_zero()) continue;
            Rational f = m.at(r, col) * inv;
            for (int j = col; j < cols_; ++j) m.at(r, j) -= f * m.at(col, j);
        }
    }
    return det;
}

std::optional<RatMat> RatMat::inverse() const {
    assert(rows_ == cols_);
    return solve_many(*this, identity(rows_));
}

PolyMat PolyMat::identity(int n, int nvars) {
    PolyMat m(n, n, nvars);
    for (int i = 0; i < n; ++i) m.at(i, i) = Poly::constant(nvars, 1);
    return m;
}

PolyMat PolyMat::from_rational(const RatMat& m, int nvars) {
    PolyMat r(m.rows(), m.cols(), nvars);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            r.at(i, j) = Poly::constant(nvars, m.at(i, j));
    return r;
}

PolyMat PolyMat::transpose() const {
    PolyMat m(cols_, rows_, nvars());
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
    return m;
}

Poly PolyMat::trace() const {
    assert(rows_ == cols_);
    Poly t(nvars());
    for (int i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

bool PolyMat::is_zero() const {
    for (const Poly& p : d_)
        if (!p.is_zero()) return false;
    return true;
}

bool PolyMat::is_constant() const {
    for (const Poly& p : d_)
        if (!p.is_constant()) return false;
    return true;
}

RatMat PolyMat::to_rational() const {
    RatMat r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j).constant_value();
    return r;
}

PolyMat operator+(const PolyMat& a, const PolyMat& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    PolyMat r = a;
    for (size_t i = 0; i < r.d_.size(); ++i) r.d_[i] += b.d_[i];
    return r;
}

PolyMat operator-(const PolyMat& a, const PolyMat& b) {
    assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
    PolyMat r = a;
    for (size_t i = 0; i < r.d_.size(); ++i) r.d_[i] -= b.d_[i];
    return r;
}

PolyMat PolyMat::scaled(const Poly& c) const {
    PolyMat r = *this;
    for (Poly& p : r.d_) p = p * c;
    return r;
}

PolyMat PolyMat::scaled(const Rational& c) const {
    PolyMat r = *this;
    for (Poly& p : r.d_) p = p.scaled(c);
    return r;
}

PolyMat polymat_mul_serial(const PolyMat& a, const PolyMat& b) {
    assert(a.cols() == b.rows());
    PolyMat r(a.rows(), b.cols(), a.nvars() ? a.nvars() : b.nvars());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            Poly s(r.nvars());
            for (int k = 0; k < a.cols(); ++k) s += a.at(i, k) * b.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

PolyMat polymat_mul(const PolyMat& a, const PolyMat& b) {
    assert(a.cols() == b.rows());
    PolyMat r(a.rows(), b.cols(), a.nvars() ? a.nvars() : b.nvars());
    par_for((size_t)a.rows() * b.cols(), [&](size_t idx) {
        int i = (int)(idx / b.cols());
        int j = (int)(idx % b.cols());
        Poly s(r.nvars());
        for (int k = 0; k < a.cols(); ++k) s += a.at(i, k) * b.at(k, j);
        r.at(i, j) = s;
    });
    return r;
}

namespace {

LinSolve solve_linear_impl(const RatMat& M, const std::vector<Poly>& rhs,
                           bool allow_underdetermined) {
    assert((int)rhs.size() == M.rows());
    int nr = M.rows(), nc = M.cols();
    RatMat A = M;
    std::vector<Poly> b = rhs;
    std::vector<int> pivot_col_of_row(nr, -1);
    std::vector<int> pivot_row_of_col(nc, -1);
    int row = 0;
    for (int col = 0; col < nc && row < nr; ++col) {
        int piv = -1;
        for (int r = row; r < nr; ++r)
            if (!A.at(r, col).is_zero()) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != row) {
            for (int j = 0; j < nc; ++j) std::swap(A.at(piv, j), A.at(row, j));
            std::swap(b[piv], b[row]);
        }
        Rational inv = A.at(row, col).inverse();
        for (int j = col; j < nc; ++j) A.at(row, j) *= inv;
        b[row] = b[row].scaled(inv);
        for (int r = 0; r < nr; ++r) {
            if (r == row || A.at(r, col).is_zero()) continue;
            Rational f = A.at(r, col);
            for (int j = col; j < nc; ++j) A.at(r, j) -= f * A.at(row, j);
            b[r] -= b[row].scaled(f);
        }
        pivot_col_of_row[row] = col;
        pivot_row_of_col[col] = row;
        ++row;
    }

    LinSolve out;
    int nvars = rhs.empty() ? 0 : rhs[0].nvars();
    for (const Poly& p : rhs)
        if (p.nvars() > 0) { nvars = p.nvars(); break; }

    bool inconsistent = false;
    for (int r = row; r < nr; ++r)
        if (!b[r].is_zero()) inconsistent = true;

    std::vector<Poly> x(nc, Poly(nvars));
    for (int r = 0; r < row; ++r) x[pivot_col_of_row[r]] = b[r];

    if (inconsistent) {
        out.status = LinSolve::Status::Inconsistent;
        out.residual.assign(nr, Poly(nvars));
        for (int i = 0; i < nr; ++i) {
            Poly s(nvars);
            for (int j = 0; j < nc; ++j) {
                if (M.at(i, j).is_zero()) continue;
                s += x[j].scaled(M.at(i, j));
            }
            out.residual[i] = s - rhs[i];
        }
        return out;
    }
    if (!allow_underdetermined) {
        for (int c = 0; c < nc; ++c) {
            if (pivot_row_of_col[c] < 0) {
                out.status = LinSolve::Status::Underdetermined;
                return out;
            }
        }
    }
    out.solution = std::move(x);
    return out;
}

} // namespace

LinSolve solve_linear(const RatMat& M, const std::vector<Poly>& rhs) {
    return solve_linear_impl(M, rhs, false);
}

LinSolve solve_linear_any(const RatMat& M, const std::vector<Poly>& rhs) {
    return solve_linear_impl(M, rhs, true);
}

std::optional<RatMat> solve_many(const RatMat& M, const RatMat& rhs) {
    assert(M.rows() == rhs.rows());
    int nr = M.rows(), nc = M.cols();
    RatMat A = M;
    RatMat B = rhs;
    std::vector<int> pivot_col_of_row(nr, -1);
    std::vector<int> pivot_row_of_col(nc, -1);
    int row = 0;
    for (int col = 0; col < nc && row < nr; ++col) {
        int piv = -1;
        for (int r = row; r < nr; ++r)
            if (!A.at(r, col).is_zero()) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != row) {
            for (int j = 0; j < nc; ++j) std::swap(A.at(piv, j), A.at(row, j));
            for (int j = 0; j < B.cols(); ++j) std::swap(B.at(piv, j), B.at(row, j));
        }
        Rational inv = A.at(row, col).inverse();
        for (int j = col; j < nc; ++j) A.at(row, j) *= inv;
        for (int j = 0; j < B.cols(); ++j) B.at(row, j) *= inv;
        for (int r = 0; r < nr; ++r) {
            if (r == row || A.at(r, col).is_zero()) continue;
            Rational f = A.at(r, col);
            for (int j = col; j < nc; ++j) A.at(r, j) -= f * A.at(row, j);
            for (int j = 0; j < B.cols(); ++j) B.at(r, j) -= f * B.at(row, j);
        }
        pivot_col_of_row[row] = col;
        pivot_row_of_col[col] = row;
        ++row;
    }
    for (int r = row; r < nr; ++r)
        for (int j = 0; j < B.cols(); ++j)
            if (!B.at(r, j).is_zero()) return std::nullopt;
    for (int c = 0; c < nc; ++c)
        if (pivot_row_of_col[c] < 0) return std::nullopt;
    RatMat X(nc, B.cols());
    for (int r = 0; r < row; ++r)
        for (int j = 0; j < B.cols(); ++j) X.at(pivot_col_of_row[r], j) = B.at(r, j);
    return X;
}

std::vector<Rational> char_poly(const RatMat& M) {
    assert(M.rows() == M.cols());
    int n = M.rows();
    // Faddeev-LeVerrier: B_0 = I, a_{n-k} = -tr(M B_{k-1}) / k,
    // B_k = M B_{k-1} + a_{n-k} I.
    std::vector<Rational> coeffs(n + 1);
    coeffs[0] = Rational(1);
    RatMat B = RatMat::identity(n);
    for (int k = 1; k <= n; ++k) {
        RatMat MB = M * B;
        Rational c = -(MB.trace() / Rational((long)k));
        coeffs[k] = c;
        if (k < n) {
            B = MB;
            for (int i = 0; i < n; ++i) B.at(i, i) += c;
        }
    }
    return coeffs;
}

int descartes_positive_roots(const std::vector<Rational>& coeffs) {
    int variations = 0;
    int prev = 0;
    for (const Rational& c : coeffs) {
        int s = c.sign();
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++variations;
        prev = s;
    }
    return variations;
}

} // namespace mage
