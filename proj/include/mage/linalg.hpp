#pragma once

#include <optional>
#include <vector>

#include "mage/poly.hpp"

namespace mage {

// Dense matrix of exact rationals.
class RatMat {
public:
    RatMat() : rows_(0), cols_(0) {}
    RatMat(int rows, int cols) : rows_(rows), cols_(cols), d_(rows * cols) {}
    static RatMat identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rational& at(int i, int j) { return d_[i * cols_ + j]; }
    const Rational& at(int i, int j) const { return d_[i * cols_ + j]; }

    RatMat transpose() const;
    Rational trace() const;
    bool is_zero() const;
    bool is_symmetric() const;

    friend RatMat operator*(const RatMat& a, const RatMat& b);
    friend RatMat operator+(const RatMat& a, const RatMat& b);
    friend RatMat operator-(const RatMat& a, const RatMat& b);
    RatMat scaled(const Rational& c) const;
    friend bool operator==(const RatMat& a, const RatMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
    }

    Rational det() const;                       // square only
    std::optional<RatMat> inverse() const;      // nullopt when singular

private:
    int rows_, cols_;
    std::vector<Rational> d_;
};

// Dense matrix with polynomial entries. Also serves as the endomorphism
// type: an endomorphism of R^{2n} is a square PolyMat of size 2n.
class PolyMat {
public:
    PolyMat() : rows_(0), cols_(0) {}
    PolyMat(int rows, int cols, int nvars)
        : rows_(rows), cols_(cols), d_(rows * cols, Poly(nvars)) {}
    static PolyMat identity(int n, int nvars);
    static PolyMat from_rational(const RatMat& m, int nvars);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nvars() const { return d_.empty() ? 0 : d_[0].nvars(); }
    Poly& at(int i, int j) { return d_[i * cols_ + j]; }
    const Poly& at(int i, int j) const { return d_[i * cols_ + j]; }

    PolyMat transpose() const;
    Poly trace() const;
    bool is_zero() const;
    bool is_constant() const;
    RatMat to_rational() const; // requires is_constant()

    friend PolyMat operator+(const PolyMat& a, const PolyMat& b);
    friend PolyMat operator-(const PolyMat& a, const PolyMat& b);
    PolyMat scaled(const Poly& c) const;
    PolyMat scaled(const Rational& c) const;
    friend bool operator==(const PolyMat& a, const PolyMat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
    }

private:
    int rows_, cols_;
    std::vector<Poly> d_;
};

using Endo = PolyMat;

// Product with OpenMP-parallel entry loop, and the serial reference kept
// for testing. Results are bit-identical.
PolyMat polymat_mul(const PolyMat& a, const PolyMat& b);
PolyMat polymat_mul_serial(const PolyMat& a, const PolyMat& b);

// Exact Gaussian elimination of M x = rhs where the right-hand side carries
// polynomial entries (row operations use only rational multipliers).
struct LinSolve {
    enum class Status { Unique, Inconsistent, Underdetermined };
    Status status = Status::Unique;
    std::vector<Poly> solution;  // valid when Unique
    std::vector<Poly> residual;  // M*x - rhs for the pivot solution, when Inconsistent
};
LinSolve solve_linear(const RatMat& M, const std::vector<Poly>& rhs);

// Like solve_linear but accepts underdetermined systems, pinning the free
// variables to zero. Only Inconsistent reports failure.
LinSolve solve_linear_any(const RatMat& M, const std::vector<Poly>& rhs);

// Solve M X = RHS column by column; nullopt unless every column has a
// unique solution.
std::optional<RatMat> solve_many(const RatMat& M, const RatMat& rhs);

// Characteristic polynomial det(xI - M), leading coefficient first.
std::vector<Rational> char_poly(const RatMat& M);

// Count of positive roots (with multiplicity) of a polynomial all of whose
// roots are real, by Descartes' rule of signs. Coefficients leading-first.
int descartes_positive_roots(const std::vector<Rational>& coeffs);

} // namespace mage
