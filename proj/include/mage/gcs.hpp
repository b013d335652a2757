#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "mage/form.hpp"

namespace mage {

// Section X + xi of T (+) T*.
struct GenSection {
    int n = 0;
    PolyVectorField X;
    Form xi; // degree 1

    static GenSection zero(int n);
    static GenSection from_vector(const PolyVectorField& v);
    static GenSection from_form(const Form& a);
    bool is_zero() const { return X.is_zero() && xi.is_zero(); }
    friend bool operator==(const GenSection& a, const GenSection& b) {
        return a.n == b.n && a.X == b.X && a.xi == b.xi;
    }
};

GenSection operator+(const GenSection& a, const GenSection& b);
GenSection operator-(const GenSection& a, const GenSection& b);

// Indefinite pairing (X+xi, Y+eta) = (xi(Y) + eta(X)) / 2.
Poly pairing(const GenSection& a, const GenSection& b);

// Courant bracket [X+xi, Y+eta] = [X,Y] + L_X eta - L_Y xi
//                                 - d(i_X eta - i_Y xi)/2.
GenSection courant_bracket(const GenSection& a, const GenSection& b);

// Crainic block structure on T (+) T*:
//   J = ( A        Omega^{-1} )
//       ( omega~   -A^*       )
// with w = Omega(A .,.) and omega~ = -Omega((1+A^2).,.).
struct GCStructure {
    int n = 0;
    PolyMat A;      // 2n x 2n
    Form wtilde;    // degree 2
    PolyMat J;      // 4n x 4n
};

// Checked constructor: requires dw = 0, then verifies J^2 = -Id and pairing
// compatibility as exact polynomial identities.
GCStructure gcs_from_hitchin_pair(const Form& w, const SymplecticContext& ctx);

// Assembles the same blocks without the closedness check, so that the
// non-integrable branch of the dichotomy is reachable in tests and
// diagnostics. The algebraic invariants still hold and are still verified.
GCStructure gcs_assemble_unchecked(const Form& w, const SymplecticContext& ctx);

GenSection apply_gcs(const GCStructure& J, const GenSection& s);

// The 4n constant frame sections: coordinate fields, then coordinate
// covectors.
std::vector<GenSection> gcs_frame(int n);

// Courant-Nijenhuis residual N(a,b) = [Ja,Jb] - J[Ja,b] - J[a,Jb] - [a,b]
// over all pairs of frame sections; identically zero iff integrable.
struct ResidualTable {
    int n = 0;
    std::vector<GenSection> entries; // pairs (i,j), i < j, row-major
    bool is_zero() const;
};
ResidualTable gcs_integrability_residual(const GCStructure& J);

// Numeric surface data: base point in R^4 plus two tangent vectors per
// sample. Input format: one sample per line, 12 whitespace-separated
// numbers (4 base + 4 + 4 tangent components); blank lines and lines
// starting with '#' are skipped.
struct SurfaceSample {
    std::array<double, 4> base;
    std::array<double, 4> t1, t2;
};
std::vector<SurfaceSample> load_surface(std::istream& in);

struct SampleReport {
    bool tangent_ok = false;   // tangent vectors independent at this sample
    double j_residual = 0;     // closure of T_L (+) T_L^0 under J
    bool j_closed = false;
    double omega_residual = 0; // |Omega(t1,t2)|, normalized
    bool omega_lagrangian = false;
    double a_residual = 0;     // closure of T_L under the A block
    bool a_closed = false;
    bool pass = false;
};
std::vector<SampleReport> generalized_solution_check(const GCStructure& J,
                                                     const std::vector<SurfaceSample>& L,
                                                     double tol,
                                                     const SymplecticContext& ctx);

} // namespace mage
