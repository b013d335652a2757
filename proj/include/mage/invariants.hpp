#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mage/exterior.hpp"
#include "mage/form.hpp"
#include "mage/linalg.hpp"

namespace mage {

struct SignatureResult {
    int positive = 0;
    int negative = 0;
    int zero = 0;
    friend bool operator==(const SignatureResult& a, const SignatureResult& b) {
        return a.positive == b.positive && a.negative == b.negative && a.zero == b.zero;
    }
};

// Homogeneous quartic in the 2n formal arguments X_1..X_{2n} of a vector
// (components along del_q, del_p in the standard order).
struct QuarticInvariant {
    int nvars = 0;
    Poly poly;
    bool is_zero() const { return poly.is_zero(); }
};

// Basis of sp(n,R) as matrices Omega_mat^{-T} . S over the symmetric unit
// matrices S; n(2n+1) elements. Built once per n and shared.
struct SpBasis {
    int n = 0;
    std::vector<RatMat> elems;
};
const SpBasis& sp_basis(int n);

// The sl(2n)-valued bracket:
//   Phi(w1,w2)(X) = A((i_X w1) ^ w2 - (-1)^n w1 ^ (i_X w2)).
// Column j of the result is the image of the j-th coordinate field.
Endo phi_bracket(const Form& w1, const Form& w2, const SymplecticContext& ctx);

// K_w = (1/2) Phi(w,w) for odd n; the tensor vanishes identically for even
// n, in which case this throws.
Endo hitchin_tensor(const Form& w, const SymplecticContext& ctx);

// pf(w) = (w ^ w) / (Omega ^ Omega) at n = 2.
Poly pfaffian2(const Form& w, const SymplecticContext& ctx);

// lambda(w) = tr(K_w^2) / 6 at n = 3; K^2 = lambda Id is verified.
Poly hitchin_pfaffian(const Form& w, const SymplecticContext& ctx);

// Lychagin-Roubtsov metric g_w = Omega(K_w .,.) with the global sign frozen
// so that the special lagrangian 3-form has signature (0,6).
PolyMat lr_metric(const Form& w, const SymplecticContext& ctx);

// Exact eigenvalue signs of a symmetric rational matrix, via the
// characteristic polynomial and Descartes' rule (valid because the spectrum
// is real).
SignatureResult signature_exact(const RatMat& M);

// ad_w^2 as an endomorphism of sp(n,R) (even n), in the sp_basis
// coordinates. The parallel version distributes the basis columns; the
// serial one is the reference. Requires constant primitive w.
RatMat ad2_matrix(const Form& w, const SymplecticContext& ctx);
RatMat ad2_matrix_serial(const Form& w, const SymplecticContext& ctx);

// a_k for k = 1..kmax: tr(K_w^{2k}) for odd n, tr((ad_w^2)^k) for even n.
std::vector<Rational> scalar_invariants(const Form& w, int kmax,
                                        const SymplecticContext& ctx);

// Degree-4 invariant. For odd n this is the quadratic form Omega(K_w X, X)
// returned as its (symmetric) matrix; for even n the quartic
// tr([ad_w^2(X (x) i_X Omega)]^2) in the formal vector X.
struct QInvariant {
    bool odd = false;
    RatMat quadratic;    // odd n
    QuarticInvariant quartic; // even n
};
QInvariant q_invariant(const Form& w, const SymplecticContext& ctx);

// If q equals sign * scale * r^2 for a quadratic form r, a positive
// rational scale and sign in {+1,-1}, returns (r, sign) with r normalized
// to leading coefficient 1. Absence is a valid answer.
std::optional<std::pair<Poly, int>> perfect_square_root(const QuarticInvariant& q);

// Dual 3-form of a nondegenerate w at n = 3, kept exact as
//   w_hat = sign * unnormalized / sqrt(lambda_abs).
// w + sqrt(eps) w_hat and w - sqrt(eps) w_hat are the eigen-volume forms of
// K_w; the sign is fixed by orientation of (w + ...)^(w - ...) against vol.
struct DualForm {
    Form unnormalized;   // w(K .,.,.) with rational coefficients
    Rational lambda_abs; // |lambda(w)|
    int lambda_sign = 0;
    int sign = 1;
    // Exact rational rendering, available when |lambda| is a perfect square.
    std::optional<Form> rational_form() const;
};
DualForm dual_form(const Form& w, const SymplecticContext& ctx);

// Nijenhuis tensor of a polynomial endomorphism field on coordinate vector
// fields: N(d_i, d_j) = [A d_i, A d_j] - A[A d_i, d_j] - A[d_i, A d_j].
struct NijenhuisTable {
    int n = 0; // half-dimension; indices run over 2n coordinate fields
    std::vector<PolyVectorField> entries; // row-major over (i,j), i < j
    const PolyVectorField& at(int i, int j) const;
    bool is_zero() const;
};
NijenhuisTable nijenhuis_endo(const PolyMat& A);

// ad_w^2 applied to a single (possibly symbolic) sp element.
Endo ad2_apply(const Form& w, const PolyMat& A, const SymplecticContext& ctx);

} // namespace mage
