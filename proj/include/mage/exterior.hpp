#pragma once

#include "mage/form.hpp"
#include "mage/linalg.hpp"

namespace mage {

// Algebraic Lie action of an endomorphism on a form:
//   (L_A a)(X_1,...,X_k) = -sum_i a(X_1,..., A X_i, ..., X_k).
// Pure slot action; coefficients are carried along untouched, so A may have
// polynomial entries.
Form lie_action(const PolyMat& A, const Form& a);
Form lie_action(const RatMat& A, const Form& a);

// Inverse of the top-degree pairing: the unique vector field with
// <alpha, a_iso(theta)> vol = alpha ^ theta for every covector alpha.
PolyVectorField a_iso(const Form& theta, const SymplecticContext& ctx);

// Radial (Poincare) homotopy operator: for closed a of degree k >= 1
// returns h with ext_d(h) = a. Each monomial of total degree d in a
// degree-k term integrates with factor 1/(d+k). Throws unless a is closed.
Form homotopy_potential(const Form& a, const SymplecticContext& ctx);

// Unique beta with beta ^ Omega = theta, available while the Lefschetz map
// is injective (source degree <= n-1). Outside that range, or when theta is
// not a multiple of Omega, throws DomainError.
Form divide_by_omega(const Form& theta, const SymplecticContext& ctx);

// Hodge-Lepage decomposition of a degree-n form: w = w0 + w1 ^ Omega with
// w0 ^ Omega = 0. Exact and unique.
struct LepageParts {
    Form primitive;  // w0
    Form multiplier; // w1, degree n-2
};
LepageParts lepage_decompose(const Form& w, const SymplecticContext& ctx);

// Pullback along an invertible linear map: (F*a)(X_1..X_k) = a(F X_1,..,F X_k),
// with base variables substituted by the same map.
Form pullback_linear(const RatMat& F, const Form& a);

// Matrix of the linear map (. ^ beta) from degree `from_degree` forms,
// over the basis masks in increasing order. Used by the exact solvers.
RatMat matrix_of_wedge_with(const Form& beta, int from_degree,
                            std::vector<uint32_t>* src_masks = nullptr,
                            std::vector<uint32_t>* dst_masks = nullptr);

} // namespace mage
