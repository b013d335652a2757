#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mage/invariants.hpp"

namespace mage {

// Scalar form of a Monge-Ampere operator: a polynomial in the base
// variables q_1..q_n, the first-jet variables u_1..u_n and the Hessian
// entries u_ij (i <= j). Variable layout:
//   [0, n)              q_i
//   [n, 2n)             u_i
//   [2n, 2n + n(n+1)/2) u_ij, pairs (i,j), i <= j, enumerated row by row.
// Monge-Ampere type means: a linear combination of minors (all orders) of
// the symmetric matrix (u_ij) with coefficients in (q, u) only; this is
// checked on construction.
struct HessSymbol {
    int n = 0;
    Poly poly;

    static HessSymbol make(int n, const Poly& p); // validates MA type
    friend bool operator==(const HessSymbol& a, const HessSymbol& b) {
        return a.n == b.n && a.poly == b.poly;
    }
};

int hess_nvars(int n);
int hess_q_var(int n, int i);            // 0-based i
int hess_u_var(int n, int i);
int hess_uij_var(int n, int i, int j);   // 0-based, any order
std::function<std::string(int)> hess_namer(int n);

// Delta_w(f) = (df)^* w: substitute p_i -> df/dq_i, dp_i -> sum_j f_ij dq_j.
// f must depend on the q variables only. Returns a multiple of dq_1^..^dq_n.
Form mae_apply(const Form& w, const Poly& f, const SymplecticContext& ctx);

// Same substitution with formal jet variables.
HessSymbol mae_symbol(const Form& w, const SymplecticContext& ctx);

// The unique primitive form with mae_symbol(result) = h.
Form form_from_symbol(const HessSymbol& h, const SymplecticContext& ctx);

struct DivergentReport {
    Form euler;          // E(w) = d (alpha), a 2-form
    bool is_divergent = false;
    Form alpha;          // dw = alpha ^ Omega
    std::optional<Poly> mu; // with d(w + mu Omega) = 0, when divergent
};
DivergentReport divergent_type(const Form& w, const SymplecticContext& ctx);

enum class PdeClass { Elliptic, Hyperbolic, Parabolic, Indefinite };
std::string pde_class_name(PdeClass c);

struct LinearizationResult {
    RatMat principal;                 // symmetric n x n
    std::vector<Rational> lower_order;
    PdeClass cls = PdeClass::Indefinite;
};

// Linearization D_phi(Delta_w) at the jet of phi over `point` (n rational
// coordinates); classification per the signature of the principal symbol.
LinearizationResult linearize(const Form& w, const Poly& phi,
                              const std::vector<Rational>& point,
                              const SymplecticContext& ctx);
PdeClass ellipticity_class(const Form& w, const Poly& phi,
                           const std::vector<Rational>& point,
                           const SymplecticContext& ctx);

// Principal symbol computed through the dual equation:
//   B = Delta_{w_hat}(phi) . (g_w|_{L_phi})^{-1},
// taking w_hat in its scale-free representative w(K_w .,.,.). Requires
// lambda != 0 at the evaluation point. Exactly proportional to
// linearize(...).principal; the measured constant is 1 (see the test
// fixtures).
RatMat linearize_via_dual(const Form& w, const Poly& phi,
                          const std::vector<Rational>& point,
                          const SymplecticContext& ctx);

struct Report4D {
    std::vector<Rational> a;   // a_1..a_4 over sp(4,R)
    QuarticInvariant q;
    std::optional<std::pair<Poly, int>> square_root;
};

struct ClassifyResult {
    int n = 0;
    std::vector<std::string> warnings;
    // n = 2
    Rational pfaffian;
    std::string orbit2; // Laplace / Wave / Degenerate
    // n = 3
    int orbit3 = 0;     // table row 1..8; 0 = unclassified
    Rational lambda;
    SignatureResult signature;
    // n = 2 and 3
    std::string normal_form;
    // n = 4
    Report4D report4d;
};
ClassifyResult classify(const Form& w, const SymplecticContext& ctx);

struct GeneratingReport {
    bool is_generating = false;
    std::optional<Poly> conjugate; // g with d(alpha) = f w + g Omega
    std::optional<Form> potential; // alpha
};
// f may depend on both q and p. Requires closed w (see divergent_type).
GeneratingReport generating_check(const Form& w, const Poly& f,
                                  const SymplecticContext& ctx);

} // namespace mage
