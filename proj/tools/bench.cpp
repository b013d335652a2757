// Compares the serial reference kernels against the OpenMP versions on the
// heavy exact computations: the sp(n,R) operator assembly behind the a_k
// invariants and the polynomial matrix products behind q_w.

#include <chrono>
#include <cstdio>
#include <random>

#include "mage/invariants.hpp"
#include "mage/mae.hpp"
#include "mage/parallel.hpp"

using namespace mage;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

Form random_primitive_form(int n, std::mt19937_64& rng, const SymplecticContext& ctx) {
    std::uniform_int_distribution<int> coef(-4, 4);
    Form w = form_zero(n, n);
    for (uint32_t m = 0; m < (1u << (2 * n)); ++m) {
        if (__builtin_popcount(m) != n) continue;
        int c = coef(rng);
        if (c == 0) continue;
        form_add_term(w, m, Poly::constant(2 * n, Rational(c)));
    }
    return lepage_decompose(w, ctx).primitive;
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());
    std::mt19937_64 rng(20240901);

    for (int n : {2, 4}) {
        SymplecticContext ctx = SymplecticContext::make(n);
        Form w = random_primitive_form(n, rng, ctx);
        auto t0 = std::chrono::steady_clock::now();
        RatMat serial = ad2_matrix_serial(w, ctx);
        auto t1 = std::chrono::steady_clock::now();
        RatMat parallel = ad2_matrix(w, ctx);
        auto t2 = std::chrono::steady_clock::now();
        if (!(serial == parallel)) {
            std::printf("ad2_matrix mismatch at n=%d!\n", n);
            return 1;
        }
        std::printf("ad2_matrix   n=%d (%2dx%2d): serial %.3fs  omp %.3fs  speedup %.2fx\n",
                    n, serial.rows(), serial.cols(), seconds(t0, t1), seconds(t1, t2),
                    seconds(t0, t1) / seconds(t1, t2));
    }

    {
        // q_invariant-sized polynomial matrix product: 8x8, quadratic entries
        int n = 4;
        SymplecticContext ctx = SymplecticContext::make(n);
        Form w = random_primitive_form(n, rng, ctx);
        QInvariant q = q_invariant(w, ctx); // warms the path end to end
        (void)q;
        PolyMat M(8, 8, 8);
        std::uniform_int_distribution<int> coef(-3, 3);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                Poly p(8);
                for (int a = 0; a < 8; ++a)
                    for (int b = a; b < 8; ++b) {
                        Mono m(8, 0);
                        m[a] += 1;
                        m[b] += 1;
                        p.add_term(m, Rational(coef(rng)));
                    }
                M.at(i, j) = p;
            }
        auto t0 = std::chrono::steady_clock::now();
        PolyMat s = polymat_mul_serial(M, M);
        auto t1 = std::chrono::steady_clock::now();
        PolyMat p = polymat_mul(M, M);
        auto t2 = std::chrono::steady_clock::now();
        if (!(s == p)) {
            std::printf("polymat_mul mismatch!\n");
            return 1;
        }
        std::printf("polymat_mul  8x8 quadratic:  serial %.3fs  omp %.3fs  speedup %.2fx\n",
                    seconds(t0, t1), seconds(t1, t2), seconds(t0, t1) / seconds(t1, t2));
    }
    return 0;
}
