#include "mage/rational.hpp"

#include <ostream>

namespace mage {

Rational Rational::from_string(const std::string& s) {
    mpq_class v;
    if (s.empty() || v.set_str(s, 10) != 0)
        throw ParseError("malformed rational '" + s + "'", 1, 1);
    if (v.get_den() == 0) throw DomainError("rational with zero denominator");
    v.canonicalize();
    return Rational(v);
}

Rational Rational::pow(unsigned long k) const {
    mpq_class r(1);
    mpq_class base = v_;
    while (k > 0) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return Rational(r);
}

bool Rational::perfect_square(Rational* root) const {
    if (sign() < 0) return false;
    mpz_class num = v_.get_num();
    mpz_class den = v_.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return false;
    if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
    if (root) {
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        *root = Rational(mpq_class(rn, rd));
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

} // namespace mage
