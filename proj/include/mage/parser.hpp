#pragma once

#include <string>
#include <vector>

#include "mage/form.hpp"

namespace mage {

// Grammar (whitespace insignificant):
//   form    := term (('+'|'-') term)* ;
//   term    := [poly '*'] wedge | poly ;
//   wedge   := cov ('^' cov)* ;
//   cov     := ('dq'|'dp') INT ;
//   poly    := arithmetic over INT rationals ('/'), variables qINT | pINT,
//              operators + - * ^ (positive integer powers), parentheses ;
// All terms of a form must share one degree. Errors carry line/column.
Form parse_form(const std::string& src, int n);

// Standalone polynomial in q_1..q_n, p_1..p_n.
Poly parse_poly(const std::string& src, int n);

// Comma-separated exact rationals, e.g. "1/2,-3,0".
std::vector<Rational> parse_point(const std::string& src);

} // namespace mage
