#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace boxverify {

// Specification numerals are kept exact until they reach the sampling /
// inference boundary, where they are rounded once to binary64.
using Rational = boost::multiprecision::cpp_rational;

// Parses "[+-]digits[.digits][eE[+-]digits]" exactly. Throws SyntaxError on
// anything else.
Rational rational_from_decimal(std::string_view text);

// Nearest binary64 value.
double rational_to_double(const Rational& r);

// Exact decimal expansion. Defined only for denominators of the form 2^a*5^b,
// which covers everything the parser can produce (decimal literals are closed
// under +, -, *). Throws std::logic_error otherwise.
std::string rational_to_decimal(const Rational& r);

}  // namespace boxverify
