#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& q);

// Accepts "7", "3/4", "1.25" and signed variants. Decimals are converted
// exactly (no binary rounding). Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& q);

// Smallest D > 0 such that q*D is an integer for every q in the span.
BigInt common_denominator(std::span<const Rational> values);

// q*d as an exact integer; d must clear q's denominator.
BigInt scaled_integer(const Rational& q, const BigInt& d);

std::vector<double> to_doubles(std::span<const Rational> values);

}  // namespace sb
