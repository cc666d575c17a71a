#include "sb/rational.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cctype>
#include <stdexcept>

namespace sb {

double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace {

BigInt parse_digits(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty digit string");
  BigInt v = 0;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw std::invalid_argument("expected digits, got '" + std::string(s) + "'");
    v = v * 10 + (ch - '0');
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("empty number '" + std::string(text) + "'");

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_digits(s.substr(0, slash));
    BigInt den = parse_digits(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rational(num, den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty())
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    BigInt num = ip.empty() ? BigInt(0) : parse_digits(ip);
    BigInt den = 1;
    for (char ch : fp) {
      if (!std::isdigit(static_cast<unsigned char>(ch)))
        throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
      num = num * 10 + (ch - '0');
      den *= 10;
    }
    value = Rational(num, den);
  } else {
    value = Rational(parse_digits(s));
  }
  return negative ? -value : value;
}

std::string to_string(const Rational& q) { return q.str(); }

BigInt common_denominator(std::span<const Rational> values) {
  BigInt d = 1;
  for (const Rational& q : values) d = boost::multiprecision::lcm(d, denominator(q));
  return d;
}

BigInt scaled_integer(const Rational& q, const BigInt& d) {
  Rational scaled = q * Rational(d);
  if (denominator(scaled) != 1) throw std::invalid_argument("denominator not cleared");
  return numerator(scaled);
}

std::vector<double> to_doubles(std::span<const Rational> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const Rational& q : values) out.push_back(to_double(q));
  return out;
}

}  // namespace sb
