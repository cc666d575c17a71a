#include "sb/marginals.hpp"

#include <stdexcept>

namespace sb {

MarginalPair::MarginalPair(std::vector<Rational> r, std::vector<Rational> c)
    : r_(std::move(r)), c_(std::move(c)) {
  if (r_.empty() || c_.empty()) throw std::invalid_argument("marginals must be nonempty");
  total_r_ = 0;
  for (const Rational& v : r_) {
    if (v <= 0) throw std::invalid_argument("row marginals must be strictly positive");
    total_r_ += v;
  }
  total_c_ = 0;
  for (const Rational& v : c_) {
    if (v <= 0) throw std::invalid_argument("column marginals must be strictly positive");
    total_c_ += v;
  }
  r_d_ = to_doubles(r_);
  c_d_ = to_doubles(c_);
  total_r_double_ = to_double(total_r_);
  total_c_double_ = to_double(total_c_);
}

MarginalPair MarginalPair::uniform(int n, int m) {
  return MarginalPair(std::vector<Rational>(n, Rational(1)), std::vector<Rational>(m, Rational(1)));
}

}  // namespace sb
