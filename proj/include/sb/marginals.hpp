#pragma once

#include <span>
#include <vector>

#include "sb/rational.hpp"

namespace sb {

// Target row/column marginals (r, c) with totals R, C. Components are exact
// rationals so that the flow decomposition can clear denominators; double
// views are cached for the iteration.
class MarginalPair {
 public:
  MarginalPair(std::vector<Rational> r, std::vector<Rational> c);

  static MarginalPair uniform(int n, int m);

  int n() const { return static_cast<int>(r_.size()); }
  int m() const { return static_cast<int>(c_.size()); }

  const std::vector<Rational>& r() const { return r_; }
  const std::vector<Rational>& c() const { return c_; }
  const Rational& total_r() const { return total_r_; }  // R
  const Rational& total_c() const { return total_c_; }  // C

  std::span<const double> r_d() const { return r_d_; }
  std::span<const double> c_d() const { return c_d_; }
  double total_r_d() const { return total_r_double_; }
  double total_c_d() const { return total_c_double_; }

 private:
  std::vector<Rational> r_, c_;
  Rational total_r_, total_c_;
  std::vector<double> r_d_, c_d_;
  double total_r_double_, total_c_double_;
};

}  // namespace sb
