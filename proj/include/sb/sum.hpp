#pragma once

#include <cmath>

namespace sb {

// Neumaier-compensated accumulator. Divergence sums are compared against
// monotonicity bounds at the 1e-12 level, which plain summation can miss.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }

  double value() const { return sum + comp; }
};

}  // namespace sb
