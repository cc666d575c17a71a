#include "sb/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sb/sum.hpp"

namespace sb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double kl_vec(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_vec: length mismatch");
  NeumaierSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;       // 0 log 0/x = 0
    if (q[i] == 0.0) return kInf;    // x log x/0 = inf
    acc.add(p[i] * std::log(p[i] / q[i]));
  }
  return acc.value();
}

double kl_matrix(const NonnegMatrix& m, const NonnegMatrix& n) {
  if (m.n_rows() != n.n_rows() || m.n_cols() != n.n_cols())
    throw std::invalid_argument("kl_matrix: dimension mismatch");
  NeumaierSum acc;
  for (int i = 0; i < m.n_rows(); ++i) {
    auto cols = m.row_cols(i);
    auto vals = m.row_vals(i);
    for (std::size_t e = 0; e < cols.size(); ++e) {
      double denom = n.at(i, cols[e]);
      if (denom == 0.0) return kInf;
      acc.add(vals[e] * std::log(vals[e] / denom));
    }
  }
  return acc.value();
}

double pinsker_gap(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("pinsker_gap: length mismatch");
  NeumaierSum ps, qs, l1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ps.add(p[i]);
    qs.add(q[i]);
    l1.add(std::abs(p[i] - q[i]));
  }
  double total = ps.value();
  if (std::abs(total - qs.value()) > 1e-9 * std::max(std::abs(total), std::abs(qs.value())))
    throw std::invalid_argument("pinsker_gap: totals differ");
  double d = kl_vec(p, q);
  double norm = l1.value();
  return d - norm * norm / (2.0 * total);
}

}  // namespace sb
