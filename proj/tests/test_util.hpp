#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sb/hall.hpp"
#include "sb/marginals.hpp"
#include "sb/matrix.hpp"

namespace sbt {

// Fixtures used throughout the suite.

// [[1,0,0],[1,0,0],[1,1,1]]: rows 1,2 compete for column 1.
inline sb::NonnegMatrix hall3() {
  return sb::NonnegMatrix::from_dense({{1, 0, 0}, {1, 0, 0}, {1, 1, 1}});
}

inline sb::BipartiteGraph hall3_graph() {
  return sb::BipartiteGraph(3, 3, {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}});
}

// Upper triangular 2×2: approximately but not exactly scalable.
inline sb::NonnegMatrix e2() { return sb::NonnegMatrix::from_dense({{1, 1}, {0, 1}}); }

inline sb::NonnegMatrix ones2() { return sb::NonnegMatrix::from_dense({{1, 1}, {1, 1}}); }

// 0/1 support patterns without zero rows or columns, encoded as bitmasks of
// length n1*n2 (row-major).
inline bool valid_pattern(std::uint32_t bits, int n1, int n2) {
  for (int i = 0; i < n1; ++i) {
    std::uint32_t row = (bits >> (i * n2)) & ((1u << n2) - 1);
    if (row == 0) return false;
  }
  for (int j = 0; j < n2; ++j) {
    bool hit = false;
    for (int i = 0; i < n1; ++i) hit |= bits >> (i * n2 + j) & 1;
    if (!hit) return false;
  }
  return true;
}

inline sb::NonnegMatrix pattern_matrix(std::uint32_t bits, int n1, int n2) {
  std::vector<sb::Triplet> entries;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (bits >> (i * n2 + j) & 1) entries.push_back({i, j, 1.0});
  return sb::NonnegMatrix(n1, n2, std::move(entries));
}

inline sb::BipartiteGraph pattern_graph(std::uint32_t bits, int n1, int n2) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (bits >> (i * n2 + j) & 1) edges.push_back({i, j});
  return sb::BipartiteGraph(n1, n2, std::move(edges));
}

inline std::vector<std::uint32_t> all_patterns(int n1, int n2) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t bits = 0; bits < (1u << (n1 * n2)); ++bits)
    if (valid_pattern(bits, n1, n2)) out.push_back(bits);
  return out;
}

// Random support pattern without zero rows/columns.
inline std::uint32_t random_pattern(std::mt19937_64& rng, int n1, int n2, double density = 0.5) {
  std::bernoulli_distribution bit(density);
  while (true) {
    std::uint32_t bits = 0;
    for (int b = 0; b < n1 * n2; ++b)
      if (bit(rng)) bits |= 1u << b;
    if (valid_pattern(bits, n1, n2)) return bits;
  }
}

// Random positive matrix on a random support.
inline sb::NonnegMatrix random_matrix(std::mt19937_64& rng, int n1, int n2,
                                      double density = 0.55) {
  std::uint32_t bits = random_pattern(rng, n1, n2, density);
  std::uniform_real_distribution<double> val(0.2, 3.0);
  std::vector<sb::Triplet> entries;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (bits >> (i * n2 + j) & 1) entries.push_back({i, j, val(rng)});
  return sb::NonnegMatrix(n1, n2, std::move(entries));
}

// Random marginals with small exact denominators (quarters in [1/2, 3].)
inline sb::MarginalPair random_marginals(std::mt19937_64& rng, int n, int m) {
  std::uniform_int_distribution<int> quarters(2, 12);
  std::vector<sb::Rational> r(n), c(m);
  for (auto& v : r) v = sb::Rational(quarters(rng), 4);
  for (auto& v : c) v = sb::Rational(quarters(rng), 4);
  return sb::MarginalPair(std::move(r), std::move(c));
}

// Random element of ℛ (row sums exactly r) with the full support of A.
inline sb::NonnegMatrix random_in_rows(std::mt19937_64& rng, const sb::NonnegMatrix& a,
                                       std::span<const double> r) {
  std::uniform_real_distribution<double> val(0.1, 1.0);
  std::vector<sb::Triplet> entries;
  for (int i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(i);
    std::vector<double> w(cols.size());
    double sum = 0.0;
    for (auto& x : w) sum += (x = val(rng));
    for (std::size_t e = 0; e < cols.size(); ++e)
      entries.push_back({i, cols[e], w[e] * r[i] / sum});
  }
  return sb::NonnegMatrix(a.n_rows(), a.n_cols(), std::move(entries));
}

// Random element of 𝒞 (column sums exactly c) with the full support of A.
inline sb::NonnegMatrix random_in_cols(std::mt19937_64& rng, const sb::NonnegMatrix& a,
                                       std::span<const double> c) {
  std::uniform_real_distribution<double> val(0.1, 1.0);
  std::vector<sb::Triplet> entries;
  for (int j = 0; j < a.n_cols(); ++j) {
    auto eids = a.col_entries(j);
    std::vector<double> w(eids.size());
    double sum = 0.0;
    for (auto& x : w) sum += (x = val(rng));
    for (std::size_t e = 0; e < eids.size(); ++e)
      entries.push_back({a.entry_row(eids[e]), j, w[e] * c[j] / sum});
  }
  return sb::NonnegMatrix(a.n_rows(), a.n_cols(), std::move(entries));
}

}  // namespace sbt
