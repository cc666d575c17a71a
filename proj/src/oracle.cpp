#include "sb/oracle.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace sb::oracle {

std::vector<StableSet> enumerate_stable(const NonnegMatrix& a) {
  const int n = a.n_rows(), m = a.n_cols();
  if (n > 20) throw std::invalid_argument("enumerate_stable: too many rows");
  if (m > 64) throw std::invalid_argument("enumerate_stable: too many columns");

  std::vector<std::uint64_t> row_mask(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j : a.row_cols(i)) row_mask[i] |= 1ull << j;
  const std::uint64_t all_cols = m == 64 ? ~0ull : (1ull << m) - 1;

  std::vector<StableSet> out;
  out.reserve(std::size_t(1) << n);
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    std::uint64_t gamma = 0;
    StableSet s;
    for (int i = 0; i < n; ++i)
      if (x >> i & 1) {
        gamma |= row_mask[i];
        s.rows.push_back(i);
      }
    std::uint64_t y = all_cols & ~gamma;
    for (int j = 0; j < m; ++j)
      if (y >> j & 1) s.cols.push_back(j);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<HullPoint> stable_points(const NonnegMatrix& a, const MarginalPair& mp) {
  std::vector<HullPoint> pts;
  for (StableSet& s : enumerate_stable(a)) {
    Rational x = 0, y = 0;
    for (int i : s.rows) x += mp.r()[i];
    for (int j : s.cols) y += mp.c()[j];
    pts.push_back({std::move(x), std::move(y), std::move(s)});
  }
  pts.push_back({Rational(0), Rational(0), StableSet{}});
  return pts;
}

std::vector<HullPoint> hull_extremes(std::vector<HullPoint> points) {
  if (points.empty()) throw std::invalid_argument("hull_extremes: no points");
  // Keep the highest point of every abscissa, then sweep by decreasing x,
  // popping non-left turns. cross > 0 is a left turn walking (R,0) → (0,C).
  std::sort(points.begin(), points.end(), [](const HullPoint& a, const HullPoint& b) {
    return a.x != b.x ? a.x > b.x : a.y > b.y;
  });
  std::vector<HullPoint> top;
  for (HullPoint& p : points)
    if (top.empty() || top.back().x != p.x) top.push_back(std::move(p));

  std::vector<HullPoint> chain;
  for (HullPoint& p : top) {
    while (chain.size() >= 2) {
      const HullPoint& b = chain[chain.size() - 1];
      const HullPoint& a = chain[chain.size() - 2];
      Rational cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (cross <= 0)
        chain.pop_back();
      else
        break;
    }
    chain.push_back(std::move(p));
  }
  return chain;
}

DeficiencyResult max_deficiency_exhaustive(const BipartiteGraph& g) {
  const int n1 = g.n_left();
  if (n1 > 20) throw std::invalid_argument("max_deficiency_exhaustive: too many left vertices");
  if (g.n_right() > 64)
    throw std::invalid_argument("max_deficiency_exhaustive: too many right vertices");

  std::vector<std::uint64_t> mask(n1, 0);
  for (int u = 0; u < n1; ++u)
    for (int v : g.neighbors(u)) mask[u] |= 1ull << v;

  auto to_set = [&](std::uint32_t bits) {
    std::vector<int> s;
    for (int u = 0; u < n1; ++u)
      if (bits >> u & 1) s.push_back(u);
    return s;
  };

  DeficiencyResult best{{}, 0};  // X = ∅ scores 0
  for (std::uint32_t bits = 1; bits < (1u << n1); ++bits) {
    std::uint64_t gamma = 0;
    for (int u = 0; u < n1; ++u)
      if (bits >> u & 1) gamma |= mask[u];
    int d = std::popcount(bits) - std::popcount(gamma);
    if (d > best.value) {
      best = {to_set(bits), d};
    } else if (d == best.value) {
      std::vector<int> s = to_set(bits);
      if (std::lexicographical_compare(s.begin(), s.end(), best.set.begin(), best.set.end()))
        best.set = std::move(s);
    }
  }
  return best;
}

DenseRun dense_sinkhorn(
    const NonnegMatrix& a, const MarginalPair& mp, std::uint64_t steps,
    const std::function<void(std::uint64_t, const std::vector<std::vector<double>>&)>& observer) {
  if (a.n_rows() > 50 || a.n_cols() > 50)
    throw std::invalid_argument("dense_sinkhorn: matrix too large");
  if (steps > 10'000'000) throw std::invalid_argument("dense_sinkhorn: too many steps");
  if (a.n_rows() != mp.n() || a.n_cols() != mp.m())
    throw std::invalid_argument("dense_sinkhorn: dimension mismatch");

  const int n = a.n_rows(), m = a.n_cols();
  std::vector<std::vector<double>> w = a.dense();
  auto r = mp.r_d();
  auto c = mp.c_d();

  auto col_phase = [&] {
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[i][j];
      double g = c[j] / s;
      for (int i = 0; i < n; ++i) w[i][j] *= g;
    }
  };
  auto row_phase = [&] {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += w[i][j];
      double g = r[i] / s;
      for (int j = 0; j < m; ++j) w[i][j] *= g;
    }
  };

  col_phase();  // N_0 = C(A)
  if (observer) observer(0, w);
  for (std::uint64_t k = 1; k <= steps; ++k) {
    row_phase();
    col_phase();
    if (observer) observer(k, w);
  }

  bool underflow = false;
  for (int i = 0; i < n && !underflow; ++i)
    for (int j : a.row_cols(i))
      if (w[i][j] == 0.0) {
        underflow = true;
        break;
      }
  return {std::move(w), underflow};
}

bool verify_kkt(const NonnegMatrix& a, const MarginalPair& mp, const PrincipalPartition& pp) {
  // Gradient expansion: r_i/p*_i = R_κ/C_κ on I_κ, with strictly positive
  // slope gaps between consecutive blocks.
  for (int i = 0; i < mp.n(); ++i) {
    const PartitionBlock& blk = pp.blocks[pp.row_block[i]];
    if (mp.r()[i] / pp.p_star[i] != blk.row_sum / blk.col_sum) return false;
  }
  if (pp.blocks.front().row_sum <= 0 || pp.blocks.front().col_sum <= 0) return false;
  for (int k = 1; k < pp.theta; ++k)
    if (pp.blocks[k].row_sum / pp.blocks[k].col_sum <=
        pp.blocks[k - 1].row_sum / pp.blocks[k - 1].col_sum)
      return false;

  // Tight constraints p*(X_κ) = c(Γ(X_κ)), exactly.
  for (const StableSet& s : pp.extreme_sets) {
    Rational lhs = 0;
    for (int i : s.rows) lhs += pp.p_star[i];
    std::vector<char> hit(mp.m(), 0);
    for (int i : s.rows)
      for (int j : a.row_cols(i)) hit[j] = 1;
    Rational rhs = 0;
    for (int j = 0; j < mp.m(); ++j)
      if (hit[j]) rhs += mp.c()[j];
    if (lhs != rhs) return false;
  }

  Rational total = 0;
  for (const Rational& v : pp.p_star) total += v;
  return total == mp.total_c();
}

int maximum_matching(const BipartiteGraph& g) {
  std::vector<int> match_right(g.n_right(), -1);
  std::vector<char> visited;

  std::function<bool(int)> augment = [&](int u) -> bool {
    for (int v : g.neighbors(u)) {
      if (visited[v]) continue;
      visited[v] = 1;
      if (match_right[v] < 0 || augment(match_right[v])) {
        match_right[v] = u;
        return true;
      }
    }
    return false;
  };

  int size = 0;
  for (int u = 0; u < g.n_left(); ++u) {
    visited.assign(g.n_right(), 0);
    if (augment(u)) ++size;
  }
  return size;
}

}  // namespace sb::oracle
