#include "sb/hall.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sb/marginals.hpp"
#include "sb/sinkhorn.hpp"

namespace sb {

BipartiteGraph::BipartiteGraph(int n_left, int n_right, std::vector<std::pair<int, int>> edges)
    : adj_(n_left > 0 ? n_left : 0), n_right_(n_right) {
  if (n_left <= 0 || n_right <= 0)
    throw std::invalid_argument("graph sides must be nonempty");
  std::vector<char> right_seen(n_right, 0);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n_left || v < 0 || v >= n_right)
      throw std::invalid_argument("edge endpoint out of range");
    adj_[u].push_back(v);
    right_seen[v] = 1;
  }
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    n_edges_ += static_cast<int>(list.size());
  }
  for (int u = 0; u < n_left; ++u)
    if (adj_[u].empty())
      throw IsolatedVertexError("isolated left vertex " + std::to_string(u + 1));
  for (int v = 0; v < n_right; ++v)
    if (!right_seen[v])
      throw IsolatedVertexError("isolated right vertex " + std::to_string(v + 1));
}

NonnegMatrix matrix_of_graph(const BipartiteGraph& g) {
  std::vector<Triplet> entries;
  entries.reserve(g.n_edges());
  for (int u = 0; u < g.n_left(); ++u)
    for (int v : g.neighbors(u)) entries.push_back({u, v, 1.0});
  return NonnegMatrix(g.n_left(), g.n_right(), std::move(entries));
}

std::uint64_t iteration_budget(int n) {
  if (n < 2) throw std::invalid_argument("iteration_budget requires n >= 2");
  long double v = 64.0L;
  for (int i = 0; i < 7; ++i) v *= n;
  v *= std::log(static_cast<long double>(n));
  if (v >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max()))
    throw std::overflow_error("iteration budget exceeds 64 bits");
  return static_cast<std::uint64_t>(std::ceil(v));
}

int deficiency(const BipartiteGraph& g, std::span<const int> x) {
  std::vector<char> hit(g.n_right(), 0);
  int gamma = 0;
  for (int u : x)
    for (int v : g.neighbors(u))
      if (!hit[v]) {
        hit[v] = 1;
        ++gamma;
      }
  return static_cast<int>(x.size()) - gamma;
}

namespace {

std::vector<int> sorted_order(std::span<const double> p) {
  std::vector<int> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return p[a] < p[b]; });
  return order;
}

SortResult finish(const BipartiteGraph& g, const SinkhornState& state, std::uint64_t used,
                  std::string mode) {
  SortResult out;
  out.p_final = state.row_marginal();
  out.iterations_used = used;
  out.budget_mode = std::move(mode);
  std::vector<int> order = sorted_order(out.p_final);
  out.candidates.resize(g.n_left() + 1);
  for (int k = 1; k <= g.n_left(); ++k) {
    out.candidates[k] = out.candidates[k - 1];
    out.candidates[k].push_back(order[k - 1]);
    std::sort(out.candidates[k].begin(), out.candidates[k].end());
  }
  return out;
}

}  // namespace

SortResult sinkhorn_and_sort(const BipartiteGraph& g, std::uint64_t ell) {
  NonnegMatrix a = matrix_of_graph(g);
  MarginalPair mp = MarginalPair::uniform(g.n_left(), g.n_right());
  SinkhornState state = SinkhornState::init(a, mp);
  state.advance_by(ell);
  return finish(g, state, ell, "fixed");
}

SortResult sinkhorn_and_sort_auto(const BipartiteGraph& g, std::uint64_t hard_cap) {
  NonnegMatrix a = matrix_of_graph(g);
  MarginalPair mp = MarginalPair::uniform(g.n_left(), g.n_right());
  SinkhornState state = SinkhornState::init(a, mp);

  const std::uint64_t window = 2ull * g.n_total() * g.n_total();
  std::vector<int> last_order = sorted_order(state.row_marginal());
  std::uint64_t stable = 0, used = 0;
  while (used < hard_cap && stable < window) {
    state.advance();
    ++used;
    if (state.stationary()) break;
    std::vector<int> order = sorted_order(state.row_marginal());
    if (order == last_order) {
      ++stable;
    } else {
      stable = 0;
      last_order = std::move(order);
    }
  }
  return finish(g, state, used, "auto");
}

HallReport best_blocker(const BipartiteGraph& g, const SortResult& sorted) {
  if (sorted.candidates.empty())
    throw std::invalid_argument("best_blocker requires at least the empty candidate");
  HallReport rep;
  rep.candidates = sorted.candidates;
  rep.p_final = sorted.p_final;
  rep.iterations_used = sorted.iterations_used;
  rep.budget_mode = sorted.budget_mode;

  int best = std::numeric_limits<int>::min();
  std::size_t best_idx = 0;
  for (std::size_t k = 0; k < sorted.candidates.size(); ++k) {
    int d = deficiency(g, sorted.candidates[k]);
    if (d > best) {  // ties keep the smaller (earlier) set
      best = d;
      best_idx = k;
    }
  }
  rep.best_set = sorted.candidates[best_idx];
  rep.deficiency = best;
  rep.matching_number = g.n_left() - best;
  rep.has_perfect_matching = best <= 0 && g.n_left() == g.n_right();
  return rep;
}

}  // namespace sb
