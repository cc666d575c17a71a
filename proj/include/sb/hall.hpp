#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sb/matrix.hpp"

namespace sb {

struct IsolatedVertexError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bipartite graph on left vertices U = {0..n1-1} and right vertices
// V = {0..n2-1}. Isolated vertices are rejected.
class BipartiteGraph {
 public:
  BipartiteGraph(int n_left, int n_right, std::vector<std::pair<int, int>> edges);

  int n_left() const { return static_cast<int>(adj_.size()); }
  int n_right() const { return n_right_; }
  int n_total() const { return n_left() + n_right_; }
  int n_edges() const { return n_edges_; }

  // Neighbors of left vertex u, ascending.
  const std::vector<int>& neighbors(int u) const { return adj_[u]; }

 private:
  std::vector<std::vector<int>> adj_;
  int n_right_ = 0;
  int n_edges_ = 0;
};

// 0/1 adjacency matrix A_G with rows U and columns V.
NonnegMatrix matrix_of_graph(const BipartiteGraph& g);

// ⌈64·n⁷·ln n⌉, the iteration count that guarantees a maximum-deficiency
// prefix. Throws for n < 2 or when the count overflows 64 bits.
std::uint64_t iteration_budget(int n);

// |X| − |Γ(X)|, computed exactly from the adjacency.
int deficiency(const BipartiteGraph& g, std::span<const int> x);

struct SortResult {
  std::vector<std::vector<int>> candidates;  // U_0 ⊂ U_1 ⊂ … ⊂ U_{n1}
  std::vector<double> p_final;               // row marginal after the run
  std::uint64_t iterations_used = 0;
  std::string budget_mode;                   // "fixed", "theorem" or "auto"
};

// Runs the uniform-marginal iteration from N_0 = C(A_G) for ell steps, then
// sorts p = A·1 ascending (ties by original index) and returns all prefix
// sets of the sorted order.
SortResult sinkhorn_and_sort(const BipartiteGraph& g, std::uint64_t ell);

// Practical variant: stops once the sorted permutation of p has been stable
// for 2n² consecutive iterations (with a hard cap to guarantee
// termination). Candidates are verified exactly afterwards either way.
SortResult sinkhorn_and_sort_auto(const BipartiteGraph& g, std::uint64_t hard_cap = 10'000'000);

struct HallReport {
  std::vector<std::vector<int>> candidates;
  std::vector<int> best_set;        // argmax of |X| − |Γ(X)| over candidates
  int deficiency = 0;               // recomputed exactly
  int matching_number = 0;          // n1 − deficiency (König–Egerváry)
  bool has_perfect_matching = false;
  std::uint64_t iterations_used = 0;
  std::vector<double> p_final;
  std::string budget_mode;
};

// Evaluates every candidate exactly; ties resolve to the smaller set. The
// reported deficiency is sound for any iteration count.
HallReport best_blocker(const BipartiteGraph& g, const SortResult& sorted);

}  // namespace sb
