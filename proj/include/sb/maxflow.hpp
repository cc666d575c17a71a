#pragma once

#include <vector>

#include "sb/rational.hpp"

namespace sb {

// Dinic blocking-flow max-flow on exact integer capacities. Arcs are stored
// as paired forward/reverse entries; residual capacity of arc a is
// arcs_[a].cap, and flow is recovered from the reverse arc.
class MaxFlow {
 public:
  explicit MaxFlow(int n_vertices);

  int add_arc(int from, int to, BigInt capacity);  // returns the arc id
  BigInt solve(int source, int sink);

  int vertex_count() const { return static_cast<int>(adj_.size()); }

  // Vertices reachable from the source in the residual graph; the minimal
  // min-cut source side.
  std::vector<char> source_side() const;
  // Vertices that can reach the sink in the residual graph.
  std::vector<char> sink_side() const;

  struct Arc {
    int to;
    BigInt cap;  // residual
  };
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }

 private:
  bool bfs_levels();
  BigInt dfs_push(int v, BigInt limit);

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_, iter_;
  int source_ = -1, sink_ = -1;
};

}  // namespace sb
