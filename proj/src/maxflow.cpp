#include "sb/maxflow.hpp"

#include <algorithm>
#include <queue>

namespace sb {

MaxFlow::MaxFlow(int n_vertices) : adj_(n_vertices) {}

int MaxFlow::add_arc(int from, int to, BigInt capacity) {
  int id = static_cast<int>(arcs_.size());
  arcs_.push_back({to, std::move(capacity)});
  arcs_.push_back({from, 0});
  adj_[from].push_back(id);
  adj_[to].push_back(id + 1);
  return id;
}

bool MaxFlow::bfs_levels() {
  level_.assign(adj_.size(), -1);
  std::queue<int> q;
  level_[source_] = 0;
  q.push(source_);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int a : adj_[v])
      if (arcs_[a].cap > 0 && level_[arcs_[a].to] < 0) {
        level_[arcs_[a].to] = level_[v] + 1;
        q.push(arcs_[a].to);
      }
  }
  return level_[sink_] >= 0;
}

BigInt MaxFlow::dfs_push(int v, BigInt limit) {
  if (v == sink_) return limit;
  BigInt pushed = 0;
  for (int& idx = iter_[v]; idx < static_cast<int>(adj_[v].size()); ++idx) {
    int a = adj_[v][idx];
    Arc& arc = arcs_[a];
    if (arc.cap > 0 && level_[arc.to] == level_[v] + 1) {
      BigInt room = limit - pushed;
      BigInt got = dfs_push(arc.to, room < arc.cap ? room : arc.cap);
      if (got > 0) {
        arc.cap -= got;
        arcs_[a ^ 1].cap += got;
        pushed += got;
        if (pushed == limit) return pushed;
      } else {
        level_[arc.to] = -1;
      }
    }
  }
  return pushed;
}

BigInt MaxFlow::solve(int source, int sink) {
  source_ = source;
  sink_ = sink;
  BigInt total = 0;
  BigInt cap_bound = 0;
  for (int a : adj_[source]) cap_bound += arcs_[a].cap;
  while (bfs_levels()) {
    iter_.assign(adj_.size(), 0);
    total += dfs_push(source, cap_bound);
  }
  return total;
}

std::vector<char> MaxFlow::source_side() const {
  std::vector<char> seen(adj_.size(), 0);
  std::queue<int> q;
  seen[source_] = 1;
  q.push(source_);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int a : adj_[v])
      if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
        seen[arcs_[a].to] = 1;
        q.push(arcs_[a].to);
      }
  }
  return seen;
}

std::vector<char> MaxFlow::sink_side() const {
  // Walk residual arcs backwards from the sink. For a ∈ adj_[v] with other
  // endpoint u = arcs_[a].to, the residual arc u → v is a ^ 1.
  std::vector<char> seen(adj_.size(), 0);
  std::queue<int> q;
  seen[sink_] = 1;
  q.push(sink_);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int a : adj_[v]) {
      int u = arcs_[a].to;
      if (arcs_[a ^ 1].cap > 0 && !seen[u]) {
        seen[u] = 1;
        q.push(u);
      }
    }
  }
  return seen;
}

}  // namespace sb
