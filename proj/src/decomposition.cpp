#include "sb/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sb/sinkhorn.hpp"
#include "sb/sum.hpp"

namespace sb {

ScalingNetwork::ScalingNetwork(const NonnegMatrix& a, std::span<const Rational> p,
                               std::span<const Rational> c)
    : n_(a.n_rows()), m_(a.n_cols()), flow_(2 + a.n_rows() + a.n_cols()) {
  if (static_cast<int>(p.size()) != n_ || static_cast<int>(c.size()) != m_)
    throw std::invalid_argument("marginal lengths do not match the matrix");
  BigInt d = common_denominator(p);
  denom_ = boost::multiprecision::lcm(d, common_denominator(c));

  BigInt total = 0;
  std::vector<BigInt> pc(n_), cc(m_);
  for (int i = 0; i < n_; ++i) {
    pc[i] = scaled_integer(p[i], denom_);
    total += pc[i];
  }
  for (int j = 0; j < m_; ++j) {
    cc[j] = scaled_integer(c[j], denom_);
    total += cc[j];
  }
  BigInt inf_cap = total + 1;

  for (int i = 0; i < n_; ++i) flow_.add_arc(source(), row_vertex(i), pc[i]);
  for (int i = 0; i < n_; ++i)
    for (int j : a.row_cols(i)) flow_.add_arc(row_vertex(i), col_vertex(j), inf_cap);
  for (int j = 0; j < m_; ++j) flow_.add_arc(col_vertex(j), sink(), cc[j]);
}

BigInt ScalingNetwork::solve() {
  flow_value_ = flow_.solve(source(), sink());
  return flow_value_;
}

StableSet ScalingNetwork::cut_to_stable(const std::vector<char>& source_side) const {
  StableSet s;
  for (int i = 0; i < n_; ++i)
    if (source_side[row_vertex(i)]) s.rows.push_back(i);
  for (int j = 0; j < m_; ++j)
    if (!source_side[col_vertex(j)]) s.cols.push_back(j);
  return s;
}

StableSet ScalingNetwork::min_cut_stable_set() const {
  return cut_to_stable(flow_.source_side());
}

namespace {

// Iterative Tarjan over the residual graph (arcs with positive residual).
struct ResidualScc {
  const MaxFlow& flow;
  std::vector<int> comp, low, num, stack;
  std::vector<char> on_stack;
  int counter = 0, comp_count = 0;

  explicit ResidualScc(const MaxFlow& f) : flow(f) {
    int n = f.vertex_count();
    comp.assign(n, -1);
    low.assign(n, 0);
    num.assign(n, -1);
    on_stack.assign(n, 0);
    for (int v = 0; v < n; ++v)
      if (num[v] < 0) visit(v);
  }

  void visit(int root) {
    struct Frame {
      int v;
      std::size_t next_arc;
    };
    std::vector<Frame> frames{{root, 0}};
    while (!frames.empty()) {
      auto& [v, idx] = frames.back();
      if (idx == 0) {
        num[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      const auto& adj = flow.adjacency()[v];
      bool descended = false;
      while (idx < adj.size()) {
        int a = adj[idx++];
        if (flow.arcs()[a].cap <= 0) continue;
        int w = flow.arcs()[a].to;
        if (num[w] < 0) {
          frames.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], num[w]);
      }
      if (descended) continue;
      if (low[v] == num[v]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comp_count;
          if (w == v) break;
        }
        ++comp_count;
      }
      int finished = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[finished]);
    }
  }
};

}  // namespace

Condensation condense_residual(const ScalingNetwork& net) {
  const MaxFlow& f = net.flow();
  ResidualScc scc(f);
  Condensation cond;
  cond.count = scc.comp_count;
  cond.component = scc.comp;
  cond.members.assign(cond.count, {});
  for (int v = 0; v < f.vertex_count(); ++v) cond.members[cond.component[v]].push_back(v);
  for (auto& mem : cond.members) std::sort(mem.begin(), mem.end());

  std::vector<std::vector<int>> succ(cond.count);
  for (int v = 0; v < f.vertex_count(); ++v)
    for (int a : f.adjacency()[v])
      if (f.arcs()[a].cap > 0) {
        int cu = cond.component[v], cw = cond.component[f.arcs()[a].to];
        if (cu != cw) succ[cu].push_back(cw);
      }
  for (auto& list : succ) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  cond.successors = std::move(succ);

  std::vector<char> from_v = f.source_side();
  std::vector<char> to_v = f.sink_side();
  cond.from_source.assign(cond.count, 0);
  cond.to_sink.assign(cond.count, 0);
  for (int v = 0; v < f.vertex_count(); ++v) {
    if (from_v[v]) cond.from_source[cond.component[v]] = 1;
    if (to_v[v]) cond.to_sink[cond.component[v]] = 1;
  }
  return cond;
}

ScalabilityCheck approx_scalable(const NonnegMatrix& a, const MarginalPair& mp) {
  if (a.n_rows() != mp.n() || a.n_cols() != mp.m())
    throw std::invalid_argument("matrix and marginals have mismatched dimensions");
  if (mp.total_r() != mp.total_c()) return {false, std::nullopt};
  ScalingNetwork net(a, mp.r(), mp.c());
  BigInt flow = net.solve();
  BigInt want = scaled_integer(mp.total_c(), net.denominator());
  if (flow == want) return {true, std::nullopt};
  return {false, net.min_cut_stable_set()};
}

ParametricOptimum parametric_objective(const NonnegMatrix& a, const MarginalPair& mp,
                                       const Rational& lambda) {
  if (lambda < 0 || lambda > 1) throw std::invalid_argument("lambda must lie in [0,1]");
  std::vector<Rational> p(mp.n()), c(mp.m());
  const Rational one_minus = Rational(1) - lambda;
  for (int i = 0; i < mp.n(); ++i) p[i] = one_minus * mp.r()[i];
  for (int j = 0; j < mp.m(); ++j) c[j] = lambda * mp.c()[j];
  ScalingNetwork net(a, p, c);
  net.solve();
  ParametricOptimum out;
  out.value = one_minus * mp.total_r() + lambda * mp.total_c() - net.flow_value();
  out.maximizer = net.min_cut_stable_set();
  out.condensation = condense_residual(net);
  return out;
}

namespace {

struct HullVertex {
  Rational x, y;  // (r(X), c(Y))
  StableSet set;
};

HullVertex vertex_of(const MarginalPair& mp, StableSet s) {
  Rational x = 0, y = 0;
  for (int i : s.rows) x += mp.r()[i];
  for (int j : s.cols) y += mp.c()[j];
  return {std::move(x), std::move(y), std::move(s)};
}

// Breakpoint recursion: lo is optimal at lambda_lo, hi at lambda_hi with
// distinct hull points. Appends (λ_κ, next vertex) pairs in increasing λ.
void breakpoints(const NonnegMatrix& a, const MarginalPair& mp, const HullVertex& lo,
                 const HullVertex& hi, std::vector<Rational>& lambdas,
                 std::vector<HullVertex>& chain) {
  const Rational dx = lo.x - hi.x;
  const Rational dy = hi.y - lo.y;
  // dx, dy > 0: hull points strictly order by both coordinates.
  const Rational lambda = dx / (dx + dy);
  ParametricOptimum opt = parametric_objective(a, mp, lambda);
  const Rational line = (Rational(1) - lambda) * lo.x + lambda * lo.y;
  if (opt.value == line) {
    lambdas.push_back(lambda);
    chain.push_back(hi);
    return;
  }
  HullVertex mid = vertex_of(mp, std::move(opt.maximizer));
  breakpoints(a, mp, lo, mid, lambdas, chain);
  breakpoints(a, mp, mid, hi, lambdas, chain);
}

std::vector<int> set_difference_sorted(const std::vector<int>& big, const std::vector<int>& small) {
  std::vector<int> out;
  std::set_difference(big.begin(), big.end(), small.begin(), small.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace

PrincipalPartition principal_partition(const NonnegMatrix& a, const MarginalPair& mp) {
  if (a.n_rows() != mp.n() || a.n_cols() != mp.m())
    throw std::invalid_argument("matrix and marginals have mismatched dimensions");

  ParametricOptimum at0 = parametric_objective(a, mp, Rational(0));
  ParametricOptimum at1 = parametric_objective(a, mp, Rational(1));
  HullVertex first = vertex_of(mp, std::move(at0.maximizer));
  HullVertex last = vertex_of(mp, std::move(at1.maximizer));

  std::vector<Rational> lambdas;
  std::vector<HullVertex> chain{first};
  breakpoints(a, mp, first, last, lambdas, chain);

  PrincipalPartition pp{mp};
  pp.theta = static_cast<int>(lambdas.size());
  if (pp.theta < 1) throw std::logic_error("principal partition must have at least one block");

  for (auto& v : chain) pp.extreme_sets.push_back(std::move(v.set));
  pp.critical_lambdas = std::move(lambdas);

  pp.row_block.assign(mp.n(), -1);
  pp.col_block.assign(mp.m(), -1);
  for (int k = 1; k <= pp.theta; ++k) {
    PartitionBlock blk;
    blk.rows = set_difference_sorted(pp.extreme_sets[k - 1].rows, pp.extreme_sets[k].rows);
    blk.cols = set_difference_sorted(pp.extreme_sets[k].cols, pp.extreme_sets[k - 1].cols);
    if (blk.rows.empty() || blk.cols.empty())
      throw std::logic_error("empty principal partition block");
    blk.row_sum = 0;
    for (int i : blk.rows) {
      blk.row_sum += mp.r()[i];
      pp.row_block[i] = k - 1;
    }
    blk.col_sum = 0;
    for (int j : blk.cols) {
      blk.col_sum += mp.c()[j];
      pp.col_block[j] = k - 1;
    }
    pp.blocks.push_back(std::move(blk));
  }
  for (int i = 0; i < mp.n(); ++i)
    if (pp.row_block[i] < 0) throw std::logic_error("row not covered by partition blocks");
  for (int j = 0; j < mp.m(); ++j)
    if (pp.col_block[j] < 0) throw std::logic_error("column not covered by partition blocks");

  // Slope monotonicity R_1/C_1 < … < R_θ/C_θ, exact.
  for (int k = 1; k < pp.theta; ++k)
    if (pp.blocks[k - 1].row_sum * pp.blocks[k].col_sum >=
        pp.blocks[k].row_sum * pp.blocks[k - 1].col_sum)
      throw std::logic_error("partition slopes are not strictly increasing");

  pp.p_star.resize(mp.n());
  for (int i = 0; i < mp.n(); ++i) {
    const PartitionBlock& blk = pp.blocks[pp.row_block[i]];
    pp.p_star[i] = blk.col_sum / blk.row_sum * mp.r()[i];
  }
  pp.p_star_d = to_doubles(pp.p_star);
  return pp;
}

double limit_divergence(const PrincipalPartition& pp) {
  NeumaierSum acc;
  for (const PartitionBlock& blk : pp.blocks)
    acc.add(to_double(blk.row_sum) * std::log(to_double(blk.row_sum / blk.col_sum)));
  return acc.value();
}

RefinedDecomposition refined_chain(const NonnegMatrix& a, const MarginalPair& mp,
                                   const PrincipalPartition& pp) {
  RefinedDecomposition rd{pp, {}, {}};
  for (int k = 1; k <= pp.theta; ++k) {
    ParametricOptimum opt = parametric_objective(a, mp, pp.critical_lambdas[k - 1]);
    const Condensation& cond = opt.condensation;

    // The lattice extremes at λ_κ must be the adjacent extreme stable sets.
    if (opt.maximizer != pp.extreme_sets[k])
      throw std::logic_error("lattice minimum does not match the extreme chain");

    // Current cut: the maximal source side. Free components (neither
    // reachable from s nor reaching t) are removed one at a time; a
    // component is removable when no remaining member of the cut has an arc
    // into it. That walks a maximal chain of min cuts from X_{κ-1} ⊔ Y_{κ-1}
    // down to X_κ ⊔ Y_κ.
    std::vector<char> free_comp(cond.count, 0);
    std::vector<int> key(cond.count, 0);
    for (int c = 0; c < cond.count; ++c) {
      free_comp[c] = !cond.from_source[c] && !cond.to_sink[c];
      key[c] = cond.members[c].front();
    }
    std::vector<int> pred_in_cut(cond.count, 0);
    for (int c = 0; c < cond.count; ++c)
      if (!cond.to_sink[c])
        for (int d : cond.successors[c])
          if (free_comp[d]) ++pred_in_cut[d];

    std::vector<int> removable;
    for (int c = 0; c < cond.count; ++c)
      if (free_comp[c] && pred_in_cut[c] == 0) removable.push_back(c);

    std::vector<StableSet> chain;
    std::vector<FineBlock> fine;
    std::vector<char> removed(cond.count, 0);

    auto current_stable = [&]() {
      StableSet s;
      for (int i = 0; i < a.n_rows(); ++i) {
        int c = cond.component[1 + i];
        if (!cond.to_sink[c] && !removed[c]) s.rows.push_back(i);
      }
      for (int j = 0; j < a.n_cols(); ++j) {
        int c = cond.component[1 + a.n_rows() + j];
        if (cond.to_sink[c] || removed[c]) s.cols.push_back(j);
      }
      return s;
    };

    chain.push_back(current_stable());
    if (chain.front() != pp.extreme_sets[k - 1])
      throw std::logic_error("lattice maximum does not match the extreme chain");

    while (!removable.empty()) {
      auto it = std::min_element(removable.begin(), removable.end(),
                                 [&](int x, int y) { return key[x] < key[y]; });
      int c = *it;
      removable.erase(it);
      removed[c] = 1;

      FineBlock fb;
      for (int v : cond.members[c]) {
        if (v >= 1 && v <= a.n_rows())
          fb.rows.push_back(v - 1);
        else if (v > a.n_rows() && v < 1 + a.n_rows() + a.n_cols())
          fb.cols.push_back(v - 1 - a.n_rows());
      }
      if (fb.rows.empty() || fb.cols.empty())
        throw std::logic_error("residual component must span rows and columns");
      fine.push_back(std::move(fb));
      chain.push_back(current_stable());

      for (int d : cond.successors[c])
        if (free_comp[d] && !removed[d] && --pred_in_cut[d] == 0) removable.push_back(d);
    }

    if (chain.back() != pp.extreme_sets[k])
      throw std::logic_error("chain did not terminate at the next extreme set");
    rd.chains.push_back(std::move(chain));
    rd.fine_blocks.push_back(std::move(fine));
  }
  return rd;
}

bool exact_scalable(const NonnegMatrix& a, const MarginalPair& mp) {
  ScalabilityCheck apx = approx_scalable(a, mp);
  if (!apx.scalable) return false;
  PrincipalPartition pp = principal_partition(a, mp);
  if (pp.theta != 1) throw std::logic_error("approximately scalable input must have one block");
  RefinedDecomposition rd = refined_chain(a, mp, pp);

  // Scalable iff the support is confined to the diagonal fine blocks.
  std::vector<int> row_fine(a.n_rows(), -1), col_fine(a.n_cols(), -2);
  for (std::size_t alpha = 0; alpha < rd.fine_blocks[0].size(); ++alpha) {
    for (int i : rd.fine_blocks[0][alpha].rows) row_fine[i] = static_cast<int>(alpha);
    for (int j : rd.fine_blocks[0][alpha].cols) col_fine[j] = static_cast<int>(alpha);
  }
  for (int i = 0; i < a.n_rows(); ++i)
    for (int j : a.row_cols(i))
      if (row_fine[i] != col_fine[j]) return false;
  return true;
}

SinkhornLimit sinkhorn_limit(const NonnegMatrix& a, const MarginalPair& mp,
                             const RefinedDecomposition& rd, std::uint64_t block_budget,
                             double block_tol) {
  const PrincipalPartition& pp = rd.partition;
  std::vector<Triplet> n_entries;

  for (int k = 1; k <= pp.theta; ++k) {
    const PartitionBlock& blk = pp.blocks[k - 1];
    const double c_block = to_double(blk.col_sum);
    for (const FineBlock& fb : rd.fine_blocks[k - 1]) {
      NonnegMatrix sub = a.submatrix(fb.rows, fb.cols);
      std::vector<Rational> rb, cb;
      rb.reserve(fb.rows.size());
      cb.reserve(fb.cols.size());
      for (int i : fb.rows) rb.push_back(mp.r()[i] / blk.row_sum);
      for (int j : fb.cols) cb.push_back(mp.c()[j] / blk.col_sum);
      MarginalPair sub_mp(std::move(rb), std::move(cb));

      SinkhornState state = SinkhornState::init(sub, sub_mp);
      auto error = [&]() {
        std::vector<double> p = state.row_marginal();
        double err = 0.0;
        for (int i = 0; i < sub_mp.n(); ++i)
          err = std::max(err, std::abs(p[i] - sub_mp.r_d()[i]));
        return err;
      };
      std::uint64_t used = 0;
      while (error() >= block_tol) {
        if (used >= block_budget || state.stationary())
          throw std::runtime_error("block scaling did not reach tolerance within budget");
        state.advance();
        ++used;
      }

      // B is the block's exact scaling; the global blocks are C_κ·B for N*.
      NonnegMatrix b = state.matrix();
      for (int bi = 0; bi < b.n_rows(); ++bi) {
        auto cols = b.row_cols(bi);
        auto vals = b.row_vals(bi);
        for (std::size_t e = 0; e < cols.size(); ++e)
          n_entries.push_back({fb.rows[bi], fb.cols[cols[e]], c_block * vals[e]});
      }
    }
  }

  NonnegMatrix n_star(a.n_rows(), a.n_cols(), std::move(n_entries));
  NonnegMatrix m_star = row_normalize(n_star, mp.r_d());  // M* = R(N*)
  return {std::move(m_star), std::move(n_star)};
}

OffDiagonalMass off_diagonal_mass(const NonnegMatrix& n, const PrincipalPartition& pp) {
  const MarginalPair& mp = pp.marginals;
  if (n.n_rows() != mp.n() || n.n_cols() != mp.m())
    throw std::invalid_argument("off_diagonal_mass: dimension mismatch");
  std::vector<double> cs = n.col_sums();
  for (int j = 0; j < mp.m(); ++j)
    if (std::abs(cs[j] - mp.c_d()[j]) > 1e-9 * mp.c_d()[j])
      throw std::invalid_argument("off_diagonal_mass: N violates its column marginals");

  const int theta = pp.theta;
  std::vector<std::vector<NeumaierSum>> acc(theta, std::vector<NeumaierSum>(theta));
  for (int i = 0; i < n.n_rows(); ++i) {
    int bk = pp.row_block[i];
    auto cols = n.row_cols(i);
    auto vals = n.row_vals(i);
    for (std::size_t e = 0; e < cols.size(); ++e) {
      int bl = pp.col_block[cols[e]];
      if (bk > bl)
        throw std::invalid_argument("off_diagonal_mass: support below the block diagonal");
      acc[bk][bl].add(vals[e]);
    }
  }

  OffDiagonalMass out;
  out.pair_mass.assign(theta, std::vector<double>(theta, 0.0));
  out.block_mass.assign(theta, 0.0);
  NeumaierSum total;
  for (int k = 0; k < theta; ++k)
    for (int l = k + 1; l < theta; ++l) {
      double d = acc[k][l].value();
      out.pair_mass[k][l] = d;
      out.block_mass[k] += d;
      out.block_mass[l] -= d;
      total.add(d);
    }
  out.total = total.value();

  std::vector<double> rs = n.row_sums();
  for (int k = 0; k < theta; ++k) {
    NeumaierSum p_block;
    for (int i : pp.blocks[k].rows) p_block.add(rs[i]);
    double want = to_double(pp.blocks[k].col_sum) + out.block_mass[k];
    if (std::abs(p_block.value() - want) > 1e-9 * std::max(1.0, std::abs(want)))
      throw std::invalid_argument("off_diagonal_mass: p(I_k) != C_k + Delta_k");
  }
  return out;
}

double lower_bound_certificate(const NonnegMatrix& n, const PrincipalPartition& pp) {
  OffDiagonalMass odm = off_diagonal_mass(n, pp);
  std::vector<double> p = n.row_sums();
  NeumaierSum rhs;
  for (int k = 0; k < pp.theta; ++k) {
    const PartitionBlock& blk = pp.blocks[k];
    const double rk = to_double(blk.row_sum);
    const double ck = to_double(blk.col_sum);
    const double shrink = ck / (ck + odm.block_mass[k]);
    NeumaierSum l1;
    for (int i : blk.rows) l1.add(std::abs(pp.p_star_d[i] - shrink * p[i]));
    const double norm = l1.value();
    rhs.add(rk / (2.0 * ck * ck) * norm * norm);
  }
  for (int k = 0; k < pp.theta; ++k)
    for (int l = k + 1; l < pp.theta; ++l) {
      const double slope_gap = to_double(pp.blocks[l].row_sum / pp.blocks[l].col_sum -
                                         pp.blocks[k].row_sum / pp.blocks[k].col_sum);
      rhs.add(slope_gap * odm.pair_mass[k][l]);
    }
  return rhs.value();
}

}  // namespace sb
