#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sb/marginals.hpp"
#include "sb/matrix.hpp"
#include "sb/maxflow.hpp"

namespace sb {

// The scaling network G⃗(A, p, c): source → row i with capacity p_i, a
// support arc i → j of effectively infinite capacity per entry, column j →
// sink with capacity c_j. Rational capacities are cleared to exact integers
// by a common denominator; the "infinite" capacity is p-total + c-total + 1
// in cleared units, which no finite cut can use.
class ScalingNetwork {
 public:
  ScalingNetwork(const NonnegMatrix& a, std::span<const Rational> p,
                 std::span<const Rational> c);

  BigInt solve();  // max flow in cleared integer units

  const BigInt& denominator() const { return denom_; }
  const BigInt& flow_units() const { return flow_value_; }
  Rational flow_value() const { return Rational(flow_value_, denom_); }

  int source() const { return 0; }
  int sink() const { return 1 + n_ + m_; }
  int row_vertex(int i) const { return 1 + i; }
  int col_vertex(int j) const { return 1 + n_ + j; }

  // The stable set of the lattice-minimal min cut: vertices reachable from
  // s in the residual graph form the source side.
  StableSet min_cut_stable_set() const;

  const MaxFlow& flow() const { return flow_; }
  int n_rows() const { return n_; }
  int n_cols() const { return m_; }

 private:
  StableSet cut_to_stable(const std::vector<char>& source_side) const;

  int n_, m_;
  BigInt denom_;
  MaxFlow flow_;
  BigInt flow_value_ = -1;
};

// Strongly connected components of the residual graph of a solved network,
// with the reachability classification used for min-cut chains.
struct Condensation {
  int count = 0;
  std::vector<int> component;                 // vertex → scc
  std::vector<std::vector<int>> members;      // scc → vertices, ascending
  std::vector<std::vector<int>> successors;   // condensed DAG, deduplicated
  std::vector<char> from_source;              // scc reachable from s
  std::vector<char> to_sink;                  // scc reaches t
};

Condensation condense_residual(const ScalingNetwork& net);

struct ScalabilityCheck {
  bool scalable;
  // When not approximately scalable with R = C: a stable set X ⊔ Y with
  // r(X) + c(Y) > C, read from the min cut.
  std::optional<StableSet> witness;
};

// Rothblum–Schneider test: approximately (r,c)-scalable iff R = C and the
// max flow in G⃗(A,r,c) carries the whole total.
ScalabilityCheck approx_scalable(const NonnegMatrix& a, const MarginalPair& mp);

// Exact scalability: approximate scalability plus every tight stable set
// decomposes A, checked as support confinement to the diagonal fine blocks
// of the refined chain at the single critical parameter.
bool exact_scalable(const NonnegMatrix& a, const MarginalPair& mp);

struct ParametricOptimum {
  Rational value;            // max (1−λ) r(X) + λ c(Y) over stable sets
  StableSet maximizer;       // lattice-minimal optimum
  Condensation condensation; // residual structure for chain extraction
};

ParametricOptimum parametric_objective(const NonnegMatrix& a, const MarginalPair& mp,
                                       const Rational& lambda);

struct PartitionBlock {
  std::vector<int> rows;  // I_κ
  std::vector<int> cols;  // J_κ
  Rational row_sum;       // R_κ
  Rational col_sum;       // C_κ
};

// Chain of extreme stable sets X_0 ⊃ … ⊃ X_θ, the induced block partition,
// the critical parameters and the limit marginal p*.
struct PrincipalPartition {
  MarginalPair marginals;
  int theta = 0;
  std::vector<StableSet> extreme_sets;      // κ = 0..θ
  std::vector<PartitionBlock> blocks;       // κ = 1..θ at index κ−1
  std::vector<Rational> critical_lambdas;   // λ_1 < … < λ_θ
  std::vector<Rational> p_star;
  std::vector<double> p_star_d;
  std::vector<int> row_block;               // row → block index (0-based)
  std::vector<int> col_block;
};

// Computes all extreme stable sets by breakpoint divide and conquer over
// λ ∈ [0,1], exactly in rational arithmetic.
PrincipalPartition principal_partition(const NonnegMatrix& a, const MarginalPair& mp);

// D(r ‖ p*) = Σ_κ R_κ log(R_κ/C_κ).
double limit_divergence(const PrincipalPartition& pp);

struct FineBlock {
  std::vector<int> rows;  // I_{κ,α}
  std::vector<int> cols;  // J_{κ,α}
};

struct RefinedDecomposition {
  PrincipalPartition partition;
  // chains[κ−1]: X_{κ,0} = X_{κ−1} ⊃ … ⊃ X_{κ,α_κ} = X_κ inside 𝒮_κ.
  std::vector<std::vector<StableSet>> chains;
  std::vector<std::vector<FineBlock>> fine_blocks;  // per κ, α = 1..α_κ
};

// Maximal min-cut chain at every critical parameter, via topological
// removal of residual strongly connected components. Ties are broken by the
// smallest contained vertex id, so the output is deterministic.
RefinedDecomposition refined_chain(const NonnegMatrix& a, const MarginalPair& mp,
                                   const PrincipalPartition& pp);

struct SinkhornLimit {
  NonnegMatrix m_star;
  NonnegMatrix n_star;
};

// Assembles (M*, N*): each fine block is scaled to its exact marginals by
// the iteration (the blocks are exactly scalable), then weighted by R_κ and
// C_κ. Off-block entries are exact zeros. Throws when a block fails to
// reach block_tol within block_budget iterations.
SinkhornLimit sinkhorn_limit(const NonnegMatrix& a, const MarginalPair& mp,
                             const RefinedDecomposition& rd,
                             std::uint64_t block_budget = 1'000'000,
                             double block_tol = 1e-10);

struct OffDiagonalMass {
  std::vector<std::vector<double>> pair_mass;  // Δ_{κλ}, upper triangle κ < λ
  std::vector<double> block_mass;              // Δ_κ
  double total = 0.0;                          // Δ
};

// Block masses of N against the partition; validates N ∈ 𝒞 with support in
// support(A) and the identity p(I_κ) = C_κ + Δ_κ.
OffDiagonalMass off_diagonal_mass(const NonnegMatrix& n, const PrincipalPartition& pp);

// Right-hand side of the divergence gap bound: Pinsker terms per block plus
// slope gaps against the off-diagonal mass. Contract:
// D(r‖N·1) − D(r‖p*) ≥ returned value − 1e-9.
double lower_bound_certificate(const NonnegMatrix& n, const PrincipalPartition& pp);

}  // namespace sb
