#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "sb/marginals.hpp"
#include "sb/matrix.hpp"

namespace sb {

enum class Phase { after_col, after_row };

struct StopRule {
  enum class Kind { none, marginal_change };
  Kind kind = Kind::none;
  double eps = 0.0;

  static StopRule none() { return {}; }
  static StopRule marginal_change(double eps) { return {Kind::marginal_change, eps}; }
};

struct TrajectoryRecord {
  std::uint64_t k;
  double divergence;           // D(M_k ‖ N_k)
  double linf_change;          // ℓ∞ change of N_k·1 since the previous step
  std::vector<double> row_marginal;  // N_k·1
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  std::uint64_t record_stride = 1;

  // CSV lines: k, divergence, linf_change, then the n marginal columns.
  void write_csv(std::ostream& os) const;
};

// State of the alternating iteration N_0 = C(A), M_k = R(N_k),
// N_{k+1} = C(M_k). The scaling is carried as log factors (ξ, η): the
// represented matrix is exp(log A_ij + ξ_i + η_j) on the support of A,
// which never changes. A linear-domain image of the entries is kept as the
// working representation; multiplicative updates accumulate in pending
// factors that are folded into ξ, η periodically, so the factors stay exact
// in log domain while one iteration costs O(nnz) multiplications.
class SinkhornState {
 public:
  static SinkhornState init(const NonnegMatrix& a, const MarginalPair& mp);

  SinkhornState step() const;  // one row- then one column-normalization
  void advance();              // in-place step
  // Advances by `count` steps; once the update becomes the bitwise identity
  // the remaining steps are skipped (the state is a floating fixed point).
  void advance_by(std::uint64_t count);

  std::uint64_t iteration() const { return k_; }
  Phase phase() const { return Phase::after_col; }
  bool stationary() const { return stationary_; }

  const NonnegMatrix& base() const { return *base_; }
  const MarginalPair& marginals() const { return *marginals_; }

  std::vector<double> row_marginal() const;  // N_k·1, compensated
  double divergence() const;                 // D(r ‖ N_k·1) = D(M_k ‖ N_k)

  // Scaling factors with pending updates folded in.
  std::vector<double> log_row() const;  // ξ
  std::vector<double> log_col() const;  // η

  // log of the represented entry, indexed like base().values(). Finite for
  // every support entry even when the linear value has underflowed.
  std::vector<double> entry_logs() const;

  // Represented matrix N_k. Entries whose linear image underflowed to zero
  // are dropped; use entry_logs() where the true magnitude matters.
  NonnegMatrix matrix() const;
  NonnegMatrix row_normalized_matrix() const;  // M_k = R(N_k)

 private:
  SinkhornState() = default;

  void fold_pending() const;
  void maybe_recenter() const;

  std::shared_ptr<const NonnegMatrix> base_;
  std::shared_ptr<const MarginalPair> marginals_;
  std::vector<double> log_a_;          // log of base entries, CSR order
  std::vector<double> cur_;            // linear entries, CSR order
  mutable std::vector<double> xi_, eta_;       // committed log factors
  mutable std::vector<double> u_, v_;          // pending linear factors
  std::uint64_t k_ = 0;
  bool stationary_ = false;
};

SinkhornState init(const NonnegMatrix& a, const MarginalPair& mp);
SinkhornState step(const SinkhornState& s);

struct RunResult {
  SinkhornState state;
  Trajectory trajectory;
};

// Iterates until the budget is exhausted or the stopping rule fires.
// record_stride 0 selects the default: 1 when n ≤ 64, else ⌈budget/1e4⌉.
// The observer, when given, is called at every recorded step.
RunResult run(const NonnegMatrix& a, const MarginalPair& mp, std::uint64_t budget,
              StopRule stop = StopRule::none(), std::uint64_t record_stride = 0,
              const std::function<void(const SinkhornState&)>& observer = nullptr);

// Residuals of the three Csiszár–Tusnády comparisons at the state's
// iteration k, for M with row sums r and N with column sums c:
//   three_point = D(M_k‖N_k) + D(M‖M_k) − D(M‖N_k)            (≈ 0)
//   four_point  = D(M‖M_k) + D(M‖N) − D(M‖N_{k+1})            (≥ 0)
//   five_point  = D(M‖N) + D(M‖N_k) − D(M_k‖N_k) − D(M‖N_{k+1}) (≥ 0)
struct FivePointReport {
  double three_point;
  double four_point;
  double five_point;
};

FivePointReport check_five_point(const NonnegMatrix& m, const NonnegMatrix& n,
                                 const SinkhornState& s);

// True iff divergence − d_star ≤ d0/ℓ + 1e-9 for every recorded ℓ ≥ 1,
// where d_star = D(M*‖N*) and d0 = D(M*‖N_0).
bool check_sublinear(const Trajectory& traj, double d_star, double d0);

}  // namespace sb
