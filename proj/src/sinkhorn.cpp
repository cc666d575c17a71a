#include "sb/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "sb/divergence.hpp"
#include "sb/sum.hpp"

namespace sb {

namespace {

constexpr std::uint64_t kFoldStride = 64;
constexpr double kPendingHigh = 1e120;
constexpr double kPendingLow = 1e-120;
constexpr double kRecenterLimit = 700.0;

void check_dimensions(const NonnegMatrix& a, const MarginalPair& mp) {
  if (a.n_rows() != mp.n() || a.n_cols() != mp.m())
    throw std::invalid_argument("matrix and marginals have mismatched dimensions");
}

}  // namespace

SinkhornState SinkhornState::init(const NonnegMatrix& a, const MarginalPair& mp) {
  check_dimensions(a, mp);
  SinkhornState s;
  s.base_ = std::make_shared<const NonnegMatrix>(a);
  s.marginals_ = std::make_shared<const MarginalPair>(mp);
  s.log_a_.reserve(a.nnz());
  for (double v : a.values()) s.log_a_.push_back(std::log(v));
  s.xi_.assign(a.n_rows(), 0.0);
  s.eta_.assign(a.n_cols(), 0.0);
  s.u_.assign(a.n_rows(), 1.0);
  s.v_.assign(a.n_cols(), 1.0);

  // N_0 = C(A)
  s.cur_.assign(a.values().begin(), a.values().end());
  std::vector<double> q = a.col_sums();
  auto c = mp.c_d();
  for (int j = 0; j < a.n_cols(); ++j) {
    double g = c[j] / q[j];
    s.eta_[j] = std::log(g);
    for (int e : a.col_entries(j)) s.cur_[e] *= g;
  }
  return s;
}

void SinkhornState::advance() {
  const NonnegMatrix& a = *base_;
  auto r = marginals_->r_d();
  auto c = marginals_->c_d();
  auto row_ptr = a.row_pointers();
  bool identity = true;
  bool want_fold = false;

  for (int i = 0; i < a.n_rows(); ++i) {
    double sum = 0.0;
    for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e) sum += cur_[e];
    double f = r[i] / sum;
    if (f != 1.0) {
      identity = false;
      u_[i] *= f;
      for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e) cur_[e] *= f;
      if (u_[i] > kPendingHigh || u_[i] < kPendingLow) want_fold = true;
    }
  }
  for (int j = 0; j < a.n_cols(); ++j) {
    double sum = 0.0;
    auto entries = a.col_entries(j);
    for (int e : entries) sum += cur_[e];
    double g = c[j] / sum;
    if (g != 1.0) {
      identity = false;
      v_[j] *= g;
      for (int e : entries) cur_[e] *= g;
      if (v_[j] > kPendingHigh || v_[j] < kPendingLow) want_fold = true;
    }
  }

  ++k_;
  stationary_ = identity;
  if (want_fold || k_ % kFoldStride == 0) fold_pending();
}

void SinkhornState::advance_by(std::uint64_t count) {
  while (count > 0) {
    if (stationary_) {  // the update is the identity from here on
      k_ += count;
      return;
    }
    advance();
    --count;
  }
}

SinkhornState SinkhornState::step() const {
  SinkhornState next = *this;
  next.advance();
  return next;
}

void SinkhornState::fold_pending() const {
  for (std::size_t i = 0; i < u_.size(); ++i)
    if (u_[i] != 1.0) {
      xi_[i] += std::log(u_[i]);
      u_[i] = 1.0;
    }
  for (std::size_t j = 0; j < v_.size(); ++j)
    if (v_[j] != 1.0) {
      eta_[j] += std::log(v_[j]);
      v_[j] = 1.0;
    }
  maybe_recenter();
}

void SinkhornState::maybe_recenter() const {
  auto absmax = [](const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  };
  if (absmax(xi_) <= kRecenterLimit && absmax(eta_) <= kRecenterLimit) return;
  auto midrange = [](const std::vector<double>& x) {
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return (*lo + *hi) / 2.0;
  };
  // ξ_i − s and η_j + s leave every ξ_i + η_j unchanged.
  double s = (midrange(xi_) - midrange(eta_)) / 2.0;
  for (double& x : xi_) x -= s;
  for (double& y : eta_) y += s;
}

std::vector<double> SinkhornState::row_marginal() const {
  const NonnegMatrix& a = *base_;
  auto row_ptr = a.row_pointers();
  std::vector<double> out(a.n_rows());
  for (int i = 0; i < a.n_rows(); ++i) {
    NeumaierSum acc;
    for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e) acc.add(cur_[e]);
    out[i] = acc.value();
  }
  return out;
}

double SinkhornState::divergence() const {
  std::vector<double> p = row_marginal();
  return kl_vec(marginals_->r_d(), p);
}

std::vector<double> SinkhornState::log_row() const {
  std::vector<double> out(xi_);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (u_[i] != 1.0) out[i] += std::log(u_[i]);
  return out;
}

std::vector<double> SinkhornState::log_col() const {
  std::vector<double> out(eta_);
  for (std::size_t j = 0; j < out.size(); ++j)
    if (v_[j] != 1.0) out[j] += std::log(v_[j]);
  return out;
}

std::vector<double> SinkhornState::entry_logs() const {
  const NonnegMatrix& a = *base_;
  std::vector<double> xi = log_row();
  std::vector<double> eta = log_col();
  std::vector<double> out(log_a_.size());
  auto row_ptr = a.row_pointers();
  auto cols = a.col_index();
  for (int i = 0; i < a.n_rows(); ++i)
    for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e)
      out[e] = log_a_[e] + xi[i] + eta[cols[e]];
  return out;
}

NonnegMatrix SinkhornState::matrix() const {
  const NonnegMatrix& a = *base_;
  auto row_ptr = a.row_pointers();
  auto cols = a.col_index();
  std::vector<Triplet> entries;
  entries.reserve(cur_.size());
  for (int i = 0; i < a.n_rows(); ++i)
    for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e)
      if (cur_[e] > 0.0) entries.push_back({i, cols[e], cur_[e]});
  return NonnegMatrix(a.n_rows(), a.n_cols(), std::move(entries));
}

NonnegMatrix SinkhornState::row_normalized_matrix() const {
  return row_normalize(matrix(), marginals_->r_d());
}

SinkhornState init(const NonnegMatrix& a, const MarginalPair& mp) {
  return SinkhornState::init(a, mp);
}

SinkhornState step(const SinkhornState& s) { return s.step(); }

void Trajectory::write_csv(std::ostream& os) const {
  for (const TrajectoryRecord& rec : records) {
    os << rec.k << ',' << rec.divergence << ',' << rec.linf_change;
    for (double v : rec.row_marginal) os << ',' << v;
    os << '\n';
  }
}

RunResult run(const NonnegMatrix& a, const MarginalPair& mp, std::uint64_t budget, StopRule stop,
              std::uint64_t record_stride, const std::function<void(const SinkhornState&)>& observer) {
  SinkhornState state = SinkhornState::init(a, mp);
  std::uint64_t stride = record_stride;
  if (stride == 0) stride = a.n_rows() <= 64 ? 1 : (budget + 9999) / 10000;

  Trajectory traj;
  traj.record_stride = stride;
  std::vector<double> prev = state.row_marginal();

  auto record = [&](const std::vector<double>& marginal, double change) {
    traj.records.push_back({state.iteration(), kl_vec(mp.r_d(), marginal), change, marginal});
    if (observer) observer(state);
  };
  record(prev, 0.0);

  const bool track_change = stop.kind == StopRule::Kind::marginal_change;
  for (std::uint64_t k = 1; k <= budget; ++k) {
    if (state.stationary()) {
      // Remaining steps are the identity; emit the outstanding records.
      std::vector<double> marginal = state.row_marginal();
      double div = kl_vec(mp.r_d(), marginal);
      for (std::uint64_t kk = k; kk <= budget; ++kk) {
        state.advance_by(1);
        if (kk % stride == 0 || kk == budget) {
          traj.records.push_back({kk, div, 0.0, marginal});
          if (observer) observer(state);
        }
      }
      break;
    }
    state.advance();
    const bool due = (k % stride == 0) || k == budget;
    if (due || track_change) {
      std::vector<double> marginal = state.row_marginal();
      double change = 0.0;
      for (std::size_t i = 0; i < marginal.size(); ++i)
        change = std::max(change, std::abs(marginal[i] - prev[i]));
      if (due) record(marginal, change);
      prev = std::move(marginal);
      if (track_change && change < stop.eps) break;
    }
  }
  return {std::move(state), std::move(traj)};
}

namespace {

// D(M ‖ X) where X is given by per-entry logs on the support of `base`.
// Requires support(M) ⊆ support(base); the caller validated membership.
double kl_against_logs(const NonnegMatrix& m, const NonnegMatrix& base,
                       const std::vector<double>& logs) {
  NeumaierSum acc;
  auto base_ptr = base.row_pointers();
  for (int i = 0; i < m.n_rows(); ++i) {
    auto mc = m.row_cols(i);
    auto mv = m.row_vals(i);
    auto bc = base.row_cols(i);
    std::size_t b = 0;
    for (std::size_t e = 0; e < mc.size(); ++e) {
      while (b < bc.size() && bc[b] < mc[e]) ++b;
      // bc[b] == mc[e] by support inclusion
      int eid = base_ptr[i] + static_cast<int>(b);
      acc.add(mv[e] * (std::log(mv[e]) - logs[eid]));
    }
  }
  return acc.value();
}

void require_support_subset(const NonnegMatrix& m, const NonnegMatrix& base, const char* what) {
  for (int i = 0; i < m.n_rows(); ++i) {
    auto mc = m.row_cols(i);
    auto bc = base.row_cols(i);
    std::size_t b = 0;
    for (int col : mc) {
      while (b < bc.size() && bc[b] < col) ++b;
      if (b == bc.size() || bc[b] != col)
        throw std::invalid_argument(std::string(what) + " has support outside the base matrix");
    }
  }
}

void require_marginal(std::span<const double> sums, std::span<const double> target,
                      const char* what) {
  for (std::size_t i = 0; i < sums.size(); ++i)
    if (std::abs(sums[i] - target[i]) > 1e-9 * target[i])
      throw std::invalid_argument(std::string(what) + " violates its marginal constraint");
}

}  // namespace

FivePointReport check_five_point(const NonnegMatrix& m, const NonnegMatrix& n,
                                 const SinkhornState& s) {
  const NonnegMatrix& a = s.base();
  const MarginalPair& mp = s.marginals();
  if (m.n_rows() != a.n_rows() || m.n_cols() != a.n_cols() || n.n_rows() != a.n_rows() ||
      n.n_cols() != a.n_cols())
    throw std::invalid_argument("check_five_point: dimension mismatch");
  require_support_subset(m, a, "M");
  require_support_subset(n, a, "N");
  require_marginal(m.row_sums(), mp.r_d(), "M");
  require_marginal(n.col_sums(), mp.c_d(), "N");

  std::vector<double> p = s.row_marginal();
  const double d_k = kl_vec(mp.r_d(), p);  // D(M_k ‖ N_k)

  // Per-entry logs of N_k, M_k = R(N_k) and N_{k+1} = C(M_k). Working in
  // log domain keeps these finite even when entries have decayed past the
  // smallest positive double.
  std::vector<double> log_nk = s.entry_logs();
  auto r = mp.r_d();
  auto c = mp.c_d();
  std::vector<double> row_shift(a.n_rows());
  for (int i = 0; i < a.n_rows(); ++i) row_shift[i] = std::log(r[i] / p[i]);

  std::vector<double> log_mk(log_nk.size());
  auto row_ptr = a.row_pointers();
  for (int i = 0; i < a.n_rows(); ++i)
    for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e) log_mk[e] = log_nk[e] + row_shift[i];

  std::vector<double> qk(a.n_cols());  // column sums of M_k, linear domain
  for (int j = 0; j < a.n_cols(); ++j) {
    NeumaierSum acc;
    for (int e : a.col_entries(j)) acc.add(std::exp(log_mk[e]));
    qk[j] = acc.value();
  }
  std::vector<double> log_nk1(log_nk.size());
  auto cols = a.col_index();
  for (std::size_t e = 0; e < log_nk1.size(); ++e)
    log_nk1[e] = log_mk[e] + std::log(c[cols[e]] / qk[cols[e]]);

  const double d_m_mk = kl_against_logs(m, a, log_mk);
  const double d_m_nk = kl_against_logs(m, a, log_nk);
  const double d_m_nk1 = kl_against_logs(m, a, log_nk1);
  const double d_m_n = kl_matrix(m, n);

  FivePointReport rep;
  rep.three_point = d_k + d_m_mk - d_m_nk;
  rep.four_point = d_m_mk + d_m_n - d_m_nk1;
  rep.five_point = d_m_n + d_m_nk - d_k - d_m_nk1;
  return rep;
}

bool check_sublinear(const Trajectory& traj, double d_star, double d0) {
  for (const TrajectoryRecord& rec : traj.records) {
    if (rec.k == 0) continue;
    if (rec.divergence - d_star > d0 / static_cast<double>(rec.k) + 1e-9) return false;
  }
  return true;
}

}  // namespace sb
