#include "sb/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sb/sum.hpp"

namespace sb {

NonnegMatrix::NonnegMatrix(int n_rows, int n_cols, std::vector<Triplet> entries)
    : n_(n_rows), m_(n_cols) {
  if (n_ <= 0 || m_ <= 0) throw std::invalid_argument("matrix dimensions must be positive");
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= n_ || t.col < 0 || t.col >= m_)
      throw std::invalid_argument("matrix entry index out of range");
    if (!(t.value > 0.0) || !std::isfinite(t.value))
      throw std::invalid_argument("matrix entries must be strictly positive and finite");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t e = 1; e < entries.size(); ++e)
    if (entries[e].row == entries[e - 1].row && entries[e].col == entries[e - 1].col)
      throw std::invalid_argument("duplicate matrix entry (" + std::to_string(entries[e].row + 1) +
                                  "," + std::to_string(entries[e].col + 1) + ")");

  row_ptr_.assign(n_ + 1, 0);
  col_idx_.reserve(entries.size());
  val_.reserve(entries.size());
  for (const Triplet& t : entries) {
    ++row_ptr_[t.row + 1];
    col_idx_.push_back(t.col);
    val_.push_back(t.value);
  }
  for (int i = 0; i < n_; ++i) row_ptr_[i + 1] += row_ptr_[i];

  col_ptr_.assign(m_ + 1, 0);
  for (int c : col_idx_) ++col_ptr_[c + 1];
  for (int j = 0; j < m_; ++j) col_ptr_[j + 1] += col_ptr_[j];
  csc_eid_.resize(entries.size());
  std::vector<int> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
  for (int e = 0; e < nnz(); ++e) csc_eid_[cursor[col_idx_[e]]++] = e;

  for (int i = 0; i < n_; ++i)
    if (row_ptr_[i + 1] == row_ptr_[i])
      throw std::invalid_argument("zero row " + std::to_string(i + 1));
  for (int j = 0; j < m_; ++j)
    if (col_ptr_[j + 1] == col_ptr_[j])
      throw std::invalid_argument("zero column " + std::to_string(j + 1));
}

NonnegMatrix NonnegMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows[0].empty())
    throw std::invalid_argument("dense matrix must be nonempty");
  const int n = static_cast<int>(rows.size());
  const int m = static_cast<int>(rows[0].size());
  std::vector<Triplet> entries;
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != m)
      throw std::invalid_argument("ragged dense matrix");
    for (int j = 0; j < m; ++j)
      if (rows[i][j] != 0.0) entries.push_back({i, j, rows[i][j]});
  }
  return NonnegMatrix(n, m, std::move(entries));
}

double NonnegMatrix::at(int i, int j) const {
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return val_[row_ptr_[i] + (it - cols.begin())];
}

bool NonnegMatrix::has(int i, int j) const { return at(i, j) != 0.0; }

std::span<const int> NonnegMatrix::row_cols(int i) const {
  return {col_idx_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

std::span<const double> NonnegMatrix::row_vals(int i) const {
  return {val_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

std::span<const int> NonnegMatrix::col_entries(int j) const {
  return {csc_eid_.data() + col_ptr_[j], static_cast<std::size_t>(col_ptr_[j + 1] - col_ptr_[j])};
}

int NonnegMatrix::entry_row(int entry_id) const {
  auto it = std::upper_bound(row_ptr_.begin(), row_ptr_.end(), entry_id);
  return static_cast<int>(it - row_ptr_.begin()) - 1;
}

std::vector<double> NonnegMatrix::row_sums() const {
  std::vector<double> out(n_);
  for (int i = 0; i < n_; ++i) {
    NeumaierSum acc;
    for (double v : row_vals(i)) acc.add(v);
    out[i] = acc.value();
  }
  return out;
}

std::vector<double> NonnegMatrix::col_sums() const {
  std::vector<double> out(m_);
  for (int j = 0; j < m_; ++j) {
    NeumaierSum acc;
    for (int e : col_entries(j)) acc.add(val_[e]);
    out[j] = acc.value();
  }
  return out;
}

double NonnegMatrix::total() const {
  NeumaierSum acc;
  for (double v : val_) acc.add(v);
  return acc.value();
}

std::vector<std::vector<double>> NonnegMatrix::dense() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(m_, 0.0));
  for (int i = 0; i < n_; ++i) {
    auto cols = row_cols(i);
    auto vals = row_vals(i);
    for (std::size_t e = 0; e < cols.size(); ++e) out[i][cols[e]] = vals[e];
  }
  return out;
}

bool NonnegMatrix::same_support(const NonnegMatrix& other) const {
  return n_ == other.n_ && m_ == other.m_ && row_ptr_ == other.row_ptr_ &&
         col_idx_ == other.col_idx_;
}

NonnegMatrix NonnegMatrix::submatrix(std::span<const int> rows, std::span<const int> cols) const {
  std::vector<int> col_map(m_, -1);
  for (std::size_t j = 0; j < cols.size(); ++j) col_map[cols[j]] = static_cast<int>(j);
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto cs = row_cols(rows[i]);
    auto vs = row_vals(rows[i]);
    for (std::size_t e = 0; e < cs.size(); ++e)
      if (col_map[cs[e]] >= 0)
        entries.push_back({static_cast<int>(i), col_map[cs[e]], vs[e]});
  }
  return NonnegMatrix(static_cast<int>(rows.size()), static_cast<int>(cols.size()),
                      std::move(entries));
}

namespace {

std::vector<Triplet> scaled_entries(const NonnegMatrix& a, std::span<const double> factor,
                                    bool by_row) {
  std::vector<Triplet> out;
  out.reserve(a.nnz());
  for (int i = 0; i < a.n_rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_vals(i);
    for (std::size_t e = 0; e < cols.size(); ++e) {
      double f = by_row ? factor[i] : factor[cols[e]];
      out.push_back({i, cols[e], vals[e] * f});
    }
  }
  return out;
}

}  // namespace

NonnegMatrix row_normalize(const NonnegMatrix& a, std::span<const double> r) {
  if (static_cast<int>(r.size()) != a.n_rows())
    throw std::invalid_argument("row marginal length does not match matrix");
  std::vector<double> sums = a.row_sums();
  std::vector<double> factor(a.n_rows());
  for (int i = 0; i < a.n_rows(); ++i) factor[i] = r[i] / sums[i];
  return NonnegMatrix(a.n_rows(), a.n_cols(), scaled_entries(a, factor, /*by_row=*/true));
}

NonnegMatrix col_normalize(const NonnegMatrix& a, std::span<const double> c) {
  if (static_cast<int>(c.size()) != a.n_cols())
    throw std::invalid_argument("column marginal length does not match matrix");
  std::vector<double> sums = a.col_sums();
  std::vector<double> factor(a.n_cols());
  for (int j = 0; j < a.n_cols(); ++j) factor[j] = c[j] / sums[j];
  return NonnegMatrix(a.n_rows(), a.n_cols(), scaled_entries(a, factor, /*by_row=*/false));
}

bool is_stable(const NonnegMatrix& a, const StableSet& s) {
  std::vector<char> in_y(a.n_cols(), 0);
  for (int j : s.cols) in_y[j] = 1;
  for (int i : s.rows)
    for (int j : a.row_cols(i))
      if (in_y[j]) return false;
  return true;
}

}  // namespace sb
