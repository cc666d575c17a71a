#pragma once

#include <span>
#include <vector>

namespace sb {

struct Triplet {
  int row;
  int col;
  double value;
};

// Sparse nonnegative matrix: stored entries are strictly positive, absent
// entries are exact zeros. The support pattern doubles as the bipartite
// graph on row and column indices. Immutable after construction.
//
// Construction rejects nonpositive or nonfinite values, out-of-range or
// duplicate indices, and any zero row or zero column.
class NonnegMatrix {
 public:
  NonnegMatrix(int n_rows, int n_cols, std::vector<Triplet> entries);

  // Zeros in `rows` are skipped; everything else must be positive.
  static NonnegMatrix from_dense(const std::vector<std::vector<double>>& rows);

  int n_rows() const { return n_; }
  int n_cols() const { return m_; }
  int nnz() const { return static_cast<int>(val_.size()); }

  double at(int i, int j) const;  // 0.0 when (i,j) is not in the support
  bool has(int i, int j) const;

  // CSR views (entries of row i, columns ascending).
  std::span<const int> row_cols(int i) const;
  std::span<const double> row_vals(int i) const;
  // CSC view: ids of this column's entries into the CSR arrays.
  std::span<const int> col_entries(int j) const;

  std::span<const int> col_index() const { return col_idx_; }
  std::span<const double> values() const { return val_; }
  std::span<const int> row_pointers() const { return row_ptr_; }
  int entry_row(int entry_id) const;

  std::vector<double> row_sums() const;  // compensated summation
  std::vector<double> col_sums() const;
  double total() const;

  std::vector<std::vector<double>> dense() const;

  bool same_support(const NonnegMatrix& other) const;

  // Reindexed submatrix; `rows` and `cols` are strictly increasing.
  NonnegMatrix submatrix(std::span<const int> rows, std::span<const int> cols) const;

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<int> row_ptr_;   // size n+1
  std::vector<int> col_idx_;   // size nnz, sorted within each row
  std::vector<double> val_;    // size nnz
  std::vector<int> col_ptr_;   // size m+1
  std::vector<int> csc_eid_;   // size nnz, CSR entry ids grouped by column
};

// R(A): scales each row i by r_i / (row sum). Same support; row sums become r.
NonnegMatrix row_normalize(const NonnegMatrix& a, std::span<const double> r);
// C(A): scales each column j by c_j / (column sum).
NonnegMatrix col_normalize(const NonnegMatrix& a, std::span<const double> c);

// X ⊔ Y with X ⊆ rows, Y ⊆ cols and no support entry in X × Y.
struct StableSet {
  std::vector<int> rows;  // sorted ascending
  std::vector<int> cols;  // sorted ascending
  bool operator==(const StableSet&) const = default;
};

bool is_stable(const NonnegMatrix& a, const StableSet& s);

}  // namespace sb
