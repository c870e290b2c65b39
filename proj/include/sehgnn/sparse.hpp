#pragma once

#include "sehgnn/common.hpp"

#include <span>
#include <vector>

namespace sehgnn {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed-row sparse matrix. Canonical form: column indices strictly
/// increasing within each row, all values finite. Every kernel below takes and
/// returns canonical matrices.
struct SparseMatrix {
  Index n_rows = 0;
  Index n_cols = 0;
  std::vector<Index> row_offsets{0};
  std::vector<Index> col_indices;
  std::vector<double> values;

  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols);

  /// Builds a canonical matrix; duplicate coordinates are summed.
  static SparseMatrix from_triplets(Index rows, Index cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(Index n);
  static SparseMatrix from_dense(const MatrixXd& dense);

  Index nnz() const { return static_cast<Index>(col_indices.size()); }
  bool is_square() const { return n_rows == n_cols; }
  bool is_canonical() const;

  std::span<const Index> row_cols(Index row) const;
  std::span<const double> row_values(Index row) const;

  SparseMatrix transpose() const;
  MatrixXd to_dense() const;

  bool operator==(const SparseMatrix&) const = default;
};

/// Scales each nonzero row to unit sum. All-zero rows stay zero.
SparseMatrix row_normalize(const SparseMatrix& a);

/// Sparse times dense. Each output row accumulates its terms in ascending
/// column order, so serial and parallel runs are bitwise identical.
MatrixXd spmm(const SparseMatrix& a, const Eigen::Ref<const MatrixXd>& x);

/// Sparse times sparse (row-wise Gustavson), canonical output.
SparseMatrix sparse_matmul(const SparseMatrix& a, const SparseMatrix& b);

/// Drops every (i, i) entry from the pattern. Remaining values are untouched.
SparseMatrix rm_diag(const SparseMatrix& a);

/// Pattern union of two equally shaped matrices with every stored value set to 1.
SparseMatrix binary_union(const SparseMatrix& a, const SparseMatrix& b);

}  // namespace sehgnn
