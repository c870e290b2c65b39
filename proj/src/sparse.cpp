#include "sehgnn/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sehgnn {

namespace {

void require_dims(bool ok, const char* op, Index ar, Index ac, Index br, Index bc) {
  if (!ok) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" + std::to_string(ar) +
                                "x" + std::to_string(ac) + " vs " + std::to_string(br) + "x" +
                                std::to_string(bc) + ")");
  }
}

}  // namespace

SparseMatrix::SparseMatrix(Index rows, Index cols)
    : n_rows(rows), n_cols(cols), row_offsets(static_cast<size_t>(rows) + 1, 0) {
  if (rows < 0 || cols < 0) {
    throw std::invalid_argument("SparseMatrix: negative dimension");
  }
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
  SparseMatrix m(rows, cols);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::out_of_range("SparseMatrix: triplet (" + std::to_string(t.row) + ", " +
                              std::to_string(t.col) + ") outside " + std::to_string(rows) + "x" +
                              std::to_string(cols));
    }
    if (!std::isfinite(t.value)) {
      throw std::invalid_argument("SparseMatrix: non-finite value");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  m.col_indices.reserve(triplets.size());
  m.values.reserve(triplets.size());
  Index current_row = 0;
  for (size_t i = 0; i < triplets.size(); ++i) {
    const auto& t = triplets[i];
    while (current_row < t.row) {
      m.row_offsets[++current_row] = m.nnz();
    }
    if (i > 0 && triplets[i - 1].row == t.row && triplets[i - 1].col == t.col) {
      m.values.back() += t.value;
      continue;
    }
    m.col_indices.push_back(t.col);
    m.values.push_back(t.value);
  }
  while (current_row < rows) {
    m.row_offsets[++current_row] = m.nnz();
  }
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  SparseMatrix m(n, n);
  m.col_indices.resize(static_cast<size_t>(n));
  m.values.assign(static_cast<size_t>(n), 1.0);
  for (Index i = 0; i < n; ++i) {
    m.col_indices[i] = i;
    m.row_offsets[i + 1] = i + 1;
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const MatrixXd& dense) {
  SparseMatrix m(dense.rows(), dense.cols());
  for (Index i = 0; i < dense.rows(); ++i) {
    for (Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) {
        m.col_indices.push_back(j);
        m.values.push_back(dense(i, j));
      }
    }
    m.row_offsets[i + 1] = m.nnz();
  }
  return m;
}

bool SparseMatrix::is_canonical() const {
  if (n_rows < 0 || n_cols < 0) return false;
  if (row_offsets.size() != static_cast<size_t>(n_rows) + 1) return false;
  if (row_offsets.front() != 0 || row_offsets.back() != nnz()) return false;
  if (values.size() != col_indices.size()) return false;
  for (Index i = 0; i < n_rows; ++i) {
    if (row_offsets[i] > row_offsets[i + 1]) return false;
    for (Index p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
      if (col_indices[p] < 0 || col_indices[p] >= n_cols) return false;
      if (p > row_offsets[i] && col_indices[p] <= col_indices[p - 1]) return false;
      if (!std::isfinite(values[p])) return false;
    }
  }
  return true;
}

std::span<const Index> SparseMatrix::row_cols(Index row) const {
  return {col_indices.data() + row_offsets[row],
          static_cast<size_t>(row_offsets[row + 1] - row_offsets[row])};
}

std::span<const double> SparseMatrix::row_values(Index row) const {
  return {values.data() + row_offsets[row],
          static_cast<size_t>(row_offsets[row + 1] - row_offsets[row])};
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(n_cols, n_rows);
  std::vector<Index> counts(static_cast<size_t>(n_cols) + 1, 0);
  for (Index c : col_indices) ++counts[c + 1];
  for (Index j = 0; j < n_cols; ++j) counts[j + 1] += counts[j];
  t.row_offsets = counts;
  t.col_indices.resize(col_indices.size());
  t.values.resize(values.size());
  // Scanning source rows in order keeps each transposed row sorted.
  for (Index i = 0; i < n_rows; ++i) {
    for (Index p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
      const Index dst = counts[col_indices[p]]++;
      t.col_indices[dst] = i;
      t.values[dst] = values[p];
    }
  }
  return t;
}

MatrixXd SparseMatrix::to_dense() const {
  MatrixXd d = MatrixXd::Zero(n_rows, n_cols);
  for (Index i = 0; i < n_rows; ++i) {
    for (Index p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
      d(i, col_indices[p]) = values[p];
    }
  }
  return d;
}

SparseMatrix row_normalize(const SparseMatrix& a) {
  SparseMatrix out = a;
  for (Index i = 0; i < a.n_rows; ++i) {
    double sum = 0.0;
    for (Index p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) sum += a.values[p];
    if (sum == 0.0) continue;
    for (Index p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) out.values[p] = a.values[p] / sum;
  }
  return out;
}

MatrixXd spmm(const SparseMatrix& a, const Eigen::Ref<const MatrixXd>& x) {
  require_dims(a.n_cols == x.rows(), "spmm", a.n_rows, a.n_cols, x.rows(), x.cols());
  MatrixXd out = MatrixXd::Zero(a.n_rows, x.cols());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < a.n_rows; ++i) {
    for (Index p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
      out.row(i) += a.values[p] * x.row(a.col_indices[p]);
    }
  }
  return out;
}

SparseMatrix sparse_matmul(const SparseMatrix& a, const SparseMatrix& b) {
  require_dims(a.n_cols == b.n_rows, "sparse_matmul", a.n_rows, a.n_cols, b.n_rows, b.n_cols);
  std::vector<std::vector<Index>> row_cols(static_cast<size_t>(a.n_rows));
  std::vector<std::vector<double>> row_vals(static_cast<size_t>(a.n_rows));

#pragma omp parallel
  {
    std::vector<double> acc(static_cast<size_t>(b.n_cols), 0.0);
    std::vector<char> touched(static_cast<size_t>(b.n_cols), 0);
    std::vector<Index> pattern;
#pragma omp for schedule(dynamic, 64)
    for (Index i = 0; i < a.n_rows; ++i) {
      pattern.clear();
      for (Index p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
        const Index k = a.col_indices[p];
        const double w = a.values[p];
        for (Index q = b.row_offsets[k]; q < b.row_offsets[k + 1]; ++q) {
          const Index j = b.col_indices[q];
          if (!touched[j]) {
            touched[j] = 1;
            pattern.push_back(j);
          }
          acc[j] += w * b.values[q];
        }
      }
      std::sort(pattern.begin(), pattern.end());
      auto& cols = row_cols[i];
      auto& vals = row_vals[i];
      cols.reserve(pattern.size());
      vals.reserve(pattern.size());
      for (Index j : pattern) {
        cols.push_back(j);
        vals.push_back(acc[j]);
        acc[j] = 0.0;
        touched[j] = 0;
      }
    }
  }

  SparseMatrix out(a.n_rows, b.n_cols);
  for (Index i = 0; i < a.n_rows; ++i) {
    out.row_offsets[i + 1] = out.row_offsets[i] + static_cast<Index>(row_cols[i].size());
  }
  out.col_indices.reserve(static_cast<size_t>(out.row_offsets.back()));
  out.values.reserve(static_cast<size_t>(out.row_offsets.back()));
  for (Index i = 0; i < a.n_rows; ++i) {
    out.col_indices.insert(out.col_indices.end(), row_cols[i].begin(), row_cols[i].end());
    out.values.insert(out.values.end(), row_vals[i].begin(), row_vals[i].end());
  }
  return out;
}

SparseMatrix rm_diag(const SparseMatrix& a) {
  if (!a.is_square()) {
    throw std::invalid_argument("rm_diag: matrix is " + std::to_string(a.n_rows) + "x" +
                                std::to_string(a.n_cols) + ", expected square");
  }
  SparseMatrix out(a.n_rows, a.n_cols);
  out.col_indices.reserve(a.col_indices.size());
  out.values.reserve(a.values.size());
  for (Index i = 0; i < a.n_rows; ++i) {
    for (Index p = a.row_offsets[i]; p < a.row_offsets[i + 1]; ++p) {
      if (a.col_indices[p] == i) continue;
      out.col_indices.push_back(a.col_indices[p]);
      out.values.push_back(a.values[p]);
    }
    out.row_offsets[i + 1] = out.nnz();
  }
  return out;
}

SparseMatrix binary_union(const SparseMatrix& a, const SparseMatrix& b) {
  require_dims(a.n_rows == b.n_rows && a.n_cols == b.n_cols, "binary_union", a.n_rows, a.n_cols,
               b.n_rows, b.n_cols);
  SparseMatrix out(a.n_rows, a.n_cols);
  for (Index i = 0; i < a.n_rows; ++i) {
    auto ca = a.row_cols(i);
    auto cb = b.row_cols(i);
    std::set_union(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(out.col_indices));
    out.row_offsets[i + 1] = out.nnz();
  }
  out.values.assign(out.col_indices.size(), 1.0);
  return out;
}

}  // namespace sehgnn
