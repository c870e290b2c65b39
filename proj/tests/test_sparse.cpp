#include "sehgnn/sparse.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace sehgnn;
using sehgnn::testing::random_dense;
using sehgnn::testing::random_sparse;

TEST_CASE("from_triplets sorts and merges duplicates") {
  auto m = SparseMatrix::from_triplets(2, 3, {{1, 2, 1.0}, {0, 1, 2.0}, {1, 0, 1.0}, {1, 2, 0.5}});
  CHECK(m.is_canonical());
  CHECK(m.row_offsets == std::vector<Index>{0, 1, 3});
  CHECK(m.col_indices == std::vector<Index>{1, 0, 2});
  CHECK(m.values == std::vector<double>{2.0, 1.0, 1.5});
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), std::out_of_range);
}

TEST_CASE("row_normalize") {
  SUBCASE("identity is a fixed point") {
    CHECK(row_normalize(SparseMatrix::identity(5)) == SparseMatrix::identity(5));
  }
  SUBCASE("zero rows stay zero") {
    MatrixXd d(2, 2);
    d << 1, 1, 0, 0;
    MatrixXd expected(2, 2);
    expected << 0.5, 0.5, 0, 0;
    CHECK(row_normalize(SparseMatrix::from_dense(d)).to_dense() == expected);
  }
  SUBCASE("random binary rows sum to one and normalization is idempotent") {
    std::mt19937_64 rng(7);
    const auto a = random_sparse(50, 40, 0.1, rng);
    const auto n = row_normalize(a);
    CHECK(n.is_canonical());
    CHECK(n.col_indices == a.col_indices);
    for (Index i = 0; i < n.n_rows; ++i) {
      double s = 0;
      for (double v : n.row_values(i)) s += v;
      if (a.row_cols(i).empty()) {
        CHECK(s == 0.0);
      } else {
        CHECK(std::abs(s - 1.0) <= 1e-6);
      }
    }
    CHECK((row_normalize(n).to_dense() - n.to_dense()).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("spmm") {
  SUBCASE("hand example") {
    auto a = SparseMatrix::from_triplets(1, 2, {{0, 0, 0.5}, {0, 1, 0.5}});
    MatrixXd x(2, 2);
    x << 1, 3, 3, 5;
    MatrixXd y = spmm(a, x);
    CHECK(y(0, 0) == 2.0);
    CHECK(y(0, 1) == 4.0);
  }
  SUBCASE("identity") {
    std::mt19937_64 rng(1);
    const MatrixXd x = random_dense(6, 3, rng);
    CHECK(spmm(SparseMatrix::identity(6), x) == x);
  }
  SUBCASE("matches dense product") {
    std::mt19937_64 rng(2);
    const auto a = random_sparse(30, 20, 0.2, rng, true);
    const MatrixXd x = random_dense(20, 8, rng);
    const MatrixXd expected = a.to_dense() * x;
    CHECK((spmm(a, x) - expected).cwiseAbs().maxCoeff() <= 1e-6);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(spmm(SparseMatrix::identity(3), MatrixXd::Zero(4, 2)), std::invalid_argument);
  }
  SUBCASE("one-hop mean aggregation") {
    std::mt19937_64 rng(3);
    const auto a = random_sparse(15, 12, 0.3, rng);
    const MatrixXd x = random_dense(12, 4, rng);
    const MatrixXd y = spmm(row_normalize(a), x);
    for (Index i = 0; i < a.n_rows; ++i) {
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(4);
      for (Index j : a.row_cols(i)) mean += x.row(j);
      if (!a.row_cols(i).empty()) mean /= static_cast<double>(a.row_cols(i).size());
      CHECK((y.row(i) - mean).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("thread count does not change the bits") {
    std::mt19937_64 rng(4);
    const auto a = row_normalize(random_sparse(200, 150, 0.05, rng));
    const MatrixXd x = random_dense(150, 16, rng);
    set_num_threads(1);
    const MatrixXd serial = spmm(a, x);
    set_num_threads(4);
    const MatrixXd parallel = spmm(a, x);
    set_num_threads(1);
    CHECK(serial == parallel);
  }
}

TEST_CASE("sparse_matmul") {
  std::mt19937_64 rng(11);
  SUBCASE("right identity") {
    const auto a = random_sparse(7, 9, 0.3, rng, true);
    CHECK(sparse_matmul(a, SparseMatrix::identity(9)) == a);
  }
  SUBCASE("chain of single entries multiplies weights") {
    auto a = SparseMatrix::from_triplets(1, 3, {{0, 2, 0.25}});
    auto b = SparseMatrix::from_triplets(3, 4, {{2, 1, 0.5}});
    auto c = sparse_matmul(a, b);
    CHECK(c.nnz() == 1);
    CHECK(c.col_indices[0] == 1);
    CHECK(c.values[0] == 0.125);
  }
  SUBCASE("matches dense product and is canonical") {
    const auto a = random_sparse(25, 18, 0.2, rng, true);
    const auto b = random_sparse(18, 22, 0.2, rng, true);
    const auto c = sparse_matmul(a, b);
    CHECK(c.is_canonical());
    CHECK((c.to_dense() - a.to_dense() * b.to_dense()).cwiseAbs().maxCoeff() <= 1e-6);
  }
  SUBCASE("associativity bridge with spmm") {
    const auto a = row_normalize(random_sparse(20, 15, 0.25, rng));
    const auto b = row_normalize(random_sparse(15, 10, 0.25, rng));
    const MatrixXd x = random_dense(10, 5, rng);
    CHECK((spmm(a, spmm(b, x)) - spmm(sparse_matmul(a, b), x)).cwiseAbs().maxCoeff() <= 1e-6);
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(sparse_matmul(SparseMatrix::identity(3), SparseMatrix::identity(4)), std::invalid_argument);
  }
}

TEST_CASE("rm_diag") {
  SUBCASE("pure diagonal becomes empty") {
    auto m = rm_diag(SparseMatrix::identity(4));
    CHECK(m.nnz() == 0);
    CHECK(m.is_canonical());
  }
  SUBCASE("no diagonal entries: unchanged") {
    auto a = SparseMatrix::from_triplets(3, 3, {{0, 1, 1.0}, {2, 0, 2.0}});
    CHECK(rm_diag(a) == a);
  }
  SUBCASE("random square: zero diagonal, off-diagonal preserved, idempotent") {
    std::mt19937_64 rng(5);
    const auto a = random_sparse(20, 20, 0.3, rng, true);
    const auto r = rm_diag(a);
    CHECK(r.is_canonical());
    const MatrixXd da = a.to_dense();
    const MatrixXd dr = r.to_dense();
    for (Index i = 0; i < 20; ++i) {
      for (Index j = 0; j < 20; ++j) CHECK(dr(i, j) == (i == j ? 0.0 : da(i, j)));
    }
    CHECK(rm_diag(r) == r);
  }
  SUBCASE("non-square input") { CHECK_THROWS_AS(rm_diag(SparseMatrix(2, 3)), std::invalid_argument); }
}

TEST_CASE("transpose and binary_union") {
  std::mt19937_64 rng(9);
  const auto a = random_sparse(12, 7, 0.3, rng, true);
  const auto t = a.transpose();
  CHECK(t.is_canonical());
  CHECK(t.to_dense() == a.to_dense().transpose());
  CHECK(t.transpose() == a);

  const auto b = random_sparse(12, 7, 0.3, rng);
  const auto u = binary_union(a, b);
  CHECK(u.is_canonical());
  const MatrixXd expected = ((a.to_dense().array() != 0) || (b.to_dense().array() != 0)).cast<double>();
  CHECK(u.to_dense() == expected);
}
