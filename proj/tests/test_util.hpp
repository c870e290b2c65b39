#pragma once

#include "sehgnn/graph.hpp"
#include "sehgnn/sparse.hpp"

#include <filesystem>
#include <random>

namespace sehgnn::testing {

/// Random sparse matrix with the given fill fraction; binary unless `weighted`.
inline SparseMatrix random_sparse(Index rows, Index cols, double fill, std::mt19937_64& rng, bool weighted = false) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Triplet> t;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (unit(rng) < fill) t.push_back({i, j, weighted ? unit(rng) + 0.1 : 1.0});
    }
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

inline MatrixXd random_dense(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

/// Small random heterogeneous graph: three types T (target) / U / W with
/// relations T->U, U->W, T->T. Sizes stay at or below `max_nodes` in total.
inline HeteroGraph random_graph(std::uint64_t seed, Index max_nodes = 50, int num_classes = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> size(4, max_nodes / 3);
  HeteroGraph g;
  g.schema.node_types = {{"T", size(rng), 3}, {"U", size(rng), 4}, {"W", size(rng), 2}};
  g.schema.relations = {{"TU", "T", "U"}, {"UW", "U", "W"}, {"TT", "T", "T"}};
  g.schema.target_type = "T";
  g.schema.num_classes = num_classes;
  std::uniform_real_distribution<double> fill(0.05, 0.35);
  for (const auto& r : g.schema.relations) {
    auto a = random_sparse(g.schema.type(r.src).count, g.schema.type(r.dst).count, fill(rng), rng);
    if (r.src == r.dst) a = rm_diag(a);
    g.adjacency.emplace(r.name, std::move(a));
  }
  for (const auto& t : g.schema.node_types) g.features.emplace(t.name, random_dense(t.count, t.feature_dim, rng));
  const Index n = g.schema.type("T").count;
  g.labels = LabelTable(n);
  std::uniform_int_distribution<int> cls(0, num_classes - 1);
  for (Index i = 0; i < n; ++i) {
    g.labels.labels[i] = cls(rng);
    g.labels.splits[i] = i % 3 == 0 ? Split::test : i % 3 == 1 ? Split::train : Split::val;
  }
  g.validate();
  return g;
}

/// DBLP-shaped schema: A (target) / P / T / V; relations A->P, P->T, P->V.
inline Schema dblp_schema() {
  Schema s;
  s.node_types = {{"A", 4, 2}, {"P", 5, 2}, {"T", 3, 2}, {"V", 2, 2}};
  s.relations = {{"AP", "A", "P"}, {"PT", "P", "T"}, {"PV", "P", "V"}};
  s.target_type = "A";
  s.num_classes = 4;
  return s;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sehgnn_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace sehgnn::testing
