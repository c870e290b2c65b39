#include "sehgnn/metapath.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace sehgnn {

namespace {

void require_unique_initials(const Schema& schema) {
  std::set<char> seen;
  for (const auto& t : schema.node_types) {
    if (!seen.insert(t.name.front()).second) {
      throw DataError("schema: node types share the initial '" + std::string(1, t.name.front()) +
                      "', metapath names would be ambiguous");
    }
  }
}

void extend_walks(const Schema& schema, std::vector<std::string>& walk, int remaining,
                  const std::function<void(const std::vector<std::string>&)>& visit) {
  visit(walk);
  if (remaining == 0) return;
  for (const auto& next : schema.adjacent_types(walk.back())) {
    walk.push_back(next);
    extend_walks(schema, walk, remaining - 1, visit);
    walk.pop_back();
  }
}

std::string key_of(std::span<const std::string> types) {
  std::string key;
  for (const auto& t : types) {
    key += t;
    key.push_back('\x1f');
  }
  return key;
}

class NormalizedAdjacency {
 public:
  explicit NormalizedAdjacency(const HeteroGraph& g) : graph_(g) {}

  const SparseMatrix& get(const std::string& src, const std::string& dst) {
    auto key = src + '\x1f' + dst;
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, row_normalize(graph_.type_adjacency(src, dst))).first;
    }
    return it->second;
  }

 private:
  const HeteroGraph& graph_;
  std::map<std::string, SparseMatrix> cache_;
};

}  // namespace

std::vector<Metapath> enumerate_feature_metapaths(const Schema& schema, int max_hop) {
  if (max_hop < 0) throw std::invalid_argument("max_hop must be non-negative");
  require_unique_initials(schema);
  std::vector<Metapath> out;
  std::vector<std::string> walk{schema.target_type};
  extend_walks(schema, walk, max_hop, [&](const auto& w) { out.push_back({w, MetapathKind::feature}); });
  std::sort(out.begin(), out.end(), metapath_less);
  return out;
}

std::vector<Metapath> enumerate_label_metapaths(const Schema& schema, int max_hop) {
  require_unique_initials(schema);
  std::vector<Metapath> out;
  if (max_hop < 2) return out;
  std::vector<std::string> walk{schema.target_type};
  extend_walks(schema, walk, max_hop, [&](const auto& w) {
    if (w.size() >= 3 && w.back() == schema.target_type) out.push_back({w, MetapathKind::label});
  });
  std::sort(out.begin(), out.end(), metapath_less);
  return out;
}

MetapathSet enumerate_metapaths(const Schema& schema, int max_hop_features, int max_hop_labels) {
  return {enumerate_feature_metapaths(schema, max_hop_features),
          enumerate_label_metapaths(schema, max_hop_labels)};
}

void validate_metapath(const Schema& schema, const Metapath& path) {
  const auto name = path.canonical();
  if (path.types.empty() || path.types.front() != schema.target_type) {
    throw DataError("metapath " + name + ": must start at target type '" + schema.target_type + "'");
  }
  for (size_t i = 0; i + 1 < path.types.size(); ++i) {
    const auto adj = schema.adjacent_types(path.types[i]);
    if (!std::binary_search(adj.begin(), adj.end(), path.types[i + 1])) {
      throw DataError("metapath " + name + ": no relation between '" + path.types[i] + "' and '" +
                      path.types[i + 1] + "'");
    }
  }
  if (path.kind == MetapathKind::label && (path.hops() < 2 || path.types.back() != schema.target_type)) {
    throw DataError("label metapath " + name + ": must return to the target type after at least 2 hops");
  }
}

std::vector<SemanticMatrix> propagate_features(const HeteroGraph& graph, std::span<const Metapath> paths,
                                               const PropagationOptions& options) {
  NormalizedAdjacency adjacency(graph);
  std::map<std::string, MatrixXd> memo;

  // Suffix types[i..] aggregated onto type types[i].
  std::function<MatrixXd(std::span<const std::string>)> suffix = [&](std::span<const std::string> types) {
    if (types.size() == 1) return graph.features.at(types.front());
    const auto key = key_of(types);
    if (options.memoize) {
      if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    MatrixXd result = spmm(adjacency.get(types[0], types[1]), suffix(types.subspan(1)));
    if (options.memoize) memo.emplace(key, result);
    return result;
  };

  std::vector<SemanticMatrix> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    if (p.kind != MetapathKind::feature) throw DataError("metapath " + p.id() + " is not a feature path");
    validate_metapath(graph.schema, p);
    out.push_back({p, suffix(p.types)});
  }
  return out;
}

std::vector<SemanticMatrix> propagate_labels(const HeteroGraph& graph, std::span<const Metapath> paths,
                                             const PropagationOptions& options) {
  NormalizedAdjacency adjacency(graph);
  std::map<std::string, SparseMatrix> memo;
  const MatrixXd y = graph.labels.train_one_hot(graph.schema.num_classes);

  // Prefix types[..n] as a composite adjacency from types[0] to types[n-1].
  std::function<SparseMatrix(std::span<const std::string>)> prefix = [&](std::span<const std::string> types) {
    if (types.size() == 2) return adjacency.get(types[0], types[1]);
    const auto key = key_of(types);
    if (options.memoize) {
      if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    SparseMatrix result = sparse_matmul(prefix(types.first(types.size() - 1)),
                                        adjacency.get(types[types.size() - 2], types.back()));
    if (options.memoize) memo.emplace(key, result);
    return result;
  };

  std::vector<SemanticMatrix> out;
  out.reserve(paths.size());
  for (const auto& p : paths) {
    if (p.kind != MetapathKind::label) throw DataError("metapath " + p.id() + " is not a label path");
    validate_metapath(graph.schema, p);
    out.push_back({p, spmm(rm_diag(prefix(p.types)), y)});
  }
  return out;
}

Eigen::VectorXd oracle_aggregate(const HeteroGraph& graph, const Metapath& path, Index node) {
  if (path.hops() > kOracleMaxHop) {
    throw std::invalid_argument("oracle_aggregate: " + std::to_string(path.hops()) + " hops exceeds the limit of " +
                                std::to_string(kOracleMaxHop));
  }
  validate_metapath(graph.schema, path);

  // Neighbor sets per hop, rebuilt straight from the relation edge lists.
  std::vector<std::vector<std::set<Index>>> neighbors;
  for (size_t h = 0; h + 1 < path.types.size(); ++h) {
    const auto& src = path.types[h];
    const auto& dst = path.types[h + 1];
    std::vector<std::set<Index>> hop(static_cast<size_t>(graph.schema.type(src).count));
    for (const auto& r : graph.schema.relations) {
      const auto& a = graph.adjacency.at(r.name);
      for (Index i = 0; i < a.n_rows; ++i) {
        for (Index j : a.row_cols(i)) {
          if (r.src == src && r.dst == dst) hop[i].insert(j);
          if (r.dst == src && r.src == dst) hop[j].insert(i);
        }
      }
    }
    neighbors.push_back(std::move(hop));
  }

  const MatrixXd& source = graph.features.at(path.types.back());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(source.cols());
  std::function<void(size_t, Index, double)> walk = [&](size_t hop, Index at, double weight) {
    if (hop == neighbors.size()) {
      sum += weight * source.row(at).transpose();
      return;
    }
    const auto& next = neighbors[hop][at];
    const double step = next.empty() ? 0.0 : 1.0 / static_cast<double>(next.size());
    for (Index j : next) walk(hop + 1, j, weight * step);
  };
  walk(0, node, 1.0);
  return sum;
}

}  // namespace sehgnn
