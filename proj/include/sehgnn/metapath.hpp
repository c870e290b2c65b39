#pragma once

#include "sehgnn/graph.hpp"
#include "sehgnn/semantic.hpp"

#include <span>

namespace sehgnn {

/// Every walk over the type graph (relations in both directions) that starts at
/// the target type and has at most `max_hop` hops, including the 0-hop path.
/// Sorted with metapath_less.
std::vector<Metapath> enumerate_feature_metapaths(const Schema& schema, int max_hop);

/// Every target-to-target walk with 2..max_hop hops. Empty for max_hop < 2.
std::vector<Metapath> enumerate_label_metapaths(const Schema& schema, int max_hop);

struct MetapathSet {
  std::vector<Metapath> feature_paths;
  std::vector<Metapath> label_paths;
};

MetapathSet enumerate_metapaths(const Schema& schema, int max_hop_features, int max_hop_labels);

/// Throws DataError unless the path starts at the target type, walks declared
/// relations, and (for label paths) returns to the target type after >= 2 hops.
void validate_metapath(const Schema& schema, const Metapath& path);

struct PropagationOptions {
  /// Reuse shared suffix (features) / prefix (labels) products across paths.
  bool memoize = true;
};

/// X^P = Â_{c,c1} ... Â_{c(l-1),cl} X^{cl}, evaluated right to left.
std::vector<SemanticMatrix> propagate_features(const HeteroGraph& graph, std::span<const Metapath> paths,
                                               const PropagationOptions& options = {});

/// Y^P = rm_diag(Â_{c,c1} ... Â_{c(l-1),c}) Y, with Y one-hot on train nodes.
std::vector<SemanticMatrix> propagate_labels(const HeteroGraph& graph, std::span<const Metapath> paths,
                                             const PropagationOptions& options = {});

/// Brute-force reference for one row of propagate_features: enumerates every
/// metapath instance rooted at `node` depth-first and sums the source features
/// weighted by the product of inverse out-degrees along the instance.
Eigen::VectorXd oracle_aggregate(const HeteroGraph& graph, const Metapath& path, Index node);

inline constexpr int kOracleMaxHop = 4;

}  // namespace sehgnn
