#pragma once

#include "sehgnn/graph.hpp"

#include <map>

namespace sehgnn {

struct SyntheticRelation {
  std::string name;
  std::string src;
  std::string dst;
  /// Mean out-degree of a source node before `edge_scale` is applied.
  double avg_degree = 1.0;
};

/// Planted-community generator. Every node has a latent community; edges
/// prefer endpoints of the source's community; features are Gaussian around a
/// per-type, per-community mean. A target node's class is the majority
/// community among its 2-hop target-type neighbors, so the label is a
/// structural property that raw features only hint at.
struct SyntheticConfig {
  std::vector<NodeType> node_types;
  std::vector<SyntheticRelation> relations;
  std::string target_type;
  int num_classes = 3;

  double homophily = 0.8;
  double edge_scale = 1.0;
  /// Per-type feature noise standard deviation; class means are unit normal.
  std::map<std::string, double> feature_noise;
  double train_fraction = 0.24;
  double val_fraction = 0.06;

  /// P (target) / A / S with relations P->A, P->S, P->P.
  static SyntheticConfig acm_like();
  /// A (target) / P / T / V with relations A->P, P->T, P->V.
  static SyntheticConfig dblp_like();

  Schema schema() const;
};

HeteroGraph gen_synthetic(const SyntheticConfig& config, std::uint64_t seed);

}  // namespace sehgnn
