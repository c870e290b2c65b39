#include "sehgnn/precompute.hpp"

#include <chrono>

namespace sehgnn {

PrecomputedSet precompute(const HeteroGraph& graph, const PrecomputeOptions& options, PrecomputeTimings* timings) {
  using Clock = std::chrono::steady_clock;
  const auto paths = enumerate_metapaths(graph.schema, options.max_hop_features, options.max_hop_labels);
  const PropagationOptions propagation{options.memoize};

  PrecomputedSet set;
  set.graph_hash = graph.content_hash();
  set.target_type = graph.schema.target_type;
  set.num_classes = graph.schema.num_classes;
  set.max_hop_features = options.max_hop_features;
  set.max_hop_labels = options.max_hop_labels;
  set.labels = graph.labels;

  const auto t0 = Clock::now();
  set.matrices = propagate_features(graph, paths.feature_paths, propagation);
  const auto t1 = Clock::now();
  auto labels = propagate_labels(graph, paths.label_paths, propagation);
  const auto t2 = Clock::now();
  for (auto& m : labels) set.matrices.push_back(std::move(m));

  if (timings) {
    timings->features_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    timings->labels_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  }
  return set;
}

}  // namespace sehgnn
