#pragma once

#include "sehgnn/metapath.hpp"

namespace sehgnn {

struct PrecomputeOptions {
  int max_hop_features = 2;
  int max_hop_labels = 2;
  bool memoize = true;
};

struct PrecomputeTimings {
  double features_ms = 0;
  double labels_ms = 0;
  double total_ms() const { return features_ms + labels_ms; }
};

/// Runs the whole neighbor-aggregation step once: enumerates both metapath
/// sets and materializes every semantic matrix, features first.
PrecomputedSet precompute(const HeteroGraph& graph, const PrecomputeOptions& options,
                          PrecomputeTimings* timings = nullptr);

}  // namespace sehgnn
