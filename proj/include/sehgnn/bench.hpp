#pragma once

#include "sehgnn/synthetic.hpp"
#include "sehgnn/train.hpp"

namespace sehgnn {

struct BenchOptions {
  SyntheticConfig graph = SyntheticConfig::acm_like();
  std::uint64_t seed = 0;
  int max_hop_features = 2;
  int max_hop_labels = 2;
  /// Edge-density multipliers; N, K and D stay fixed across them.
  std::vector<double> edge_scales{1.0, 2.0, 4.0};
  /// Optional metapath-count sweep at the first edge scale, using the first K
  /// matrices of the full set.
  std::vector<Index> metapath_counts;
  RunConfig run;
  int warmup_epochs = 5;
  int timed_epochs = 20;
  int precompute_repeats = 3;
  /// Training runs per point, interleaved across points; timed epochs pool
  /// over rounds.
  int rounds = 3;
  /// Node counts double until the smallest point's phases exceed this.
  double min_phase_ms = 1.0;
  int max_size_doublings = 4;
};

struct BenchPoint {
  std::string sweep;  // "edges" or "k"
  double edge_scale = 1.0;
  Index target_nodes = 0;
  Index total_edges = 0;
  Index metapaths = 0;
  Index hidden = 0;
  double precompute_ms = 0;  // median over repeats
  double epoch_ms = 0;       // mean over timed epochs
  double warmup_ms = 0;
  double timed_ms = 0;
  double total_ms = 0;  // precompute + warmup + timed
  int timed_epochs = 0;
};

struct BenchReport {
  std::vector<BenchPoint> points;
  int size_doublings = 0;
  /// max/min - 1 of epoch_ms over the edge sweep.
  double epoch_spread = 0;
  bool precompute_increasing = false;

  std::vector<BenchPoint> sweep(std::string_view name) const;
  nlohmann::json to_json() const;
};

BenchReport run_bench(const BenchOptions& options);

}  // namespace sehgnn
