#pragma once

#include "sehgnn/checkpoint.hpp"
#include "sehgnn/labels.hpp"
#include "sehgnn/metrics.hpp"
#include "sehgnn/model.hpp"

#include <filesystem>
#include <json.hpp>

namespace sehgnn {

struct RunConfig {
  /// Hop bounds the semantic matrices are expected to have been built with;
  /// negative disables the check.
  int max_hop_features = -1;
  int max_hop_labels = -1;
  Index hidden = 64;
  double dropout = 0.5;
  double learning_rate = 1e-3;
  double weight_decay = 0.0;
  int max_epochs = 300;
  int patience = 30;
  std::uint64_t seed = 0;
  FusionMode fusion = FusionMode::transformer;
  Precision precision = Precision::f64;
  /// 0 trains full-batch on every train node each step.
  Index batch_size = 0;
  int classifier_layers = 2;
  bool scale_attention = false;
  /// Empty accepts any precomputed graph.
  std::string expected_graph_hash;

  void validate() const;
};

/// Applies one `key = value` setting; throws std::invalid_argument on an
/// unknown key or malformed value.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat key/value text: one `key = value` per line, `#` starts a comment.
RunConfig parse_run_config(std::string_view text, RunConfig base = {});
RunConfig load_run_config(const std::filesystem::path& file, RunConfig base = {});

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  Metrics val;
  double epoch_ms = 0;  // optimizer steps only
  double eval_ms = 0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;
  Metrics val;   // at best_epoch
  Metrics test;  // at best_epoch
  double precompute_ms = 0;
  double epoch_ms_mean = 0;
  double eval_ms_mean = 0;

  /// Without timing, two runs with the same seed serialize identically.
  nlohmann::json to_json(bool include_timing = true) const;
};

nlohmann::json to_json(const Metrics& metrics);

struct TrainResult {
  Checkpoint checkpoint;  // parameters from the best validation epoch
  TrainReport report;
};

/// Runs the epoch loop on precomputed semantic matrices: Adam steps on the
/// train split, validation micro-f1 after every epoch, early stopping after
/// `patience` epochs without improvement. Never sees graph structure.
TrainResult train(std::span<const SemanticMatrix> matrices, const LabelTable& labels, int num_classes,
                  const RunConfig& config);

/// Class probabilities for every row of the semantic matrices, computed in
/// the checkpoint's precision with dropout off.
MatrixXd predict(const Checkpoint& checkpoint, std::span<const SemanticMatrix> matrices);

}  // namespace sehgnn
