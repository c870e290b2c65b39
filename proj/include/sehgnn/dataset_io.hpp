#pragma once

#include "sehgnn/graph.hpp"

#include <filesystem>
#include <functional>

namespace sehgnn {

struct LoadOptions {
  /// Seeds the random features given to types with no features file.
  std::uint64_t featureless_seed = 0;
  /// Receives non-fatal notices (dropped duplicates and self-loops).
  /// Defaults to stderr.
  std::function<void(const std::string&)> on_warning;
};

/// Reads a dataset directory:
///   schema.json, edges/<relation>.tsv, features/<type>.tsv|.bin,
///   labels.tsv, splits.tsv
HeteroGraph load_graph(const std::filesystem::path& dir, const LoadOptions& options = {});

enum class FeatureFormat { tsv, bin };

/// Writes the same layout load_graph reads. TSV features are written with
/// round-trip precision; binary features are 32-bit.
void save_graph(const std::filesystem::path& dir, const HeteroGraph& graph,
                FeatureFormat format = FeatureFormat::tsv);

Schema parse_schema(const std::filesystem::path& file);

}  // namespace sehgnn
