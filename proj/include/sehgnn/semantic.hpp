#pragma once

#include "sehgnn/common.hpp"
#include "sehgnn/labels.hpp"

#include <compare>
#include <filesystem>
#include <string>
#include <vector>

namespace sehgnn {

enum class MetapathKind : std::uint8_t { feature, label };

std::string_view to_string(MetapathKind kind);
MetapathKind parse_metapath_kind(std::string_view text);

/// A node-type sequence anchored at the target type. `types.size() - 1` is the
/// hop count; a single type is the 0-hop path (the node's own features).
struct Metapath {
  std::vector<std::string> types;
  MetapathKind kind = MetapathKind::feature;

  int hops() const { return static_cast<int>(types.size()) - 1; }

  /// Concatenated type initials, e.g. "APA".
  std::string canonical() const;

  /// Unique across kinds: the canonical string, with ".label" appended for
  /// label paths. Used as the file stem and the checkpoint key.
  std::string id() const;

  bool operator==(const Metapath&) const = default;
};

/// Deterministic order: hop count, then canonical string, features first.
bool metapath_less(const Metapath& a, const Metapath& b);

/// Dense per-metapath matrix with one row per target node.
struct SemanticMatrix {
  Metapath path;
  MatrixXd matrix;
};

/// `.smx`: magic "SMX1", u64 rows, u64 cols, then f64 row-major, little-endian.
void write_smx(const std::filesystem::path& file, const MatrixXd& matrix);
MatrixXd read_smx(const std::filesystem::path& file);

/// Everything the training side needs, with no reference to graph structure.
struct PrecomputedSet {
  std::string graph_hash;
  std::string target_type;
  int num_classes = 0;
  int max_hop_features = 0;
  int max_hop_labels = 0;
  std::vector<SemanticMatrix> matrices;
  LabelTable labels;

  Index num_target_nodes() const { return labels.size(); }
  std::vector<std::string> metapath_ids() const;
};

/// Writes `manifest.json`, one `.smx` per matrix, and the label/split files.
/// Refuses (DataError) when `dir` already holds a manifest for another graph.
void write_precomputed(const std::filesystem::path& dir, const PrecomputedSet& set);

/// Reads a directory produced by write_precomputed. Never touches dataset files.
PrecomputedSet load_precomputed(const std::filesystem::path& dir);

/// Reads only the graph hash from an existing manifest, or "" if none exists.
std::string read_manifest_hash(const std::filesystem::path& dir);

}  // namespace sehgnn
