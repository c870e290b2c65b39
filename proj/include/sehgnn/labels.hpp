#pragma once

#include "sehgnn/common.hpp"

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace sehgnn {

enum class Split : std::uint8_t { none, train, val, test };

std::string_view to_string(Split split);
Split parse_split(std::string_view text);

/// Per-target-node class ids and split membership.
struct LabelTable {
  static constexpr int kUnlabeled = -1;

  std::vector<int> labels;
  std::vector<Split> splits;

  explicit LabelTable(Index num_nodes = 0)
      : labels(static_cast<size_t>(num_nodes), kUnlabeled),
        splits(static_cast<size_t>(num_nodes), Split::none) {}

  Index size() const { return static_cast<Index>(labels.size()); }
  bool is_labeled(Index node) const { return labels[node] != kUnlabeled; }

  /// Node ids in the given split, ascending.
  std::vector<Index> rows_in(Split split) const;

  /// One-hot rows for train nodes, zero rows elsewhere.
  MatrixXd train_one_hot(int num_classes) const;

  /// Throws DataError when a train/val node lacks a label or a class id is out
  /// of range.
  void validate(int num_classes) const;

  bool operator==(const LabelTable&) const = default;
};

/// `labels.tsv` (node_id, class_id) and `splits.tsv` (node_id, split name).
void write_label_files(const std::filesystem::path& dir, const LabelTable& table);
LabelTable read_label_files(const std::filesystem::path& dir, Index num_nodes, int num_classes);

}  // namespace sehgnn
