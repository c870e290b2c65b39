#include "sehgnn/labels.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace sehgnn {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train:
      return "train";
    case Split::val:
      return "val";
    case Split::test:
      return "test";
    case Split::none:
      break;
  }
  return "none";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::train;
  if (text == "val") return Split::val;
  if (text == "test") return Split::test;
  throw DataError("unknown split '" + std::string(text) + "'");
}

std::vector<Index> LabelTable::rows_in(Split split) const {
  std::vector<Index> rows;
  for (Index i = 0; i < size(); ++i) {
    if (splits[i] == split) rows.push_back(i);
  }
  return rows;
}

MatrixXd LabelTable::train_one_hot(int num_classes) const {
  MatrixXd y = MatrixXd::Zero(size(), num_classes);
  for (Index i = 0; i < size(); ++i) {
    if (splits[i] == Split::train && is_labeled(i)) y(i, labels[i]) = 1.0;
  }
  return y;
}

void LabelTable::validate(int num_classes) const {
  if (labels.size() != splits.size()) {
    throw DataError("label table: labels and splits differ in length");
  }
  for (Index i = 0; i < size(); ++i) {
    if (labels[i] != kUnlabeled && (labels[i] < 0 || labels[i] >= num_classes)) {
      throw DataError("label table: class id " + std::to_string(labels[i]) + " of node " +
                      std::to_string(i) + " outside [0, " + std::to_string(num_classes) + ")");
    }
    if ((splits[i] == Split::train || splits[i] == Split::val) && !is_labeled(i)) {
      throw DataError("label table: node " + std::to_string(i) + " is in the " +
                      std::string(to_string(splits[i])) + " split but unlabeled");
    }
  }
}

void write_label_files(const std::filesystem::path& dir, const LabelTable& table) {
  std::ofstream labels(dir / "labels.tsv");
  std::ofstream splits(dir / "splits.tsv");
  if (!labels || !splits) {
    throw DataError("cannot write label files in " + dir.string());
  }
  for (Index i = 0; i < table.size(); ++i) {
    if (table.is_labeled(i)) labels << i << '\t' << table.labels[i] << '\n';
    if (table.splits[i] != Split::none) splits << i << '\t' << to_string(table.splits[i]) << '\n';
  }
}

LabelTable read_label_files(const std::filesystem::path& dir, Index num_nodes, int num_classes) {
  LabelTable table(num_nodes);
  auto node_id = [&](Index id, const std::filesystem::path& file, size_t line) {
    if (id < 0 || id >= num_nodes) {
      throw DataError(file.string() + ":" + std::to_string(line) + ": node id " +
                      std::to_string(id) + " out of range");
    }
    return id;
  };

  const auto labels_path = dir / "labels.tsv";
  std::ifstream labels(labels_path);
  if (!labels) throw DataError("missing file " + labels_path.string());
  std::string line;
  for (size_t n = 1; std::getline(labels, line); ++n) {
    if (line.empty()) continue;
    std::istringstream row(line);
    Index id = 0;
    int cls = 0;
    if (!(row >> id >> cls)) throw DataError(labels_path.string() + ":" + std::to_string(n) + ": malformed row");
    table.labels[node_id(id, labels_path, n)] = cls;
  }

  const auto splits_path = dir / "splits.tsv";
  std::ifstream splits(splits_path);
  if (!splits) throw DataError("missing file " + splits_path.string());
  for (size_t n = 1; std::getline(splits, line); ++n) {
    if (line.empty()) continue;
    std::istringstream row(line);
    Index id = 0;
    std::string name;
    if (!(row >> id >> name)) throw DataError(splits_path.string() + ":" + std::to_string(n) + ": malformed row");
    table.splits[node_id(id, splits_path, n)] = parse_split(name);
  }

  table.validate(num_classes);
  return table;
}

}  // namespace sehgnn
