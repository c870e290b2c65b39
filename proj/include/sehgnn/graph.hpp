#pragma once

#include "sehgnn/common.hpp"
#include "sehgnn/labels.hpp"
#include "sehgnn/sparse.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sehgnn {

struct NodeType {
  std::string name;
  Index count = 0;
  Index feature_dim = 0;

  bool operator==(const NodeType&) const = default;
};

struct Relation {
  std::string name;
  std::string src;
  std::string dst;

  bool operator==(const Relation&) const = default;
};

struct Schema {
  std::vector<NodeType> node_types;
  std::vector<Relation> relations;
  std::string target_type;
  int num_classes = 0;

  /// Throws DataError on duplicate names, dangling relation endpoints,
  /// empty types, num_classes < 2, or a target type with no incident relation.
  void validate() const;

  bool has_type(std::string_view name) const;
  const NodeType& type(std::string_view name) const;
  const Relation& relation(std::string_view name) const;

  /// Types reachable in one hop, through a relation in either direction.
  /// Sorted by name.
  std::vector<std::string> adjacent_types(std::string_view type) const;

  bool operator==(const Schema&) const = default;
};

/// Typed graph. Adjacency is binary and keyed by relation name; features are
/// keyed by type name. Immutable once built and validated.
struct HeteroGraph {
  Schema schema;
  std::map<std::string, SparseMatrix> adjacency;
  std::map<std::string, MatrixXd> features;
  LabelTable labels;

  void validate() const;

  Index num_target_nodes() const { return schema.type(schema.target_type).count; }
  Index num_edges() const;

  /// Binary adjacency from type `src` to type `dst`: the union of every
  /// relation src->dst and the transpose of every relation dst->src.
  SparseMatrix type_adjacency(std::string_view src, std::string_view dst) const;

  /// FNV-1a over schema, edges, features and labels, as 16 hex digits.
  std::string content_hash() const;

  bool operator==(const HeteroGraph&) const = default;
};

}  // namespace sehgnn
