#include "sehgnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

namespace sehgnn {

void Schema::validate() const {
  std::set<std::string> names;
  for (const auto& t : node_types) {
    if (t.name.empty()) throw DataError("schema: empty node type name");
    if (!names.insert(t.name).second) throw DataError("schema: duplicate node type '" + t.name + "'");
    if (t.count < 1) throw DataError("schema: node type '" + t.name + "' has no nodes");
    if (t.feature_dim < 1) throw DataError("schema: node type '" + t.name + "' has no feature dimension");
  }
  std::set<std::string> rel_names;
  bool target_incident = false;
  for (const auto& r : relations) {
    if (!rel_names.insert(r.name).second) throw DataError("schema: duplicate relation '" + r.name + "'");
    if (!names.count(r.src) || !names.count(r.dst)) {
      throw DataError("schema: relation '" + r.name + "' references an undeclared type");
    }
    target_incident = target_incident || r.src == target_type || r.dst == target_type;
  }
  if (!names.count(target_type)) throw DataError("schema: undeclared target type '" + target_type + "'");
  if (num_classes < 2) throw DataError("schema: num_classes must be at least 2");
  if (!target_incident) throw DataError("schema: no relation touches target type '" + target_type + "'");
}

bool Schema::has_type(std::string_view name) const {
  return std::any_of(node_types.begin(), node_types.end(), [&](const auto& t) { return t.name == name; });
}

const NodeType& Schema::type(std::string_view name) const {
  for (const auto& t : node_types) {
    if (t.name == name) return t;
  }
  throw DataError("schema: unknown node type '" + std::string(name) + "'");
}

const Relation& Schema::relation(std::string_view name) const {
  for (const auto& r : relations) {
    if (r.name == name) return r;
  }
  throw DataError("schema: unknown relation '" + std::string(name) + "'");
}

std::vector<std::string> Schema::adjacent_types(std::string_view type) const {
  std::set<std::string> out;
  for (const auto& r : relations) {
    if (r.src == type) out.insert(r.dst);
    if (r.dst == type) out.insert(r.src);
  }
  return {out.begin(), out.end()};
}

void HeteroGraph::validate() const {
  schema.validate();
  for (const auto& r : schema.relations) {
    auto it = adjacency.find(r.name);
    if (it == adjacency.end()) throw DataError("graph: missing adjacency for relation '" + r.name + "'");
    const auto& a = it->second;
    if (a.n_rows != schema.type(r.src).count || a.n_cols != schema.type(r.dst).count) {
      throw DataError("graph: adjacency of '" + r.name + "' has wrong shape");
    }
    if (!a.is_canonical()) throw DataError("graph: adjacency of '" + r.name + "' not canonical");
  }
  for (const auto& t : schema.node_types) {
    auto it = features.find(t.name);
    if (it == features.end()) throw DataError("graph: missing features for type '" + t.name + "'");
    if (it->second.rows() != t.count || it->second.cols() != t.feature_dim) {
      throw DataError("graph: features of '" + t.name + "' have wrong shape");
    }
    if (!it->second.allFinite()) throw DataError("graph: non-finite features for '" + t.name + "'");
  }
  if (labels.size() != num_target_nodes()) throw DataError("graph: label table size mismatch");
  labels.validate(schema.num_classes);
}

Index HeteroGraph::num_edges() const {
  Index e = 0;
  for (const auto& [name, a] : adjacency) e += a.nnz();
  return e;
}

SparseMatrix HeteroGraph::type_adjacency(std::string_view src, std::string_view dst) const {
  SparseMatrix acc(schema.type(src).count, schema.type(dst).count);
  bool any = false;
  for (const auto& r : schema.relations) {
    if (r.src == src && r.dst == dst) {
      acc = binary_union(acc, adjacency.at(r.name));
      any = true;
    }
    if (r.dst == src && r.src == dst) {
      acc = binary_union(acc, adjacency.at(r.name).transpose());
      any = true;
    }
  }
  if (!any) {
    throw DataError("graph: no relation between '" + std::string(src) + "' and '" + std::string(dst) + "'");
  }
  return acc;
}

namespace {

struct Fnv1a {
  std::uint64_t state = 1469598103934665603ULL;

  void bytes(const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      state ^= p[i];
      state *= 1099511628211ULL;
    }
  }
  template <typename T>
  void pod(const T& v) {
    bytes(&v, sizeof(T));
  }
  void str(const std::string& s) {
    pod<std::uint64_t>(s.size());
    bytes(s.data(), s.size());
  }
};

}  // namespace

std::string HeteroGraph::content_hash() const {
  Fnv1a h;
  for (const auto& t : schema.node_types) {
    h.str(t.name);
    h.pod(t.count);
    h.pod(t.feature_dim);
  }
  for (const auto& r : schema.relations) {
    h.str(r.name);
    h.str(r.src);
    h.str(r.dst);
    const auto& a = adjacency.at(r.name);
    h.bytes(a.row_offsets.data(), a.row_offsets.size() * sizeof(Index));
    h.bytes(a.col_indices.data(), a.col_indices.size() * sizeof(Index));
  }
  h.str(schema.target_type);
  h.pod(schema.num_classes);
  for (const auto& [name, x] : features) {
    h.str(name);
    h.bytes(x.data(), static_cast<size_t>(x.size()) * sizeof(double));
  }
  h.bytes(labels.labels.data(), labels.labels.size() * sizeof(int));
  h.bytes(labels.splits.data(), labels.splits.size() * sizeof(Split));

  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = kHex[h.state & 0xF];
    h.state >>= 4;
  }
  return out;
}

}  // namespace sehgnn
