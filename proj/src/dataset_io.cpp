#include "sehgnn/dataset_io.hpp"

#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

namespace sehgnn {

namespace fs = std::filesystem;

namespace {

std::uint64_t name_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ULL;
  return h;
}

SparseMatrix read_edges(const fs::path& file, const Relation& r, Index rows, Index cols,
                        const std::function<void(const std::string&)>& warn) {
  std::ifstream in(file);
  if (!in) throw DataError("missing file " + file.string());
  std::vector<Triplet> edges;
  std::string line;
  Index self_loops = 0;
  for (size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    std::istringstream row(line);
    Index s = 0;
    Index d = 0;
    if (!(row >> s >> d)) throw DataError(file.string() + ":" + std::to_string(n) + ": malformed edge");
    if (s < 0 || s >= rows || d < 0 || d >= cols) {
      throw DataError(file.string() + ":" + std::to_string(n) + ": node id out of range");
    }
    if (r.src == r.dst && s == d) {
      ++self_loops;
      continue;
    }
    edges.push_back({s, d, 1.0});
  }
  const auto raw = static_cast<Index>(edges.size());
  auto a = SparseMatrix::from_triplets(rows, cols, std::move(edges));
  std::fill(a.values.begin(), a.values.end(), 1.0);
  if (a.nnz() != raw) {
    warn("relation '" + r.name + "': dropped " + std::to_string(raw - a.nnz()) + " duplicate edges");
  }
  if (self_loops > 0) {
    warn("relation '" + r.name + "': dropped " + std::to_string(self_loops) + " self-loops");
  }
  return a;
}

MatrixXd read_features_tsv(const fs::path& file, const NodeType& t) {
  std::ifstream in(file);
  MatrixXd x(t.count, t.feature_dim);
  std::string line;
  Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= t.count) throw DataError(file.string() + ": more rows than node count");
    std::istringstream values(line);
    Index col = 0;
    double v = 0;
    while (values >> v) {
      if (col >= t.feature_dim) throw DataError(file.string() + ": row " + std::to_string(row) + " too wide");
      x(row, col++) = v;
    }
    if (col != t.feature_dim) throw DataError(file.string() + ": row " + std::to_string(row) + " too narrow");
    ++row;
  }
  if (row != t.count) throw DataError(file.string() + ": expected " + std::to_string(t.count) + " rows");
  return x;
}

MatrixXd read_features_bin(const fs::path& file, const NodeType& t) {
  std::ifstream in(file, std::ios::binary);
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  in.read(reinterpret_cast<char*>(&rows), 8);
  in.read(reinterpret_cast<char*>(&cols), 8);
  if (!in || static_cast<Index>(rows) != t.count || static_cast<Index>(cols) != t.feature_dim) {
    throw DataError(file.string() + ": header shape disagrees with schema");
  }
  Matrix<float> body(t.count, t.feature_dim);
  if (!in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(body.size() * sizeof(float)))) {
    throw DataError(file.string() + ": truncated body");
  }
  return body.cast<double>();
}

}  // namespace

Schema parse_schema(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("missing file " + file.string());
  Schema s;
  try {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& t : doc.at("node_types")) {
      s.node_types.push_back({t.at("name").get<std::string>(), t.at("count").get<Index>(),
                              t.at("feature_dim").get<Index>()});
    }
    for (const auto& r : doc.at("relations")) {
      s.relations.push_back({r.at("name").get<std::string>(), r.at("src").get<std::string>(),
                             r.at("dst").get<std::string>()});
    }
    s.target_type = doc.at("target_type").get<std::string>();
    s.num_classes = doc.at("num_classes").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(file.string() + ": " + e.what());
  }
  s.validate();
  return s;
}

HeteroGraph load_graph(const fs::path& dir, const LoadOptions& options) {
  auto warn = options.on_warning;
  if (!warn) warn = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };

  HeteroGraph g;
  g.schema = parse_schema(dir / "schema.json");
  for (const auto& r : g.schema.relations) {
    g.adjacency.emplace(r.name, read_edges(dir / "edges" / (r.name + ".tsv"), r, g.schema.type(r.src).count,
                                           g.schema.type(r.dst).count, warn));
  }
  for (const auto& t : g.schema.node_types) {
    const auto tsv = dir / "features" / (t.name + ".tsv");
    const auto bin = dir / "features" / (t.name + ".bin");
    if (fs::exists(tsv)) {
      g.features.emplace(t.name, read_features_tsv(tsv, t));
    } else if (fs::exists(bin)) {
      g.features.emplace(t.name, read_features_bin(bin, t));
    } else {
      std::mt19937_64 rng(name_seed(options.featureless_seed, t.name));
      std::normal_distribution<double> normal(0.0, 1.0);
      MatrixXd x(t.count, t.feature_dim);
      for (Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
      g.features.emplace(t.name, std::move(x));
    }
  }
  g.labels = read_label_files(dir, g.num_target_nodes(), g.schema.num_classes);
  g.validate();
  return g;
}

void save_graph(const fs::path& dir, const HeteroGraph& graph, FeatureFormat format) {
  fs::create_directories(dir / "edges");
  fs::create_directories(dir / "features");

  nlohmann::json schema;
  auto& types = schema["node_types"] = nlohmann::json::array();
  for (const auto& t : graph.schema.node_types) {
    types.push_back({{"name", t.name}, {"count", t.count}, {"feature_dim", t.feature_dim}});
  }
  auto& rels = schema["relations"] = nlohmann::json::array();
  for (const auto& r : graph.schema.relations) {
    rels.push_back({{"name", r.name}, {"src", r.src}, {"dst", r.dst}});
  }
  schema["target_type"] = graph.schema.target_type;
  schema["num_classes"] = graph.schema.num_classes;
  std::ofstream(dir / "schema.json") << schema.dump(2) << '\n';

  for (const auto& r : graph.schema.relations) {
    std::ofstream out(dir / "edges" / (r.name + ".tsv"));
    const auto& a = graph.adjacency.at(r.name);
    for (Index i = 0; i < a.n_rows; ++i) {
      for (Index j : a.row_cols(i)) out << i << '\t' << j << '\n';
    }
  }

  for (const auto& [name, x] : graph.features) {
    if (format == FeatureFormat::bin) {
      std::ofstream out(dir / "features" / (name + ".bin"), std::ios::binary);
      const std::uint64_t rows = x.rows();
      const std::uint64_t cols = x.cols();
      out.write(reinterpret_cast<const char*>(&rows), 8);
      out.write(reinterpret_cast<const char*>(&cols), 8);
      const Matrix<float> body = x.cast<float>();
      out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size() * sizeof(float)));
      continue;
    }
    std::ofstream out(dir / "features" / (name + ".tsv"));
    out.precision(std::numeric_limits<double>::max_digits10);
    for (Index i = 0; i < x.rows(); ++i) {
      for (Index j = 0; j < x.cols(); ++j) out << (j ? "\t" : "") << x(i, j);
      out << '\n';
    }
  }
  write_label_files(dir, graph.labels);
}

}  // namespace sehgnn
