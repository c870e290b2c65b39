#include "sehgnn/semantic.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <tuple>

#include <json.hpp>

namespace sehgnn {

static_assert(std::endian::native == std::endian::little,
              "binary formats are little-endian and written with host byte order");

namespace {

constexpr std::array<char, 4> kSmxMagic{'S', 'M', 'X', '1'};

template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::filesystem::path& file) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw DataError(file.string() + ": truncated");
  }
  return value;
}

}  // namespace

std::string_view to_string(MetapathKind kind) {
  return kind == MetapathKind::label ? "label" : "feature";
}

MetapathKind parse_metapath_kind(std::string_view text) {
  if (text == "feature") return MetapathKind::feature;
  if (text == "label") return MetapathKind::label;
  throw DataError("unknown metapath kind '" + std::string(text) + "'");
}

std::string Metapath::canonical() const {
  std::string s;
  s.reserve(types.size());
  for (const auto& t : types) s.push_back(t.empty() ? '?' : t.front());
  return s;
}

std::string Metapath::id() const {
  return kind == MetapathKind::label ? canonical() + ".label" : canonical();
}

bool metapath_less(const Metapath& a, const Metapath& b) {
  return std::make_tuple(a.hops(), a.canonical(), a.kind) <
         std::make_tuple(b.hops(), b.canonical(), b.kind);
}

void write_smx(const std::filesystem::path& file, const MatrixXd& matrix) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write " + file.string());
  out.write(kSmxMagic.data(), kSmxMagic.size());
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.rows()));
  write_pod<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.cols()));
  out.write(reinterpret_cast<const char*>(matrix.data()),
            static_cast<std::streamsize>(matrix.size() * sizeof(double)));
  if (!out) throw DataError("write failed for " + file.string());
}

MatrixXd read_smx(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("missing file " + file.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kSmxMagic) throw DataError(file.string() + ": bad magic, expected SMX1");
  const auto rows = read_pod<std::uint64_t>(in, file);
  const auto cols = read_pod<std::uint64_t>(in, file);
  MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
  if (!in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)))) {
    throw DataError(file.string() + ": truncated body");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError(file.string() + ": trailing bytes after body");
  }
  return m;
}

std::vector<std::string> PrecomputedSet::metapath_ids() const {
  std::vector<std::string> ids;
  ids.reserve(matrices.size());
  for (const auto& m : matrices) ids.push_back(m.path.id());
  return ids;
}

std::string read_manifest_hash(const std::filesystem::path& dir) {
  const auto file = dir / "manifest.json";
  if (!std::filesystem::exists(file)) return {};
  std::ifstream in(file);
  try {
    return nlohmann::json::parse(in).at("graph_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(file.string() + ": " + e.what());
  }
}

void write_precomputed(const std::filesystem::path& dir, const PrecomputedSet& set) {
  std::filesystem::create_directories(dir);
  const auto existing = read_manifest_hash(dir);
  if (!existing.empty() && existing != set.graph_hash) {
    throw DataError("output directory " + dir.string() + " holds a manifest for graph " + existing +
                    ", refusing to overwrite with graph " + set.graph_hash);
  }

  nlohmann::json manifest;
  manifest["version"] = 1;
  manifest["graph_hash"] = set.graph_hash;
  manifest["target_type"] = set.target_type;
  manifest["num_classes"] = set.num_classes;
  manifest["num_target_nodes"] = set.num_target_nodes();
  manifest["max_hop_features"] = set.max_hop_features;
  manifest["max_hop_labels"] = set.max_hop_labels;
  manifest["labels_file"] = "labels.tsv";
  manifest["splits_file"] = "splits.tsv";
  auto& paths = manifest["metapaths"] = nlohmann::json::array();
  for (const auto& m : set.matrices) {
    const auto file = m.path.id() + ".smx";
    write_smx(dir / file, m.matrix);
    paths.push_back({{"canonical", m.path.canonical()},
                     {"kind", to_string(m.path.kind)},
                     {"types", m.path.types},
                     {"rows", m.matrix.rows()},
                     {"cols", m.matrix.cols()},
                     {"file", file}});
  }
  write_label_files(dir, set.labels);
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw DataError("cannot write manifest in " + dir.string());
}

PrecomputedSet load_precomputed(const std::filesystem::path& dir) {
  const auto file = dir / "manifest.json";
  std::ifstream in(file);
  if (!in) throw DataError("missing file " + file.string());
  PrecomputedSet set;
  try {
    const auto manifest = nlohmann::json::parse(in);
    set.graph_hash = manifest.at("graph_hash").get<std::string>();
    set.target_type = manifest.at("target_type").get<std::string>();
    set.num_classes = manifest.at("num_classes").get<int>();
    set.max_hop_features = manifest.at("max_hop_features").get<int>();
    set.max_hop_labels = manifest.at("max_hop_labels").get<int>();
    const auto n = manifest.at("num_target_nodes").get<Index>();
    for (const auto& entry : manifest.at("metapaths")) {
      SemanticMatrix m;
      m.path.types = entry.at("types").get<std::vector<std::string>>();
      m.path.kind = parse_metapath_kind(entry.at("kind").get<std::string>());
      m.matrix = read_smx(dir / entry.at("file").get<std::string>());
      if (m.matrix.rows() != n || m.matrix.rows() != entry.at("rows").get<Index>() ||
          m.matrix.cols() != entry.at("cols").get<Index>()) {
        throw DataError(entry.at("file").get<std::string>() + ": shape disagrees with manifest");
      }
      set.matrices.push_back(std::move(m));
    }
    set.labels = read_label_files(dir, n, set.num_classes);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(file.string() + ": " + e.what());
  }
  return set;
}

}  // namespace sehgnn
