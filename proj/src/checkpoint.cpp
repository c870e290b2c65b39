#include "sehgnn/checkpoint.hpp"

#include <array>
#include <fstream>

namespace sehgnn {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'E', 'H', '1'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::filesystem::path& file) : out_(file, std::ios::binary), file_(file) {
    if (!out_) throw DataError("cannot write " + file.string());
  }
  template <typename T>
  void pod(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void str(const std::string& s) {
    pod<std::uint64_t>(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void raw(const void* data, size_t n) { out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n)); }
  void finish() {
    out_.flush();
    if (!out_) throw DataError("write failed for " + file_.string());
  }

 private:
  std::ofstream out_;
  std::filesystem::path file_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& file) : in_(file, std::ios::binary), file_(file) {
    if (!in_) throw DataError("missing file " + file.string());
  }
  template <typename T>
  T pod() {
    T v{};
    raw(&v, sizeof(T));
    return v;
  }
  std::string str() {
    const auto n = pod<std::uint64_t>();
    if (n > (1u << 20)) throw DataError(file_.string() + ": implausible string length");
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }
  void raw(void* data, size_t n) {
    if (!in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n))) {
      throw DataError(file_.string() + ": truncated checkpoint");
    }
  }

 private:
  std::ifstream in_;
  std::filesystem::path file_;
};

}  // namespace

std::string_view to_string(Precision precision) { return precision == Precision::f32 ? "f32" : "f64"; }

Precision parse_precision(std::string_view text) {
  if (text == "f64" || text == "64") return Precision::f64;
  if (text == "f32" || text == "32") return Precision::f32;
  throw std::invalid_argument("unknown precision '" + std::string(text) + "'");
}

void save_checkpoint(const std::filesystem::path& file, const Checkpoint& checkpoint) {
  const auto& p = checkpoint.params;
  const auto& c = p.config;
  Writer w(file);
  w.raw(kMagic.data(), kMagic.size());
  w.pod(kVersion);
  w.pod<std::int64_t>(c.hidden);
  w.pod<std::int64_t>(c.num_classes);
  w.pod<std::uint8_t>(static_cast<std::uint8_t>(c.fusion));
  w.pod<std::int64_t>(c.projection_layers);
  w.pod<std::int64_t>(c.classifier_layers);
  w.pod<double>(c.dropout);
  w.pod<std::uint8_t>(c.scale_attention ? 1 : 0);
  w.pod<std::uint8_t>(static_cast<std::uint8_t>(checkpoint.precision));
  w.pod<std::uint64_t>(c.metapaths.size());
  for (size_t k = 0; k < c.metapaths.size(); ++k) {
    w.str(c.metapaths[k]);
    w.pod<std::int64_t>(c.input_widths[k]);
  }
  const auto tensors = p.tensors();
  w.pod<std::uint64_t>(tensors.size());
  for (const auto* t : tensors) {
    w.pod<std::uint64_t>(static_cast<std::uint64_t>(t->rows()));
    w.pod<std::uint64_t>(static_cast<std::uint64_t>(t->cols()));
    w.raw(t->data(), static_cast<size_t>(t->size()) * sizeof(double));
  }
  w.finish();
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
  Reader r(file);
  std::array<char, 4> magic{};
  r.raw(magic.data(), magic.size());
  if (magic != kMagic) throw DataError(file.string() + ": not a checkpoint (bad magic)");
  if (const auto v = r.pod<std::uint32_t>(); v != kVersion) {
    throw DataError(file.string() + ": unsupported checkpoint version " + std::to_string(v));
  }
  ModelConfig c;
  c.hidden = r.pod<std::int64_t>();
  c.num_classes = static_cast<int>(r.pod<std::int64_t>());
  const auto fusion = r.pod<std::uint8_t>();
  if (fusion > 1) throw DataError(file.string() + ": bad fusion mode");
  c.fusion = static_cast<FusionMode>(fusion);
  c.projection_layers = static_cast<int>(r.pod<std::int64_t>());
  c.classifier_layers = static_cast<int>(r.pod<std::int64_t>());
  c.dropout = r.pod<double>();
  c.scale_attention = r.pod<std::uint8_t>() != 0;
  const auto precision = r.pod<std::uint8_t>();
  if (precision > 1) throw DataError(file.string() + ": bad precision tag");
  const auto k = r.pod<std::uint64_t>();
  if (k > 100000) throw DataError(file.string() + ": implausible metapath count");
  for (std::uint64_t i = 0; i < k; ++i) {
    c.metapaths.push_back(r.str());
    c.input_widths.push_back(r.pod<std::int64_t>());
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(file.string() + ": " + e.what());
  }

  Checkpoint cp;
  cp.precision = static_cast<Precision>(precision);
  cp.params = init_params<double>(c, 0);
  auto tensors = cp.params.tensors();
  if (r.pod<std::uint64_t>() != tensors.size()) throw DataError(file.string() + ": tensor count mismatch");
  for (auto* t : tensors) {
    const auto rows = r.pod<std::uint64_t>();
    const auto cols = r.pod<std::uint64_t>();
    if (static_cast<Index>(rows) != t->rows() || static_cast<Index>(cols) != t->cols()) {
      throw DataError(file.string() + ": tensor shape mismatch");
    }
    r.raw(t->data(), static_cast<size_t>(t->size()) * sizeof(double));
  }
  return cp;
}

}  // namespace sehgnn
