#pragma once

#include "sehgnn/model.hpp"

#include <filesystem>

namespace sehgnn {

enum class Precision : std::uint8_t { f64, f32 };

std::string_view to_string(Precision precision);
Precision parse_precision(std::string_view text);

struct Checkpoint {
  Params<double> params;
  /// Precision the model was trained in; evaluation replays it.
  Precision precision = Precision::f64;
};

/// Layout (little-endian): "SEH1", u32 version, model config (hidden, classes,
/// fusion, layer counts, dropout, attention scaling, precision), metapath ids
/// with input widths, then every tensor as (u64 rows, u64 cols, f64 data)
/// in Params::tensors() order.
void save_checkpoint(const std::filesystem::path& file, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& file);

}  // namespace sehgnn
