#pragma once

#include "sehgnn/common.hpp"

#include <span>
#include <vector>

namespace sehgnn {

struct Metrics {
  double micro_f1 = 0;
  double macro_f1 = 0;
  /// Mean cross-entropy of the masked rows.
  double loss = 0;
  Index count = 0;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
};

/// Argmax with ties resolved to the lowest class index.
Index predicted_class(const Eigen::Ref<const MatrixXd>& probabilities, Index row);

/// Scores rows `mask` of `probabilities` (one row per node, one column per
/// class) against `labels` (indexed by node). A class absent from both
/// predictions and truth scores f1 = 0 in the macro average.
Metrics evaluate(const Eigen::Ref<const MatrixXd>& probabilities, std::span<const int> labels,
                 std::span<const Index> mask);

}  // namespace sehgnn
