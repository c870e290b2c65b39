#include "sehgnn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sehgnn {

Index predicted_class(const Eigen::Ref<const MatrixXd>& probabilities, Index row) {
  Index best = 0;
  for (Index c = 1; c < probabilities.cols(); ++c) {
    if (probabilities(row, c) > probabilities(row, best)) best = c;
  }
  return best;
}

Metrics evaluate(const Eigen::Ref<const MatrixXd>& probabilities, std::span<const int> labels,
                 std::span<const Index> mask) {
  if (mask.empty()) throw std::invalid_argument("evaluate: empty mask");
  const Index classes = probabilities.cols();
  std::vector<Index> tp(classes, 0);
  std::vector<Index> fp(classes, 0);
  std::vector<Index> fn(classes, 0);
  Metrics m;
  m.count = static_cast<Index>(mask.size());
  double loss = 0;
  Index correct = 0;
  for (Index node : mask) {
    const int truth = labels[node];
    if (truth < 0 || truth >= classes) {
      throw DataError("evaluate: node " + std::to_string(node) + " has no valid label");
    }
    const Index guess = predicted_class(probabilities, node);
    if (guess == truth) {
      ++tp[truth];
      ++correct;
    } else {
      ++fp[guess];
      ++fn[truth];
    }
    loss -= std::log(std::max(probabilities(node, truth), std::numeric_limits<double>::min()));
  }
  m.loss = loss / static_cast<double>(m.count);
  m.micro_f1 = static_cast<double>(correct) / static_cast<double>(m.count);
  for (Index c = 0; c < classes; ++c) {
    const auto t = static_cast<double>(tp[c]);
    m.precision.push_back(tp[c] + fp[c] ? t / static_cast<double>(tp[c] + fp[c]) : 0.0);
    m.recall.push_back(tp[c] + fn[c] ? t / static_cast<double>(tp[c] + fn[c]) : 0.0);
    const Index denom = 2 * tp[c] + fp[c] + fn[c];
    m.f1.push_back(denom ? 2.0 * t / static_cast<double>(denom) : 0.0);
  }
  double sum = 0;
  for (double f : m.f1) sum += f;
  m.macro_f1 = sum / static_cast<double>(classes);
  return m;
}

}  // namespace sehgnn
