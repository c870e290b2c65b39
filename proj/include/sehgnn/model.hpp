#pragma once

#include "sehgnn/common.hpp"
#include "sehgnn/semantic.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sehgnn {

enum class FusionMode : std::uint8_t { transformer, weighted_sum };

std::string_view to_string(FusionMode mode);
FusionMode parse_fusion_mode(std::string_view text);

struct ModelConfig {
  Index hidden = 64;
  int num_classes = 0;
  FusionMode fusion = FusionMode::transformer;
  int projection_layers = 2;
  int classifier_layers = 2;
  double dropout = 0.5;
  /// Divide attention logits by sqrt(attention_dim). Off: the fusion uses a
  /// bare dot product.
  bool scale_attention = false;
  /// Metapath ids in input order, and the width of each semantic matrix.
  std::vector<std::string> metapaths;
  std::vector<Index> input_widths;

  Index attention_dim() const { return hidden / 4; }
  Index num_metapaths() const { return static_cast<Index>(metapaths.size()); }
  Index classifier_input() const {
    return fusion == FusionMode::transformer ? hidden * num_metapaths() : hidden;
  }

  /// Throws std::invalid_argument on a hidden size not divisible by 4, an
  /// empty metapath list, or inconsistent widths.
  void validate() const;

  bool operator==(const ModelConfig&) const = default;
};

/// Builds a config whose metapath list matches `inputs`.
ModelConfig make_model_config(std::span<const SemanticMatrix> inputs, int num_classes, Index hidden,
                              FusionMode fusion);

/// Linear layers with normalization -> ReLU -> dropout between consecutive ones.
template <typename Scalar>
struct Mlp {
  std::vector<Matrix<Scalar>> weights;      // out x in
  std::vector<Matrix<Scalar>> biases;       // 1 x out
  std::vector<Matrix<Scalar>> norm_scales;  // 1 x width, one per hidden layer
  std::vector<Matrix<Scalar>> norm_shifts;

  size_t num_layers() const { return weights.size(); }
};

template <typename Scalar>
struct Params {
  ModelConfig config;
  std::vector<Mlp<Scalar>> projection;
  // Transformer fusion.
  Matrix<Scalar> w_query;  // D_a x D
  Matrix<Scalar> w_key;    // D_a x D
  Matrix<Scalar> w_value;  // D x D
  Matrix<Scalar> beta;     // 1 x 1
  // Weighted-sum fusion.
  Matrix<Scalar> ws_weight;  // D_a x D
  Matrix<Scalar> ws_bias;    // 1 x D_a
  Matrix<Scalar> ws_query;   // 1 x D_a
  Mlp<Scalar> classifier;

  /// Every trainable tensor, in checkpoint order.
  std::vector<Matrix<Scalar>*> tensors();
  std::vector<const Matrix<Scalar>*> tensors() const;
  std::vector<std::string> tensor_names() const;
  Index num_parameters() const;

  Params zeros_like() const;

  template <typename To>
  Params<To> cast() const;
};

/// Seeded init: Glorot-uniform weights, zero biases, unit norm scales, zero
/// shifts, beta = 1.
template <typename Scalar>
Params<Scalar> init_params(const ModelConfig& config, std::uint64_t seed);

template <typename Scalar>
struct MlpCache {
  std::vector<Matrix<Scalar>> inputs;      // input of each linear layer
  std::vector<Matrix<Scalar>> normalized;  // standardized pre-activations
  std::vector<Vector<Scalar>> inv_std;
  std::vector<Matrix<Scalar>> activated;      // scale * normalized + shift
  std::vector<Matrix<Scalar>> dropout_masks;  // empty outside train mode
};

template <typename Scalar>
struct TransformerCache {
  Matrix<Scalar> stacked;    // (B*K) x D, row b*K + k holds h'_k of node b
  Matrix<Scalar> query;      // (B*K) x D_a
  Matrix<Scalar> key;        // (B*K) x D_a
  Matrix<Scalar> value;      // (B*K) x D
  Matrix<Scalar> attention;  // (B*K) x K, row b*K + i holds alpha_(i, .)
  Matrix<Scalar> attended;   // (B*K) x D
};

template <typename Scalar>
struct WeightedSumCache {
  std::vector<Matrix<Scalar>> hidden;  // tanh(W z + b), B x D_a per metapath
  Vector<Scalar> scores;
  Vector<Scalar> weights;
};

template <typename Scalar>
struct ForwardCache {
  Index batch = 0;
  std::vector<MlpCache<Scalar>> projection;
  std::vector<Matrix<Scalar>> projected;  // h' per metapath, B x D
  TransformerCache<Scalar> transformer;
  WeightedSumCache<Scalar> weighted_sum;
  Matrix<Scalar> fused;  // classifier input
  MlpCache<Scalar> classifier;
  Matrix<Scalar> logits;
  Matrix<Scalar> probabilities;
};

struct ForwardOptions {
  bool train_mode = false;
  std::uint64_t dropout_seed = 0;
};

/// Mutual attention across metapaths with residual:
///   h_i = beta * sum_j softmax_j(q_i . k_j) v_j + h'_i, concatenated over i.
/// Returns B x (K*D).
template <typename Scalar>
Matrix<Scalar> fuse_transformer(const Params<Scalar>& params, std::span<const Matrix<Scalar>> projected,
                                TransformerCache<Scalar>* cache = nullptr);

/// Semantic-attention weighted sum: one score per metapath averaged over the
/// batch, softmax over metapaths, weighted sum of the projected vectors.
/// Returns B x D.
template <typename Scalar>
Matrix<Scalar> fuse_weighted_sum(const Params<Scalar>& params, std::span<const Matrix<Scalar>> projected,
                                 WeightedSumCache<Scalar>* cache = nullptr);

template <typename Scalar>
ForwardCache<Scalar> forward(const Params<Scalar>& params, std::span<const SemanticMatrix> inputs,
                             std::span<const Index> rows, const ForwardOptions& options = {});

template <typename Scalar>
struct CrossEntropy {
  Scalar loss = 0;
  Matrix<Scalar> probabilities;
  Matrix<Scalar> dlogits;  // (probabilities - one_hot) / batch
};

/// Mean cross-entropy of row-softmax(logits) against `targets` (one per row).
template <typename Scalar>
CrossEntropy<Scalar> softmax_cross_entropy(const Matrix<Scalar>& logits, std::span<const int> targets);

/// Exact gradients through a cached forward pass.
template <typename Scalar>
Params<Scalar> backward(const Params<Scalar>& params, const ForwardCache<Scalar>& cache,
                        const Matrix<Scalar>& dlogits);

template <typename Scalar>
struct LossAndGrad {
  Scalar loss = 0;
  Params<Scalar> gradients;
  ForwardCache<Scalar> cache;
};

/// `labels` is indexed by node id; every node in `rows` must be labeled.
template <typename Scalar>
LossAndGrad<Scalar> loss_and_grad(const Params<Scalar>& params, std::span<const SemanticMatrix> inputs,
                                  std::span<const Index> rows, std::span<const int> labels,
                                  const ForwardOptions& options = {});

struct GradCheckOptions {
  double step = 1e-5;
  /// Applied to the analytic gradients before comparison (mutation testing).
  std::function<void(Params<double>&)> tamper;
};

struct GradCheckResult {
  double max_relative_error = 0;
  std::string worst_tensor;
  Index worst_index = -1;
};

/// Compares analytic gradients to central differences over every parameter,
/// with dropout disabled. Relative error per entry is
/// |a - n| / max(|a|, |n|, 1e-6).
GradCheckResult grad_check(const Params<double>& params, std::span<const SemanticMatrix> inputs,
                           std::span<const Index> rows, std::span<const int> labels,
                           const GradCheckOptions& options = {});

}  // namespace sehgnn
