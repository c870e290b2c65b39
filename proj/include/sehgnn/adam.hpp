#pragma once

#include "sehgnn/model.hpp"

namespace sehgnn {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Decoupled: applied as lr * weight_decay * w, outside the moment estimates.
  double weight_decay = 0.0;
};

template <typename Scalar>
struct AdamState {
  AdamOptions options;
  std::int64_t step = 0;
  std::vector<Matrix<Scalar>> first_moment;
  std::vector<Matrix<Scalar>> second_moment;
};

/// Zero moments shaped like `tensors`.
template <typename Scalar>
AdamState<Scalar> make_adam_state(std::span<const Matrix<Scalar>* const> tensors, const AdamOptions& options);

template <typename Scalar>
AdamState<Scalar> make_adam_state(const Params<Scalar>& params, const AdamOptions& options) {
  const auto t = params.tensors();
  return make_adam_state<Scalar>(t, options);
}

/// One bias-corrected Adam update over parallel tensor lists.
template <typename Scalar>
void adam_step(std::span<Matrix<Scalar>* const> params, std::span<const Matrix<Scalar>* const> grads,
               AdamState<Scalar>& state);

template <typename Scalar>
void adam_step(Params<Scalar>& params, const Params<Scalar>& grads, AdamState<Scalar>& state) {
  const auto p = params.tensors();
  const auto g = grads.tensors();
  adam_step<Scalar>(p, g, state);
}

}  // namespace sehgnn
