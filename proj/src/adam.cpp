#include "sehgnn/adam.hpp"

#include <cmath>

namespace sehgnn {

template <typename Scalar>
AdamState<Scalar> make_adam_state(std::span<const Matrix<Scalar>* const> tensors, const AdamOptions& options) {
  AdamState<Scalar> state;
  state.options = options;
  for (const auto* t : tensors) {
    state.first_moment.push_back(Matrix<Scalar>::Zero(t->rows(), t->cols()));
    state.second_moment.push_back(Matrix<Scalar>::Zero(t->rows(), t->cols()));
  }
  return state;
}

template <typename Scalar>
void adam_step(std::span<Matrix<Scalar>* const> params, std::span<const Matrix<Scalar>* const> grads,
               AdamState<Scalar>& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw std::invalid_argument("adam_step: parameter, gradient and state lists differ in length");
  }
  const auto& o = state.options;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const auto lr = static_cast<Scalar>(o.learning_rate);
  const auto b1 = static_cast<Scalar>(o.beta1);
  const auto b2 = static_cast<Scalar>(o.beta2);
  const auto eps = static_cast<Scalar>(o.epsilon);
  const auto correction1 = static_cast<Scalar>(1.0 - std::pow(o.beta1, t));
  const auto correction2 = static_cast<Scalar>(1.0 - std::pow(o.beta2, t));
  const auto decay = static_cast<Scalar>(o.learning_rate * o.weight_decay);

  for (size_t i = 0; i < params.size(); ++i) {
    auto& w = *params[i];
    const auto& g = *grads[i];
    if (w.rows() != g.rows() || w.cols() != g.cols() || w.rows() != state.first_moment[i].rows() ||
        w.cols() != state.first_moment[i].cols()) {
      throw std::invalid_argument("adam_step: shape mismatch at tensor " + std::to_string(i));
    }
    auto& m = state.first_moment[i];
    auto& v = state.second_moment[i];
    m = b1 * m + (Scalar(1) - b1) * g;
    v = b2 * v + (Scalar(1) - b2) * g.cwiseAbs2();
    if (decay != Scalar(0)) w -= decay * w;
    w.array() -= lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + eps);
  }
}

template AdamState<float> make_adam_state<float>(std::span<const Matrix<float>* const>, const AdamOptions&);
template AdamState<double> make_adam_state<double>(std::span<const Matrix<double>* const>, const AdamOptions&);
template void adam_step<float>(std::span<Matrix<float>* const>, std::span<const Matrix<float>* const>,
                               AdamState<float>&);
template void adam_step<double>(std::span<Matrix<double>* const>, std::span<const Matrix<double>* const>,
                                AdamState<double>&);

}  // namespace sehgnn
