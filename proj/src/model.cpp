#include "sehgnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sehgnn {

namespace {

constexpr double kNormEpsilon = 1e-5;

template <typename Self, typename F>
void visit_tensors(Self& p, F&& f) {
  auto visit_mlp = [&](auto& mlp, const std::string& prefix) {
    for (size_t l = 0; l < mlp.weights.size(); ++l) {
      const auto layer = prefix + ".linear" + std::to_string(l);
      f(layer + ".weight", mlp.weights[l]);
      f(layer + ".bias", mlp.biases[l]);
      if (l < mlp.norm_scales.size()) {
        const auto norm = prefix + ".norm" + std::to_string(l);
        f(norm + ".scale", mlp.norm_scales[l]);
        f(norm + ".shift", mlp.norm_shifts[l]);
      }
    }
  };
  for (size_t k = 0; k < p.projection.size(); ++k) {
    visit_mlp(p.projection[k], "projection[" + p.config.metapaths[k] + "]");
  }
  if (p.config.fusion == FusionMode::transformer) {
    f("fusion.w_query", p.w_query);
    f("fusion.w_key", p.w_key);
    f("fusion.w_value", p.w_value);
    f("fusion.beta", p.beta);
  } else {
    f("fusion.ws_weight", p.ws_weight);
    f("fusion.ws_bias", p.ws_bias);
    f("fusion.ws_query", p.ws_query);
  }
  visit_mlp(p.classifier, "classifier");
}

template <typename Scalar>
Mlp<Scalar> make_mlp(std::span<const Index> widths) {
  Mlp<Scalar> mlp;
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    mlp.weights.push_back(Matrix<Scalar>::Zero(widths[l + 1], widths[l]));
    mlp.biases.push_back(Matrix<Scalar>::Zero(1, widths[l + 1]));
    if (l + 2 < widths.size()) {
      mlp.norm_scales.push_back(Matrix<Scalar>::Ones(1, widths[l + 1]));
      mlp.norm_shifts.push_back(Matrix<Scalar>::Zero(1, widths[l + 1]));
    }
  }
  return mlp;
}

template <typename To, typename From>
Mlp<To> cast_mlp(const Mlp<From>& in) {
  Mlp<To> out;
  for (const auto& w : in.weights) out.weights.push_back(w.template cast<To>());
  for (const auto& b : in.biases) out.biases.push_back(b.template cast<To>());
  for (const auto& s : in.norm_scales) out.norm_scales.push_back(s.template cast<To>());
  for (const auto& s : in.norm_shifts) out.norm_shifts.push_back(s.template cast<To>());
  return out;
}

class DropoutSource {
 public:
  DropoutSource(bool active, double p, std::uint64_t seed) : active_(active && p > 0), p_(p), rng_(seed) {}

  template <typename Scalar>
  Matrix<Scalar> mask(Index rows, Index cols) {
    if (!active_) return {};
    Matrix<Scalar> m(rows, cols);
    const Scalar keep = static_cast<Scalar>(1.0 / (1.0 - p_));
    std::bernoulli_distribution drop(p_);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = drop(rng_) ? Scalar(0) : keep;
    return m;
  }

 private:
  bool active_;
  double p_;
  std::mt19937_64 rng_;
};

template <typename Scalar>
Matrix<Scalar> mlp_forward(const Mlp<Scalar>& mlp, Matrix<Scalar> x, MlpCache<Scalar>& cache,
                           DropoutSource& dropout) {
  const size_t layers = mlp.num_layers();
  for (size_t l = 0; l < layers; ++l) {
    Matrix<Scalar> z = x * mlp.weights[l].transpose();
    z.rowwise() += mlp.biases[l].row(0);
    cache.inputs.push_back(std::move(x));
    if (l + 1 == layers) return z;

    const Vector<Scalar> mean = z.rowwise().mean();
    z.colwise() -= mean;
    const Vector<Scalar> inv_std =
        ((z.array().square().rowwise().mean()) + Scalar(kNormEpsilon)).rsqrt().matrix();
    z.array().colwise() *= inv_std.array();
    Matrix<Scalar> a = z.array().rowwise() * mlp.norm_scales[l].row(0).array();
    a.rowwise() += mlp.norm_shifts[l].row(0);
    x = a.cwiseMax(Scalar(0));
    auto mask = dropout.template mask<Scalar>(x.rows(), x.cols());
    if (mask.size() > 0) x.array() *= mask.array();

    cache.normalized.push_back(std::move(z));
    cache.inv_std.push_back(inv_std);
    cache.activated.push_back(std::move(a));
    cache.dropout_masks.push_back(std::move(mask));
  }
  return x;
}

/// Accumulates into `grad` and returns the gradient with respect to the MLP input.
template <typename Scalar>
Matrix<Scalar> mlp_backward(const Mlp<Scalar>& mlp, const MlpCache<Scalar>& cache, Matrix<Scalar> d,
                            Mlp<Scalar>& grad) {
  for (size_t l = mlp.num_layers(); l-- > 0;) {
    grad.weights[l] = d.transpose() * cache.inputs[l];
    grad.biases[l] = d.colwise().sum();
    d = d * mlp.weights[l];
    if (l == 0) break;

    const size_t h = l - 1;
    if (cache.dropout_masks[h].size() > 0) d.array() *= cache.dropout_masks[h].array();
    d = (cache.activated[h].array() > Scalar(0)).select(d, Scalar(0));
    const auto& xhat = cache.normalized[h];
    grad.norm_scales[h] = (d.array() * xhat.array()).colwise().sum();
    grad.norm_shifts[h] = d.colwise().sum();

    Matrix<Scalar> dx = d.array().rowwise() * mlp.norm_scales[h].row(0).array();
    const Vector<Scalar> mean_dx = dx.rowwise().mean();
    const Vector<Scalar> mean_dx_xhat = (dx.array() * xhat.array()).rowwise().mean();
    dx.colwise() -= mean_dx;
    dx.array() -= xhat.array().colwise() * mean_dx_xhat.array();
    dx.array().colwise() *= cache.inv_std[h].array();
    d = std::move(dx);
  }
  return d;
}

template <typename Scalar>
void softmax_rows(Eigen::Ref<Matrix<Scalar>> m) {
  for (Index i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    row.array() = (row.array() - row.maxCoeff()).exp();
    row /= row.sum();
  }
}

}  // namespace

std::string_view to_string(FusionMode mode) {
  return mode == FusionMode::weighted_sum ? "weighted-sum" : "transformer";
}

FusionMode parse_fusion_mode(std::string_view text) {
  if (text == "transformer") return FusionMode::transformer;
  if (text == "weighted-sum" || text == "weighted_sum") return FusionMode::weighted_sum;
  throw std::invalid_argument("unknown fusion mode '" + std::string(text) + "'");
}

void ModelConfig::validate() const {
  if (hidden <= 0 || hidden % 4 != 0) {
    throw std::invalid_argument("hidden size " + std::to_string(hidden) + " must be a positive multiple of 4");
  }
  if (num_classes < 2) throw std::invalid_argument("num_classes must be at least 2");
  if (metapaths.empty()) throw std::invalid_argument("model needs at least one metapath");
  if (metapaths.size() != input_widths.size()) {
    throw std::invalid_argument("metapath list and input widths differ in length");
  }
  for (Index w : input_widths) {
    if (w <= 0) throw std::invalid_argument("input widths must be positive");
  }
  if (projection_layers < 1 || classifier_layers < 1) throw std::invalid_argument("MLPs need at least one layer");
  if (dropout < 0 || dropout >= 1) throw std::invalid_argument("dropout must lie in [0, 1)");
}

ModelConfig make_model_config(std::span<const SemanticMatrix> inputs, int num_classes, Index hidden,
                              FusionMode fusion) {
  ModelConfig c;
  c.hidden = hidden;
  c.num_classes = num_classes;
  c.fusion = fusion;
  for (const auto& m : inputs) {
    c.metapaths.push_back(m.path.id());
    c.input_widths.push_back(m.matrix.cols());
  }
  return c;
}

template <typename Scalar>
std::vector<Matrix<Scalar>*> Params<Scalar>::tensors() {
  std::vector<Matrix<Scalar>*> out;
  visit_tensors(*this, [&](const std::string&, Matrix<Scalar>& t) { out.push_back(&t); });
  return out;
}

template <typename Scalar>
std::vector<const Matrix<Scalar>*> Params<Scalar>::tensors() const {
  std::vector<const Matrix<Scalar>*> out;
  visit_tensors(*this, [&](const std::string&, const Matrix<Scalar>& t) { out.push_back(&t); });
  return out;
}

template <typename Scalar>
std::vector<std::string> Params<Scalar>::tensor_names() const {
  std::vector<std::string> out;
  visit_tensors(*this, [&](const std::string& name, const Matrix<Scalar>&) { out.push_back(name); });
  return out;
}

template <typename Scalar>
Index Params<Scalar>::num_parameters() const {
  Index n = 0;
  for (const auto* t : tensors()) n += t->size();
  return n;
}

template <typename Scalar>
Params<Scalar> Params<Scalar>::zeros_like() const {
  Params out = *this;
  for (auto* t : out.tensors()) t->setZero();
  return out;
}

template <typename Scalar>
template <typename To>
Params<To> Params<Scalar>::cast() const {
  Params<To> out;
  out.config = config;
  for (const auto& m : projection) out.projection.push_back(cast_mlp<To>(m));
  out.w_query = w_query.template cast<To>();
  out.w_key = w_key.template cast<To>();
  out.w_value = w_value.template cast<To>();
  out.beta = beta.template cast<To>();
  out.ws_weight = ws_weight.template cast<To>();
  out.ws_bias = ws_bias.template cast<To>();
  out.ws_query = ws_query.template cast<To>();
  out.classifier = cast_mlp<To>(classifier);
  return out;
}

template <typename Scalar>
Params<Scalar> init_params(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  const Index d = config.hidden;
  const Index da = config.attention_dim();
  Params<Scalar> p;
  p.config = config;
  for (Index w : config.input_widths) {
    std::vector<Index> widths{w};
    widths.resize(static_cast<size_t>(config.projection_layers) + 1, d);
    p.projection.push_back(make_mlp<Scalar>(widths));
  }
  if (config.fusion == FusionMode::transformer) {
    p.w_query = Matrix<Scalar>::Zero(da, d);
    p.w_key = Matrix<Scalar>::Zero(da, d);
    p.w_value = Matrix<Scalar>::Zero(d, d);
    p.beta = Matrix<Scalar>::Ones(1, 1);
  } else {
    p.ws_weight = Matrix<Scalar>::Zero(da, d);
    p.ws_bias = Matrix<Scalar>::Zero(1, da);
    p.ws_query = Matrix<Scalar>::Zero(1, da);
  }
  std::vector<Index> widths{config.classifier_input()};
  widths.resize(static_cast<size_t>(config.classifier_layers), d);
  widths.push_back(config.num_classes);
  p.classifier = make_mlp<Scalar>(widths);

  std::mt19937_64 rng(seed);
  auto glorot = [&](Matrix<Scalar>& w) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Index i = 0; i < w.size(); ++i) w.data()[i] = static_cast<Scalar>(dist(rng));
  };
  for (auto& m : p.projection) {
    for (auto& w : m.weights) glorot(w);
  }
  if (config.fusion == FusionMode::transformer) {
    glorot(p.w_query);
    glorot(p.w_key);
    glorot(p.w_value);
  } else {
    glorot(p.ws_weight);
    glorot(p.ws_query);
  }
  for (auto& w : p.classifier.weights) glorot(w);
  return p;
}

template <typename Scalar>
Matrix<Scalar> fuse_transformer(const Params<Scalar>& params, std::span<const Matrix<Scalar>> projected,
                                TransformerCache<Scalar>* cache) {
  const Index k = static_cast<Index>(projected.size());
  const Index batch = projected.front().rows();
  const Index d = params.config.hidden;
  const Scalar scale =
      params.config.scale_attention ? Scalar(1) / std::sqrt(static_cast<Scalar>(params.config.attention_dim())) : Scalar(1);

  TransformerCache<Scalar> local;
  auto& c = cache ? *cache : local;
  c.stacked.resize(batch * k, d);
  for (Index b = 0; b < batch; ++b) {
    for (Index i = 0; i < k; ++i) c.stacked.row(b * k + i) = projected[i].row(b);
  }
  c.query = c.stacked * params.w_query.transpose();
  c.key = c.stacked * params.w_key.transpose();
  c.value = c.stacked * params.w_value.transpose();
  c.attention.resize(batch * k, k);
  c.attended.resize(batch * k, d);
  for (Index b = 0; b < batch; ++b) {
    auto alpha = c.attention.middleRows(b * k, k);
    alpha.noalias() = scale * c.query.middleRows(b * k, k) * c.key.middleRows(b * k, k).transpose();
    softmax_rows<Scalar>(alpha);
    c.attended.middleRows(b * k, k).noalias() = alpha * c.value.middleRows(b * k, k);
  }
  Matrix<Scalar> out = params.beta(0, 0) * c.attended + c.stacked;
  // (B*K) x D and B x (K*D) share the same row-major layout.
  out.resize(batch, k * d);
  return out;
}

template <typename Scalar>
Matrix<Scalar> fuse_weighted_sum(const Params<Scalar>& params, std::span<const Matrix<Scalar>> projected,
                                 WeightedSumCache<Scalar>* cache) {
  const Index k = static_cast<Index>(projected.size());
  WeightedSumCache<Scalar> local;
  auto& c = cache ? *cache : local;
  c.hidden.clear();
  c.scores.resize(k);
  for (Index i = 0; i < k; ++i) {
    Matrix<Scalar> t = projected[i] * params.ws_weight.transpose();
    t.rowwise() += params.ws_bias.row(0);
    t = t.array().tanh();
    c.scores(i) = (t * params.ws_query.transpose()).mean();
    c.hidden.push_back(std::move(t));
  }
  c.weights = (c.scores.array() - c.scores.maxCoeff()).exp();
  c.weights /= c.weights.sum();
  Matrix<Scalar> out = Matrix<Scalar>::Zero(projected.front().rows(), projected.front().cols());
  for (Index i = 0; i < k; ++i) out += c.weights(i) * projected[i];
  return out;
}

template <typename Scalar>
ForwardCache<Scalar> forward(const Params<Scalar>& params, std::span<const SemanticMatrix> inputs,
                             std::span<const Index> rows, const ForwardOptions& options) {
  const auto& config = params.config;
  if (static_cast<Index>(inputs.size()) != config.num_metapaths()) {
    throw DataError("model expects " + std::to_string(config.num_metapaths()) + " semantic matrices, got " +
                    std::to_string(inputs.size()));
  }
  for (size_t k = 0; k < inputs.size(); ++k) {
    if (inputs[k].path.id() != config.metapaths[k]) {
      throw DataError("semantic matrix " + std::to_string(k) + " is '" + inputs[k].path.id() +
                      "', model expects '" + config.metapaths[k] + "'");
    }
    if (inputs[k].matrix.cols() != config.input_widths[k]) {
      throw DataError("semantic matrix '" + config.metapaths[k] + "' has width " +
                      std::to_string(inputs[k].matrix.cols()) + ", model expects " +
                      std::to_string(config.input_widths[k]));
    }
  }
  if (rows.empty()) throw std::invalid_argument("forward: empty batch");
  const Index n_nodes = inputs.front().matrix.rows();
  for (Index r : rows) {
    if (r < 0 || r >= n_nodes) throw std::out_of_range("forward: row " + std::to_string(r) + " out of range");
  }

  ForwardCache<Scalar> c;
  c.batch = static_cast<Index>(rows.size());
  DropoutSource dropout(options.train_mode, config.dropout, options.dropout_seed);
  c.projection.resize(inputs.size());
  for (size_t k = 0; k < inputs.size(); ++k) {
    const auto& source = inputs[k].matrix;
    Matrix<Scalar> x(c.batch, source.cols());
    for (Index b = 0; b < c.batch; ++b) x.row(b) = source.row(rows[b]).template cast<Scalar>();
    c.projected.push_back(mlp_forward(params.projection[k], std::move(x), c.projection[k], dropout));
  }

  if (config.fusion == FusionMode::transformer) {
    c.fused = fuse_transformer<Scalar>(params, c.projected, &c.transformer);
  } else {
    c.fused = fuse_weighted_sum<Scalar>(params, c.projected, &c.weighted_sum);
  }

  c.logits = mlp_forward(params.classifier, c.fused, c.classifier, dropout);
  c.probabilities = c.logits;
  softmax_rows<Scalar>(c.probabilities);
  return c;
}

template <typename Scalar>
CrossEntropy<Scalar> softmax_cross_entropy(const Matrix<Scalar>& logits, std::span<const int> targets) {
  if (static_cast<Index>(targets.size()) != logits.rows()) {
    throw std::invalid_argument("softmax_cross_entropy: one target per row required");
  }
  CrossEntropy<Scalar> ce;
  ce.probabilities = logits;
  softmax_rows<Scalar>(ce.probabilities);
  ce.dlogits = ce.probabilities;
  const auto batch = static_cast<Scalar>(logits.rows());
  Scalar total = 0;
  for (Index i = 0; i < logits.rows(); ++i) {
    const int t = targets[i];
    if (t < 0 || t >= logits.cols()) throw std::invalid_argument("softmax_cross_entropy: target out of range");
    const auto row = logits.row(i);
    const Scalar top = row.maxCoeff();
    const Scalar lse = top + std::log((row.array() - top).exp().sum());
    total += lse - row(t);
    ce.dlogits(i, t) -= Scalar(1);
  }
  ce.loss = total / batch;
  ce.dlogits /= batch;
  return ce;
}

template <typename Scalar>
Params<Scalar> backward(const Params<Scalar>& params, const ForwardCache<Scalar>& c, const Matrix<Scalar>& dlogits) {
  const auto& config = params.config;
  const Index k = config.num_metapaths();
  const Index d = config.hidden;
  const Index batch = c.batch;
  Params<Scalar> g = params.zeros_like();

  Matrix<Scalar> dfused = mlp_backward(params.classifier, c.classifier, dlogits, g.classifier);
  std::vector<Matrix<Scalar>> dprojected(static_cast<size_t>(k));

  if (config.fusion == FusionMode::transformer) {
    const auto& t = c.transformer;
    const Scalar scale =
        config.scale_attention ? Scalar(1) / std::sqrt(static_cast<Scalar>(config.attention_dim())) : Scalar(1);
    dfused.resize(batch * k, d);
    const Scalar beta = params.beta(0, 0);
    g.beta(0, 0) = (dfused.array() * t.attended.array()).sum();
    const Matrix<Scalar> dattended = beta * dfused;
    Matrix<Scalar> dquery(batch * k, config.attention_dim());
    Matrix<Scalar> dkey(batch * k, config.attention_dim());
    Matrix<Scalar> dvalue(batch * k, d);
    for (Index b = 0; b < batch; ++b) {
      const auto alpha = t.attention.middleRows(b * k, k);
      const auto dout = dattended.middleRows(b * k, k);
      Matrix<Scalar> dalpha = dout * t.value.middleRows(b * k, k).transpose();
      dvalue.middleRows(b * k, k).noalias() = alpha.transpose() * dout;
      const Vector<Scalar> inner = (dalpha.array() * alpha.array()).rowwise().sum();
      dalpha.colwise() -= inner;
      const Matrix<Scalar> dlogit = scale * (alpha.array() * dalpha.array()).matrix();
      dquery.middleRows(b * k, k).noalias() = dlogit * t.key.middleRows(b * k, k);
      dkey.middleRows(b * k, k).noalias() = dlogit.transpose() * t.query.middleRows(b * k, k);
    }
    g.w_query = dquery.transpose() * t.stacked;
    g.w_key = dkey.transpose() * t.stacked;
    g.w_value = dvalue.transpose() * t.stacked;
    Matrix<Scalar> dstacked = dfused;
    dstacked.noalias() += dquery * params.w_query;
    dstacked.noalias() += dkey * params.w_key;
    dstacked.noalias() += dvalue * params.w_value;
    for (Index i = 0; i < k; ++i) {
      dprojected[i].resize(batch, d);
      for (Index b = 0; b < batch; ++b) dprojected[i].row(b) = dstacked.row(b * k + i);
    }
  } else {
    const auto& ws = c.weighted_sum;
    Vector<Scalar> dweights(k);
    for (Index i = 0; i < k; ++i) {
      dweights(i) = (dfused.array() * c.projected[i].array()).sum();
      dprojected[i] = ws.weights(i) * dfused;
    }
    const Vector<Scalar> dscores = ws.weights.cwiseProduct(dweights.array().matrix() -
                                                           Vector<Scalar>::Constant(k, ws.weights.dot(dweights)));
    const auto inv_batch = Scalar(1) / static_cast<Scalar>(batch);
    for (Index i = 0; i < k; ++i) {
      const Scalar ds = dscores(i) * inv_batch;
      const auto& hidden = ws.hidden[i];
      g.ws_query += ds * hidden.colwise().sum();
      Matrix<Scalar> du = (ds * (Scalar(1) - hidden.array().square())).matrix();
      du.array().rowwise() *= params.ws_query.row(0).array();
      g.ws_weight.noalias() += du.transpose() * c.projected[i];
      g.ws_bias += du.colwise().sum();
      dprojected[i].noalias() += du * params.ws_weight;
    }
  }

  for (Index i = 0; i < k; ++i) {
    mlp_backward(params.projection[i], c.projection[i], std::move(dprojected[i]), g.projection[i]);
  }
  return g;
}

template <typename Scalar>
LossAndGrad<Scalar> loss_and_grad(const Params<Scalar>& params, std::span<const SemanticMatrix> inputs,
                                  std::span<const Index> rows, std::span<const int> labels,
                                  const ForwardOptions& options) {
  std::vector<int> targets;
  targets.reserve(rows.size());
  for (Index r : rows) {
    if (r < 0 || r >= static_cast<Index>(labels.size()) || labels[r] < 0) {
      throw DataError("loss_and_grad: node " + std::to_string(r) + " in the batch is unlabeled");
    }
    targets.push_back(labels[r]);
  }
  LossAndGrad<Scalar> out;
  out.cache = forward(params, inputs, rows, options);
  auto ce = softmax_cross_entropy<Scalar>(out.cache.logits, targets);
  out.loss = ce.loss;
  out.gradients = backward(params, out.cache, ce.dlogits);
  return out;
}

GradCheckResult grad_check(const Params<double>& params, std::span<const SemanticMatrix> inputs,
                           std::span<const Index> rows, std::span<const int> labels, const GradCheckOptions& options) {
  auto analytic = loss_and_grad(params, inputs, rows, labels).gradients;
  if (options.tamper) options.tamper(analytic);

  std::vector<int> targets;
  for (Index r : rows) targets.push_back(labels[r]);
  auto loss_at = [&](const Params<double>& p) {
    return softmax_cross_entropy<double>(forward(p, inputs, rows).logits, targets).loss;
  };

  GradCheckResult result;
  Params<double> probe = params;
  const auto names = params.tensor_names();
  auto probe_tensors = probe.tensors();
  const auto grad_tensors = std::as_const(analytic).tensors();
  for (size_t t = 0; t < probe_tensors.size(); ++t) {
    auto& w = *probe_tensors[t];
    for (Index i = 0; i < w.size(); ++i) {
      const double saved = w.data()[i];
      w.data()[i] = saved + options.step;
      const double plus = loss_at(probe);
      w.data()[i] = saved - options.step;
      const double minus = loss_at(probe);
      w.data()[i] = saved;
      const double numeric = (plus - minus) / (2 * options.step);
      const double a = grad_tensors[t]->data()[i];
      const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_tensor = names[t];
        result.worst_index = i;
      }
    }
  }
  return result;
}

#define SEHGNN_INSTANTIATE(S)                                                                               \
  template struct Params<S>;                                                                                \
  template Params<S> init_params<S>(const ModelConfig&, std::uint64_t);                                    \
  template Matrix<S> fuse_transformer<S>(const Params<S>&, std::span<const Matrix<S>>, TransformerCache<S>*); \
  template Matrix<S> fuse_weighted_sum<S>(const Params<S>&, std::span<const Matrix<S>>, WeightedSumCache<S>*); \
  template ForwardCache<S> forward<S>(const Params<S>&, std::span<const SemanticMatrix>, std::span<const Index>, \
                                      const ForwardOptions&);                                               \
  template CrossEntropy<S> softmax_cross_entropy<S>(const Matrix<S>&, std::span<const int>);                 \
  template Params<S> backward<S>(const Params<S>&, const ForwardCache<S>&, const Matrix<S>&);                \
  template LossAndGrad<S> loss_and_grad<S>(const Params<S>&, std::span<const SemanticMatrix>,                \
                                           std::span<const Index>, std::span<const int>, const ForwardOptions&);

SEHGNN_INSTANTIATE(float)
SEHGNN_INSTANTIATE(double)

template Params<float> Params<double>::cast<float>() const;
template Params<double> Params<double>::cast<double>() const;
template Params<double> Params<float>::cast<double>() const;
template Params<float> Params<float>::cast<float>() const;

}  // namespace sehgnn
