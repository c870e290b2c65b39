#include "sehgnn/train.hpp"

#include "sehgnn/adam.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace sehgnn {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("config: bad value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw std::invalid_argument("config: bad boolean '" + std::string(value) + "' for " + std::string(key));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL);
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return x;
}

template <typename Scalar>
MatrixXd predict_all(const Params<Scalar>& params, std::span<const SemanticMatrix> matrices) {
  std::vector<Index> rows(static_cast<size_t>(matrices.front().matrix.rows()));
  std::iota(rows.begin(), rows.end(), Index{0});
  return forward(params, matrices, rows).probabilities.template cast<double>();
}

template <typename Scalar>
TrainResult train_impl(std::span<const SemanticMatrix> matrices, const LabelTable& labels, const ModelConfig& model,
                       const RunConfig& config) {
  const auto train_rows = labels.rows_in(Split::train);
  auto labeled = [&](Split s) {
    std::vector<Index> rows;
    for (Index r : labels.rows_in(s)) {
      if (labels.is_labeled(r)) rows.push_back(r);
    }
    return rows;
  };
  const auto val_rows = labeled(Split::val);
  const auto test_rows = labeled(Split::test);

  Params<Scalar> params = init_params<Scalar>(model, config.seed);
  AdamOptions adam;
  adam.learning_rate = config.learning_rate;
  adam.weight_decay = config.weight_decay;
  auto state = make_adam_state(params, adam);

  TrainResult result;
  result.checkpoint.precision = config.precision;
  auto& report = result.report;
  Params<Scalar> best = params;
  double best_val = -1.0;

  auto score = [&](const MatrixXd& probabilities, std::span<const Index> rows) {
    return rows.empty() ? Metrics{} : evaluate(probabilities, labels.labels, rows);
  };

  std::mt19937_64 shuffle_rng(mix_seed(config.seed, 0x5eed, 0));
  std::vector<Index> order = train_rows;
  const Index batch = config.batch_size > 0 ? std::min<Index>(config.batch_size, static_cast<Index>(order.size()))
                                            : static_cast<Index>(order.size());

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    EpochRecord record;
    record.epoch = epoch;
    const auto t0 = Clock::now();
    if (batch < static_cast<Index>(order.size())) std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0;
    Index step = 0;
    for (Index start = 0; start < static_cast<Index>(order.size()); start += batch, ++step) {
      const auto count = std::min<Index>(batch, static_cast<Index>(order.size()) - start);
      const std::span<const Index> rows(order.data() + start, static_cast<size_t>(count));
      const ForwardOptions options{true, mix_seed(config.seed, static_cast<std::uint64_t>(epoch),
                                                  static_cast<std::uint64_t>(step))};
      auto lg = loss_and_grad(params, matrices, rows, labels.labels, options);
      adam_step(params, lg.gradients, state);
      loss_sum += static_cast<double>(lg.loss) * static_cast<double>(count);
    }
    record.train_loss = loss_sum / static_cast<double>(order.size());
    record.epoch_ms = ms_since(t0);

    const auto t1 = Clock::now();
    const MatrixXd probabilities = predict_all(params, matrices);
    record.val = score(probabilities, val_rows);
    record.eval_ms = ms_since(t1);

    if (record.val.micro_f1 > best_val) {
      best_val = record.val.micro_f1;
      best = params;
      report.best_epoch = epoch;
      report.val = record.val;
      report.test = score(probabilities, test_rows);
    }
    report.epochs.push_back(std::move(record));
    if (epoch - report.best_epoch >= config.patience) break;
  }

  if (report.epochs.empty()) {
    const MatrixXd probabilities = predict_all(params, matrices);
    report.val = score(probabilities, val_rows);
    report.test = score(probabilities, test_rows);
  } else {
    for (const auto& e : report.epochs) {
      report.epoch_ms_mean += e.epoch_ms;
      report.eval_ms_mean += e.eval_ms;
    }
    report.epoch_ms_mean /= static_cast<double>(report.epochs.size());
    report.eval_ms_mean /= static_cast<double>(report.epochs.size());
  }
  result.checkpoint.params = best.template cast<double>();
  return result;
}

}  // namespace

void RunConfig::validate() const {
  if (hidden <= 0 || hidden % 4 != 0) throw std::invalid_argument("config: hidden must be a positive multiple of 4");
  if (!(learning_rate > 0)) throw std::invalid_argument("config: learning_rate must be positive");
  if (weight_decay < 0) throw std::invalid_argument("config: weight_decay must be non-negative");
  if (dropout < 0 || dropout >= 1) throw std::invalid_argument("config: dropout must lie in [0, 1)");
  if (max_epochs < 0) throw std::invalid_argument("config: max_epochs must be non-negative");
  if (patience < 1) throw std::invalid_argument("config: patience must be positive");
  if (max_epochs > 0 && patience > max_epochs) throw std::invalid_argument("config: patience exceeds max_epochs");
  if (batch_size < 0) throw std::invalid_argument("config: batch_size must be non-negative");
  if (classifier_layers < 1) throw std::invalid_argument("config: classifier_layers must be positive");
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "max_hop_features") c.max_hop_features = parse_number<int>(key, value);
  else if (key == "max_hop_labels") c.max_hop_labels = parse_number<int>(key, value);
  else if (key == "hidden") c.hidden = parse_number<Index>(key, value);
  else if (key == "dropout") c.dropout = parse_number<double>(key, value);
  else if (key == "learning_rate" || key == "lr") c.learning_rate = parse_number<double>(key, value);
  else if (key == "weight_decay") c.weight_decay = parse_number<double>(key, value);
  else if (key == "max_epochs") c.max_epochs = parse_number<int>(key, value);
  else if (key == "patience") c.patience = parse_number<int>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "fusion") c.fusion = parse_fusion_mode(value);
  else if (key == "precision") c.precision = parse_precision(value);
  else if (key == "batch_size") c.batch_size = parse_number<Index>(key, value);
  else if (key == "classifier_layers") c.classifier_layers = parse_number<int>(key, value);
  else if (key == "scale_attention") c.scale_attention = parse_bool(key, value);
  else if (key == "expected_graph_hash") c.expected_graph_hash = std::string(value);
  else throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
}

RunConfig parse_run_config(std::string_view text, RunConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    std::string_view view = line;
    view = trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find_first_of("=:");
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(n) + ": expected key = value");
    }
    apply_setting(base, view.substr(0, eq), view.substr(eq + 1));
  }
  return base;
}

RunConfig load_run_config(const std::filesystem::path& file, RunConfig base) {
  std::ifstream in(file);
  if (!in) throw DataError("missing file " + file.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), std::move(base));
}

nlohmann::json to_json(const Metrics& m) {
  return {{"micro_f1", m.micro_f1}, {"macro_f1", m.macro_f1}, {"loss", m.loss},    {"count", m.count},
          {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

nlohmann::json TrainReport::to_json(bool include_timing) const {
  nlohmann::json j;
  auto& history = j["epochs"] = nlohmann::json::array();
  for (const auto& e : epochs) {
    nlohmann::json row{{"epoch", e.epoch},
                       {"train_loss", e.train_loss},
                       {"val_micro_f1", e.val.micro_f1},
                       {"val_macro_f1", e.val.macro_f1},
                       {"val_loss", e.val.loss}};
    if (include_timing) {
      row["epoch_ms"] = e.epoch_ms;
      row["eval_ms"] = e.eval_ms;
    }
    history.push_back(std::move(row));
  }
  j["epochs_run"] = epochs.size();
  j["best_epoch"] = best_epoch;
  j["val_micro_f1"] = val.micro_f1;
  j["val_macro_f1"] = val.macro_f1;
  j["test_micro_f1"] = test.micro_f1;
  j["test_macro_f1"] = test.macro_f1;
  j["test_loss"] = test.loss;
  j["test"] = sehgnn::to_json(test);
  if (include_timing) {
    j["epoch_ms_mean"] = epoch_ms_mean;
    j["eval_ms_mean"] = eval_ms_mean;
    j["precompute_ms"] = precompute_ms;
  }
  return j;
}

TrainResult train(std::span<const SemanticMatrix> matrices, const LabelTable& labels, int num_classes,
                  const RunConfig& config) {
  config.validate();
  if (matrices.empty()) throw DataError("train: no semantic matrices");
  labels.validate(num_classes);
  for (const auto& m : matrices) {
    if (m.matrix.rows() != labels.size()) {
      throw DataError("train: semantic matrix '" + m.path.id() + "' has " + std::to_string(m.matrix.rows()) +
                      " rows, label table has " + std::to_string(labels.size()));
    }
  }
  if (labels.rows_in(Split::train).empty()) throw DataError("train: empty train split");

  ModelConfig model = make_model_config(matrices, num_classes, config.hidden, config.fusion);
  model.dropout = config.dropout;
  model.classifier_layers = config.classifier_layers;
  model.scale_attention = config.scale_attention;
  return config.precision == Precision::f32 ? train_impl<float>(matrices, labels, model, config)
                                            : train_impl<double>(matrices, labels, model, config);
}

MatrixXd predict(const Checkpoint& checkpoint, std::span<const SemanticMatrix> matrices) {
  if (matrices.empty()) throw DataError("predict: no semantic matrices");
  if (checkpoint.precision == Precision::f32) return predict_all(checkpoint.params.cast<float>(), matrices);
  return predict_all(checkpoint.params, matrices);
}

}  // namespace sehgnn
