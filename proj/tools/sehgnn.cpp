// Command-line driver: synth -> precompute -> train -> eval, plus bench.
//
// Exit codes: 0 success, 1 usage error, 2 data or contract violation.

#include "sehgnn/bench.hpp"
#include "sehgnn/dataset_io.hpp"
#include "sehgnn/precompute.hpp"
#include "sehgnn/synthetic.hpp"
#include "sehgnn/train.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace sehgnn;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void write_json(const fs::path& file, const nlohmann::json& j) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file);
  out << j.dump(2) << '\n';
  if (!out) throw DataError("cannot write " + file.string());
}

// "1x,2x,4x" -> {1, 2, 4}
std::vector<double> parse_scales(const std::string& list) {
  std::vector<double> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty() && (item.back() == 'x' || item.back() == 'X')) item.pop_back();
    size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size() || !(v > 0)) throw CLI::ValidationError("--sweep", "bad multiplier '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct Globals {
  std::uint64_t seed = 0;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string precision;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous graph node classification with precomputed metapath aggregation"};
  app.require_subcommand(1);
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for precomputation")->check(CLI::PositiveNumber);
  auto* precision_opt =
      app.add_option("--precision", g.precision, "Training precision")->check(CLI::IsMember({"f64", "f32"}));

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a planted-community dataset directory");
  fs::path synth_out;
  std::string preset = "acm";
  Index target_nodes = 0;
  int classes = 0;
  double edge_scale = 1.0;
  std::string feature_format = "tsv";
  synth->add_option("--out", synth_out, "Dataset directory to write")->required();
  synth->add_option("--preset", preset, "Schema preset")->check(CLI::IsMember({"acm", "dblp"}));
  synth->add_option("--target-nodes", target_nodes, "Target node count (default per preset)");
  synth->add_option("--classes", classes, "Number of classes (default per preset)");
  synth->add_option("--edge-scale", edge_scale, "Multiplier on every relation's density");
  synth->add_option("--features", feature_format, "Feature file format")->check(CLI::IsMember({"tsv", "bin"}));

  // precompute
  auto* pre = app.add_subcommand("precompute", "Materialize semantic matrices for every metapath");
  fs::path data_dir;
  fs::path pre_out;
  PrecomputeOptions pre_opts;
  bool no_memo = false;
  pre->add_option("--data", data_dir, "Dataset directory")->required();
  pre->add_option("--max-hop", pre_opts.max_hop_features, "Max hops of feature metapaths")->required();
  pre->add_option("--label-max-hop", pre_opts.max_hop_labels, "Max hops of label metapaths")->required();
  pre->add_option("--out", pre_out, "Output directory")->required();
  pre->add_flag("--no-memo", no_memo, "Recompute shared sub-products for every metapath");

  // train
  auto* tr = app.add_subcommand("train", "Train on a precomputed directory");
  fs::path precomputed;
  fs::path config_file;
  fs::path report_file;
  fs::path checkpoint_file;
  std::vector<std::string> overrides;
  tr->add_option("--precomputed", precomputed, "Precompute output directory")->required();
  tr->add_option("--config", config_file, "Flat key = value run configuration");
  tr->add_option("--out", report_file, "Report JSON path")->required();
  tr->add_option("--checkpoint", checkpoint_file, "Checkpoint path (default: report path with .ckpt)");
  tr->add_option("--set", overrides, "Override a config key, e.g. --set max_epochs=50");
  int repeats = 1;
  tr->add_option("--repeats", repeats, "Independent runs with seeds seed, seed+1, ...; the first is checkpointed")
      ->check(CLI::PositiveNumber);

  // eval
  auto* ev = app.add_subcommand("eval", "Score a checkpoint on one split");
  fs::path eval_checkpoint;
  fs::path eval_out;
  fs::path eval_config;
  std::string split_name = "test";
  ev->add_option("--precomputed", precomputed, "Precompute output directory")->required();
  ev->add_option("--checkpoint", eval_checkpoint, "Checkpoint written by train")->required();
  ev->add_option("--split", split_name, "Split to score")->check(CLI::IsMember({"train", "val", "test"}));
  ev->add_option("--config", eval_config, "Run configuration (graph hash expectations)");
  ev->add_option("--out", eval_out, "Metrics JSON path");

  // bench
  auto* bench = app.add_subcommand("bench", "Precompute vs. epoch cost under growing edge counts");
  std::vector<std::string> sweeps{"edges=1x,2x,4x"};
  fs::path bench_out;
  BenchOptions bench_opts;
  bench->add_option("--sweep", sweeps, "edges=1x,2x,4x and/or k=4,8")->take_all();
  bench->add_option("--out", bench_out, "Bench report JSON path");
  bench->add_option("--epochs", bench_opts.timed_epochs, "Timed epochs per point")->check(CLI::Range(20, 100000));
  bench->add_option("--warmup", bench_opts.warmup_epochs, "Warmup epochs per point")->check(CLI::Range(5, 100000));
  bench->add_option("--target-nodes", target_nodes, "Target node count");
  bench->add_option("--hidden", bench_opts.run.hidden, "Hidden size D");
  bench->add_option("--rounds", bench_opts.rounds, "Interleaved training runs per point")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    set_num_threads(g.threads);
    retain_freed_memory();

    if (*synth) {
      SyntheticConfig cfg = preset == "dblp" ? SyntheticConfig::dblp_like() : SyntheticConfig::acm_like();
      if (target_nodes > 0) {
        for (auto& t : cfg.node_types) {
          if (t.name == cfg.target_type) t.count = target_nodes;
        }
      }
      if (classes > 0) cfg.num_classes = classes;
      cfg.edge_scale = edge_scale;
      const auto graph = gen_synthetic(cfg, g.seed);
      save_graph(synth_out, graph, feature_format == "bin" ? FeatureFormat::bin : FeatureFormat::tsv);
      std::cout << "wrote " << synth_out.string() << ": " << graph.num_target_nodes() << " target nodes, "
                << graph.num_edges() << " edges, hash " << graph.content_hash() << '\n';
      return 0;
    }

    if (*pre) {
      LoadOptions load;
      load.featureless_seed = g.seed;
      const auto graph = load_graph(data_dir, load);
      pre_opts.memoize = !no_memo;
      PrecomputeTimings timings;
      const auto set = precompute(graph, pre_opts, &timings);
      const auto t0 = Clock::now();
      write_precomputed(pre_out, set);
      const double write_ms = ms_since(t0);
      Index n_feature = 0;
      for (const auto& m : set.matrices) n_feature += m.path.kind == MetapathKind::feature ? 1 : 0;
      std::cout << "feature metapaths: " << n_feature << '\n'
                << "label metapaths: " << static_cast<Index>(set.matrices.size()) - n_feature << '\n';
      for (const auto& m : set.matrices) {
        std::cout << "  " << m.path.id() << "  " << m.matrix.rows() << "x" << m.matrix.cols() << '\n';
      }
      std::cout << "features_ms " << timings.features_ms << "\nlabels_ms " << timings.labels_ms << "\nwrite_ms "
                << write_ms << "\ngraph_hash " << set.graph_hash << '\n';
      return 0;
    }

    if (*tr) {
      RunConfig config;
      if (!config_file.empty()) config = load_run_config(config_file);
      for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
          std::cerr << "--set expects key=value, got '" << kv << "'\n";
          return 1;
        }
        apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (seed_opt->count() > 0) config.seed = g.seed;
      if (precision_opt->count() > 0) config.precision = parse_precision(g.precision);

      const auto t0 = Clock::now();
      const auto set = load_precomputed(precomputed);
      const double load_ms = ms_since(t0);
      if (!config.expected_graph_hash.empty() && config.expected_graph_hash != set.graph_hash) {
        throw DataError("precomputed graph hash " + set.graph_hash + " differs from expected " +
                        config.expected_graph_hash);
      }
      if ((config.max_hop_features >= 0 && config.max_hop_features != set.max_hop_features) ||
          (config.max_hop_labels >= 0 && config.max_hop_labels != set.max_hop_labels)) {
        throw DataError("precomputed hop bounds (" + std::to_string(set.max_hop_features) + ", " +
                        std::to_string(set.max_hop_labels) + ") differ from the configured ones");
      }

      auto result = train(set.matrices, set.labels, set.num_classes, config);
      result.report.precompute_ms = load_ms;
      if (checkpoint_file.empty()) checkpoint_file = fs::path(report_file).replace_extension(".ckpt");
      if (checkpoint_file.has_parent_path()) fs::create_directories(checkpoint_file.parent_path());
      save_checkpoint(checkpoint_file, result.checkpoint);
      auto j = result.report.to_json();
      j["graph_hash"] = set.graph_hash;
      j["metapaths"] = set.metapath_ids();
      j["checkpoint"] = checkpoint_file.string();
      if (repeats > 1) {
        std::vector<TrainReport> runs{result.report};
        for (int r = 1; r < repeats; ++r) {
          RunConfig c = config;
          c.seed = config.seed + static_cast<std::uint64_t>(r);
          runs.push_back(train(set.matrices, set.labels, set.num_classes, c).report);
        }
        auto& list = j["repeats"] = nlohmann::json::array();
        for (int r = 0; r < repeats; ++r) {
          const auto& rep = runs[static_cast<size_t>(r)];
          list.push_back({{"seed", config.seed + static_cast<std::uint64_t>(r)},
                          {"best_epoch", rep.best_epoch},
                          {"val_micro_f1", rep.val.micro_f1},
                          {"test_micro_f1", rep.test.micro_f1},
                          {"test_macro_f1", rep.test.macro_f1}});
        }
        for (const char* key : {"test_micro_f1", "test_macro_f1"}) {
          double mean = 0;
          for (const auto& e : list) mean += e[key].get<double>();
          mean /= repeats;
          double var = 0;
          for (const auto& e : list) var += std::pow(e[key].get<double>() - mean, 2);
          j[std::string(key) + "_mean"] = mean;
          j[std::string(key) + "_std"] = std::sqrt(var / repeats);
        }
      }
      write_json(report_file, j);
      std::cout << "best_epoch " << result.report.best_epoch << "\nval_micro_f1 " << result.report.val.micro_f1
                << "\ntest_micro_f1 " << result.report.test.micro_f1 << "\ntest_macro_f1 "
                << result.report.test.macro_f1 << "\nepoch_ms_mean " << result.report.epoch_ms_mean << '\n';
      return 0;
    }

    if (*ev) {
      const auto set = load_precomputed(precomputed);
      if (!eval_config.empty()) {
        const auto config = load_run_config(eval_config);
        if (!config.expected_graph_hash.empty() && config.expected_graph_hash != set.graph_hash) {
          throw DataError("precomputed graph hash " + set.graph_hash + " differs from expected " +
                          config.expected_graph_hash);
        }
      }
      const auto checkpoint = load_checkpoint(eval_checkpoint);
      if (checkpoint.params.config.metapaths != set.metapath_ids()) {
        throw DataError("checkpoint was trained on a different metapath set than " + precomputed.string());
      }
      const MatrixXd probabilities = predict(checkpoint, set.matrices);
      std::vector<Index> rows;
      for (Index r : set.labels.rows_in(parse_split(split_name))) {
        if (set.labels.is_labeled(r)) rows.push_back(r);
      }
      const auto metrics = evaluate(probabilities, set.labels.labels, rows);
      auto j = to_json(metrics);
      j["split"] = split_name;
      std::cout << j.dump(2) << '\n';
      if (!eval_out.empty()) write_json(eval_out, j);
      return 0;
    }

    if (*bench) {
      bench_opts.seed = g.seed;
      if (precision_opt->count() > 0) bench_opts.run.precision = parse_precision(g.precision);
      if (target_nodes > 0) {
        for (auto& t : bench_opts.graph.node_types) {
          if (t.name == bench_opts.graph.target_type) t.count = target_nodes;
        }
      }
      for (const auto& s : sweeps) {
        const auto eq = s.find('=');
        const auto key = s.substr(0, eq);
        if (eq == std::string::npos) throw CLI::ValidationError("--sweep", "expected key=values");
        if (key == "edges") {
          bench_opts.edge_scales = parse_scales(s.substr(eq + 1));
        } else if (key == "k") {
          for (double v : parse_scales(s.substr(eq + 1))) bench_opts.metapath_counts.push_back(static_cast<Index>(v));
        } else {
          throw CLI::ValidationError("--sweep", "unknown sweep '" + key + "'");
        }
      }
      const auto report = run_bench(bench_opts);
      const auto j = report.to_json();
      std::cout << j.dump(2) << '\n';
      if (!bench_out.empty()) write_json(bench_out, j);
      return 0;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
