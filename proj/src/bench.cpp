#include "sehgnn/bench.hpp"

#include "sehgnn/metapath.hpp"
#include "sehgnn/precompute.hpp"

#include <algorithm>
#include <chrono>

namespace sehgnn {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Job {
  BenchPoint point;
  HeteroGraph graph;
  PrecomputedSet set;
  size_t metapaths = 0;  // 0 = all
  std::vector<double> precompute_times;
};

Job make_job(const BenchOptions& o, const SyntheticConfig& graph_config, std::string sweep, double scale) {
  Job job;
  job.graph = gen_synthetic(graph_config, o.seed);
  job.point.sweep = std::move(sweep);
  job.point.edge_scale = scale;
  job.point.target_nodes = job.graph.num_target_nodes();
  job.point.total_edges = job.graph.num_edges();
  job.point.hidden = o.run.hidden;
  return job;
}

// Rounds visit every job in turn, so slow drift in machine load lands on all
// points alike instead of on whichever point happened to run during it.
void measure(const BenchOptions& o, std::vector<Job>& jobs) {
  const PrecomputeOptions pre{o.max_hop_features, o.max_hop_labels, true};
  for (int r = 0; r < std::max(1, o.precompute_repeats); ++r) {
    for (auto& job : jobs) {
      const auto t0 = Clock::now();
      job.set = precompute(job.graph, pre);
      job.precompute_times.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    }
  }
  RunConfig run = o.run;
  run.max_epochs = o.warmup_epochs + o.timed_epochs;
  run.patience = run.max_epochs;
  run.seed = o.seed;
  for (int round = 0; round < std::max(1, o.rounds); ++round) {
    for (auto& job : jobs) {
      std::span<const SemanticMatrix> matrices = job.set.matrices;
      if (job.metapaths > 0) matrices = matrices.first(job.metapaths);
      const auto result = train(matrices, job.set.labels, job.set.num_classes, run);
      const auto& epochs = result.report.epochs;
      auto& point = job.point;
      point.metapaths = static_cast<Index>(matrices.size());
      for (size_t e = 0; e < epochs.size(); ++e) {
        if (static_cast<int>(e) < o.warmup_epochs) {
          point.warmup_ms += epochs[e].epoch_ms;
        } else {
          point.timed_ms += epochs[e].epoch_ms;
          ++point.timed_epochs;
        }
      }
    }
  }
  for (auto& job : jobs) {
    auto& point = job.point;
    point.precompute_ms = median(job.precompute_times);
    point.epoch_ms = point.timed_ms / std::max(1, point.timed_epochs);
    point.total_ms = point.precompute_ms + point.warmup_ms + point.timed_ms;
  }
}

}  // namespace

std::vector<BenchPoint> BenchReport::sweep(std::string_view name) const {
  std::vector<BenchPoint> out;
  std::copy_if(points.begin(), points.end(), std::back_inserter(out), [&](const auto& p) { return p.sweep == name; });
  return out;
}

BenchReport run_bench(const BenchOptions& options) {
  if (options.edge_scales.empty()) throw std::invalid_argument("bench: empty edge sweep");
  if (options.timed_epochs < 1) throw std::invalid_argument("bench: need at least one timed epoch");

  retain_freed_memory();
  BenchReport report;
  SyntheticConfig base = options.graph;
  for (;; ++report.size_doublings) {
    std::vector<Job> jobs;
    for (double scale : options.edge_scales) {
      SyntheticConfig g = base;
      g.edge_scale = base.edge_scale * scale;
      jobs.push_back(make_job(options, g, "edges", scale));
    }
    measure(options, jobs);
    report.points.clear();
    for (const auto& job : jobs) report.points.push_back(job.point);
    const auto& first = report.points.front();
    const bool coarse = first.precompute_ms < options.min_phase_ms || first.epoch_ms < options.min_phase_ms;
    if (!coarse || report.size_doublings >= options.max_size_doublings) break;
    for (auto& t : base.node_types) t.count *= 2;
  }

  if (!options.metapath_counts.empty()) {
    SyntheticConfig g = base;
    g.edge_scale = base.edge_scale * options.edge_scales.front();
    std::vector<Job> jobs;
    for (Index k : options.metapath_counts) {
      auto job = make_job(options, g, "k", options.edge_scales.front());
      const auto available = enumerate_metapaths(job.graph.schema, options.max_hop_features, options.max_hop_labels);
      const auto total = static_cast<Index>(available.feature_paths.size() + available.label_paths.size());
      if (k < 1 || k > total) {
        throw std::invalid_argument("bench: metapath count " + std::to_string(k) + " outside [1, " +
                                    std::to_string(total) + "]");
      }
      job.metapaths = static_cast<size_t>(k);
      jobs.push_back(std::move(job));
    }
    measure(options, jobs);
    for (const auto& job : jobs) report.points.push_back(job.point);
  }

  const auto edges = report.sweep("edges");
  double lo = edges.front().epoch_ms;
  double hi = lo;
  report.precompute_increasing = true;
  for (size_t i = 0; i < edges.size(); ++i) {
    lo = std::min(lo, edges[i].epoch_ms);
    hi = std::max(hi, edges[i].epoch_ms);
    if (i > 0 && !(edges[i].precompute_ms > edges[i - 1].precompute_ms)) report.precompute_increasing = false;
  }
  report.epoch_spread = hi / lo - 1.0;
  return report;
}

nlohmann::json BenchReport::to_json() const {
  nlohmann::json j;
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : points) {
    pts.push_back({{"sweep", p.sweep},
                   {"edge_scale", p.edge_scale},
                   {"target_nodes", p.target_nodes},
                   {"total_edges", p.total_edges},
                   {"metapaths", p.metapaths},
                   {"hidden", p.hidden},
                   {"precompute_ms", p.precompute_ms},
                   {"epoch_ms", p.epoch_ms},
                   {"warmup_ms", p.warmup_ms},
                   {"timed_ms", p.timed_ms},
                   {"timed_epochs", p.timed_epochs},
                   {"total_ms", p.total_ms}});
  }
  j["size_doublings"] = size_doublings;
  j["epoch_spread"] = epoch_spread;
  j["precompute_increasing"] = precompute_increasing;
  j["notes"] = {
      "epoch cost depends on N, K and D only; edge count enters through precompute alone",
      "epoch_spread = max/min - 1 of epoch_ms across the edge sweep",
  };
  return j;
}

}  // namespace sehgnn
