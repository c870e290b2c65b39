#include "sehgnn/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sehgnn {

SyntheticConfig SyntheticConfig::acm_like() {
  SyntheticConfig c;
  c.node_types = {{"P", 2000, 32}, {"A", 1000, 32}, {"S", 60, 16}};
  c.relations = {{"PA", "P", "A", 3.0}, {"PS", "P", "S", 1.0}, {"PP", "P", "P", 2.0}};
  c.target_type = "P";
  c.num_classes = 3;
  c.feature_noise = {{"P", 4.0}, {"A", 2.0}, {"S", 2.0}};
  return c;
}

SyntheticConfig SyntheticConfig::dblp_like() {
  SyntheticConfig c;
  c.node_types = {{"A", 600, 16}, {"P", 1200, 16}, {"T", 300, 8}, {"V", 20, 8}};
  c.relations = {{"AP", "A", "P", 3.0}, {"PT", "P", "T", 4.0}, {"PV", "P", "V", 1.0}};
  c.target_type = "A";
  c.num_classes = 4;
  c.feature_noise = {{"A", 4.0}, {"P", 2.0}, {"T", 2.0}, {"V", 2.0}};
  return c;
}

Schema SyntheticConfig::schema() const {
  Schema s;
  s.node_types = node_types;
  for (const auto& r : relations) s.relations.push_back({r.name, r.src, r.dst});
  s.target_type = target_type;
  s.num_classes = num_classes;
  return s;
}

HeteroGraph gen_synthetic(const SyntheticConfig& config, std::uint64_t seed) {
  HeteroGraph g;
  g.schema = config.schema();
  g.schema.validate();
  for (const auto& r : config.relations) {
    const double expected = static_cast<double>(g.schema.type(r.src).count) * r.avg_degree * config.edge_scale;
    if ((r.src == config.target_type || r.dst == config.target_type) && !(expected > 0.0)) {
      throw std::invalid_argument("synthetic: relation '" + r.name +
                                  "' touches the target type but expects zero edges");
    }
  }

  const int classes = config.num_classes;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::map<std::string, std::vector<int>> community;
  std::map<std::string, std::vector<std::vector<Index>>> members;
  for (const auto& t : config.node_types) {
    auto& z = community[t.name];
    z.resize(static_cast<size_t>(t.count));
    for (Index i = 0; i < t.count; ++i) z[i] = static_cast<int>(i % classes);
    std::shuffle(z.begin(), z.end(), rng);
    auto& m = members[t.name];
    m.resize(classes);
    for (Index i = 0; i < t.count; ++i) m[z[i]].push_back(i);
  }

  for (const auto& r : config.relations) {
    const Index n_src = g.schema.type(r.src).count;
    const Index n_dst = g.schema.type(r.dst).count;
    const double degree = r.avg_degree * config.edge_scale;
    const auto whole = static_cast<Index>(std::floor(degree));
    std::uniform_int_distribution<Index> any_dst(0, n_dst - 1);
    std::vector<Triplet> edges;
    for (Index s = 0; s < n_src; ++s) {
      const Index k = whole + (unit(rng) < degree - static_cast<double>(whole) ? 1 : 0);
      const auto& same = members[r.dst][community[r.src][s]];
      for (Index e = 0; e < k; ++e) {
        Index d = 0;
        if (unit(rng) < config.homophily && !same.empty()) {
          d = same[std::uniform_int_distribution<size_t>(0, same.size() - 1)(rng)];
        } else {
          d = any_dst(rng);
        }
        if (r.src == r.dst && s == d) continue;
        edges.push_back({s, d, 1.0});
      }
    }
    auto a = SparseMatrix::from_triplets(n_src, n_dst, std::move(edges));
    std::fill(a.values.begin(), a.values.end(), 1.0);
    g.adjacency.emplace(r.name, std::move(a));
  }

  // Majority community over 2-hop target->X->target neighbors, own community
  // on ties or isolation.
  const auto& target = config.target_type;
  const Index n = g.schema.type(target).count;
  const auto& z = community[target];
  std::vector<std::vector<Index>> counts(static_cast<size_t>(n), std::vector<Index>(classes, 0));
  for (const auto& mid : g.schema.adjacent_types(target)) {
    const auto out = g.type_adjacency(target, mid);
    const auto back = g.type_adjacency(mid, target);
    for (Index i = 0; i < n; ++i) {
      for (Index x : out.row_cols(i)) {
        for (Index j : back.row_cols(x)) {
          if (j != i) ++counts[i][z[j]];
        }
      }
    }
  }
  g.labels = LabelTable(n);
  for (Index i = 0; i < n; ++i) {
    const auto& c = counts[i];
    const Index best = *std::max_element(c.begin(), c.end());
    int label = z[i];
    if (best > 0 && c[z[i]] != best) {
      label = static_cast<int>(std::find(c.begin(), c.end(), best) - c.begin());
    }
    g.labels.labels[i] = label;
  }

  for (const auto& t : config.node_types) {
    MatrixXd means(classes, t.feature_dim);
    for (Index i = 0; i < means.size(); ++i) means.data()[i] = normal(rng);
    const auto it = config.feature_noise.find(t.name);
    const double sigma = it == config.feature_noise.end() ? 1.0 : it->second;
    MatrixXd x(t.count, t.feature_dim);
    for (Index i = 0; i < t.count; ++i) {
      for (Index j = 0; j < t.feature_dim; ++j) x(i, j) = means(community[t.name][i], j) + sigma * normal(rng);
    }
    g.features.emplace(t.name, std::move(x));
  }

  // Stratified split by class.
  for (int c = 0; c < classes; ++c) {
    std::vector<Index> nodes;
    for (Index i = 0; i < n; ++i) {
      if (g.labels.labels[i] == c) nodes.push_back(i);
    }
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const auto count = static_cast<double>(nodes.size());
    const auto n_train = static_cast<size_t>(std::llround(count * config.train_fraction));
    const auto n_val = static_cast<size_t>(std::llround(count * config.val_fraction));
    for (size_t k = 0; k < nodes.size(); ++k) {
      g.labels.splits[nodes[k]] = k < n_train ? Split::train : k < n_train + n_val ? Split::val : Split::test;
    }
  }

  g.validate();
  return g;
}

}  // namespace sehgnn
