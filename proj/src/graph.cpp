// Copyright 2026 The redisc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "redisc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "redisc/error.hpp"
#include "redisc/rng.hpp"

namespace redisc {

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  const auto cols_r = row_cols(r);
  const auto it = std::lower_bound(cols_r.begin(), cols_r.end(), static_cast<NodeId>(c));
  if (it == cols_r.end() || *it != c) return 0.0;
  return values[row_ptr[r] + static_cast<std::size_t>(it - cols_r.begin())];
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  CsrMatrix m;
  m.rows = m.cols = n;
  m.row_ptr.resize(n + 1);
  m.col_idx.resize(n);
  m.values.assign(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) m.row_ptr[i] = i;
  for (std::size_t i = 0; i < n; ++i) m.col_idx[i] = static_cast<NodeId>(i);
  return m;
}

Adjacency Adjacency::from_directed(std::size_t num_nodes,
                                   std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<std::pair<NodeId, NodeId>> sorted(edges.begin(), edges.end());
  for (const auto& [s, d] : sorted) {
    if (s >= num_nodes || d >= num_nodes) {
      throw LoadError("edge (" + std::to_string(s) + "," + std::to_string(d) +
                      ") references a node outside [0," + std::to_string(num_nodes) + ")");
    }
    if (s == d) throw LoadError("self-loop on node " + std::to_string(s));
  }
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    throw LoadError("duplicate edge (" + std::to_string(dup->first) + "," +
                    std::to_string(dup->second) + ")");
  }
  for (const auto& [s, d] : sorted) {
    if (!std::binary_search(sorted.begin(), sorted.end(), std::pair{d, s})) {
      throw LoadError("edge (" + std::to_string(s) + "," + std::to_string(d) +
                      ") has no reverse edge");
    }
  }
  Adjacency adj;
  adj.num_nodes = num_nodes;
  adj.row_ptr.assign(num_nodes + 1, 0);
  adj.col_idx.reserve(sorted.size());
  for (const auto& [s, d] : sorted) {
    ++adj.row_ptr[s + 1];
    adj.col_idx.push_back(d);
  }
  std::partial_sum(adj.row_ptr.begin(), adj.row_ptr.end(), adj.row_ptr.begin());
  return adj;
}

Adjacency Adjacency::from_undirected(std::size_t num_nodes,
                                     std::span<const std::pair<NodeId, NodeId>> edges) {
  std::vector<std::pair<NodeId, NodeId>> both;
  both.reserve(edges.size() * 2);
  for (const auto& [s, d] : edges) {
    both.emplace_back(s, d);
    both.emplace_back(d, s);
  }
  return from_directed(num_nodes, both);
}

void GraphBundle::validate() const {
  if (adjacency.num_nodes != num_nodes) throw LoadError("adjacency size differs from num_nodes");
  if (features.size() != num_nodes * num_features) {
    throw LoadError("feature matrix has " + std::to_string(features.size()) +
                    " values, expected " + std::to_string(num_nodes * num_features));
  }
  if (labels.size() != num_nodes) throw LoadError("label count differs from num_nodes");
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features[i])) {
      throw LoadError("non-finite feature at value index " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    if (labels[i] && *labels[i] >= num_classes) {
      throw LoadError("label of node " + std::to_string(i) + " is out of range");
    }
  }
  std::vector<int> owner(num_nodes, -1);
  const std::vector<NodeId>* lists[] = {&splits.train_idx, &splits.val_idx, &splits.test_idx};
  const char* names[] = {"train", "val", "test"};
  for (int s = 0; s < 3; ++s) {
    const auto& idx = *lists[s];
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const NodeId i = idx[k];
      if (i >= num_nodes) {
        throw LoadError(std::string(names[s]) + " split index " + std::to_string(i) +
                        " out of range");
      }
      if (k > 0 && idx[k - 1] >= i) {
        throw LoadError(std::string(names[s]) + " split is not strictly sorted");
      }
      if (owner[i] != -1) {
        throw LoadError("node " + std::to_string(i) + " appears in both " + names[owner[i]] +
                        " and " + names[s] + " splits");
      }
      owner[i] = s;
      if (s < 2 && !labels[i]) {
        throw LoadError(std::string(names[s]) + " node " + std::to_string(i) + " is unlabeled");
      }
    }
  }
}

NormalizedAdjacency normalize_adjacency(const GraphBundle& g) {
  const Adjacency& a = g.adjacency;
  const std::size_t n = a.num_nodes;
  std::vector<double> deg(n);
  for (std::size_t i = 0; i < n; ++i) deg[i] = static_cast<double>(a.degree(static_cast<NodeId>(i)) + 1);

  CsrMatrix m;
  m.rows = m.cols = n;
  m.row_ptr.assign(n + 1, 0);
  m.col_idx.reserve(a.num_directed_edges() + n);
  m.values.reserve(a.num_directed_edges() + n);
  for (std::size_t i = 0; i < n; ++i) {
    bool self_done = false;
    auto emit = [&](std::size_t j) {
      m.col_idx.push_back(static_cast<NodeId>(j));
      m.values.push_back(1.0 / std::sqrt(deg[i] * deg[j]));
    };
    for (NodeId j : a.neighbors(static_cast<NodeId>(i))) {
      if (!self_done && j > i) {
        emit(i);
        self_done = true;
      }
      emit(j);
    }
    if (!self_done) emit(i);
    m.row_ptr[i + 1] = m.col_idx.size();
  }
  return m;
}

CsrMatrix feature_matrix(const GraphBundle& g) {
  CsrMatrix m;
  m.rows = g.num_nodes;
  m.cols = g.num_features;
  m.row_ptr.assign(g.num_nodes + 1, 0);
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    const auto row = g.feature_row(static_cast<NodeId>(i));
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] != 0.0f) {
        m.col_idx.push_back(static_cast<NodeId>(c));
        m.values.push_back(static_cast<double>(row[c]));
      }
    }
    m.row_ptr[i + 1] = m.col_idx.size();
  }
  return m;
}

SplitSpec make_class_balanced_split(const GraphBundle& g, std::size_t per_class_train,
                           std::size_t per_class_val, std::uint64_t seed) {
  std::vector<std::vector<NodeId>> by_class(g.num_classes);
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    if (g.labels[i]) by_class[*g.labels[i]].push_back(static_cast<NodeId>(i));
  }
  Rng rng(seed, streams::kSplit);
  SplitSpec split;
  std::vector<bool> used(g.num_nodes, false);
  for (std::size_t c = 0; c < g.num_classes; ++c) {
    auto& members = by_class[c];
    if (members.size() < per_class_train + per_class_val) {
      throw ConfigError("class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                        " labeled nodes, fewer than the " +
                        std::to_string(per_class_train + per_class_val) + " requested");
    }
    rng.shuffle(members);
    for (std::size_t k = 0; k < per_class_train; ++k) {
      split.train_idx.push_back(members[k]);
      used[members[k]] = true;
    }
    for (std::size_t k = per_class_train; k < per_class_train + per_class_val; ++k) {
      split.val_idx.push_back(members[k]);
      used[members[k]] = true;
    }
  }
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    if (g.labels[i] && !used[i]) split.test_idx.push_back(static_cast<NodeId>(i));
  }
  std::sort(split.train_idx.begin(), split.train_idx.end());
  std::sort(split.val_idx.begin(), split.val_idx.end());
  return split;
}

GraphBundle generate_sbm(const SbmParams& p) {
  if (!(0.0 <= p.p_out && p.p_out <= p.p_in && p.p_in <= 1.0)) {
    throw ConfigError("generate_sbm requires 0 <= p_out <= p_in <= 1");
  }
  if (p.num_classes == 0 || p.feat_dim == 0) {
    throw ConfigError("generate_sbm requires at least one class and one feature");
  }
  const std::size_t n = p.n_per_class * p.num_classes;
  Rng master(p.seed, streams::kSynth);
  Rng edge_rng = master.fork(1);
  Rng feat_rng = master.fork(2);

  GraphBundle g;
  g.num_nodes = n;
  g.num_classes = p.num_classes;
  g.num_features = p.feat_dim;
  g.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.labels[i] = static_cast<ClassId>(i / p.n_per_class);

  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double prob = (*g.labels[i] == *g.labels[j]) ? p.p_in : p.p_out;
      if (edge_rng.bernoulli(prob)) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
  }
  g.adjacency = Adjacency::from_undirected(n, edges);

  // Classes beyond feat_dim share centroid axes (class mod feat_dim).
  g.features.resize(n * p.feat_dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < p.feat_dim; ++c) {
      double v = p.feat_noise * feat_rng.normal();
      if (c == *g.labels[i] % p.feat_dim) v += 1.0;
      g.features[i * p.feat_dim + c] = static_cast<float>(v);
    }
  }
  return g;
}

}  // namespace redisc
