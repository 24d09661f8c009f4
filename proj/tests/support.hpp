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
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "redisc/graph.hpp"

namespace redisc::testing {

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() /
           ("redisc_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// Graph from an edge list; label -1 means unknown. Features default to a
/// one-hot of the node id modulo feat_dim.
inline GraphBundle make_graph(std::size_t n, std::size_t classes,
                              const std::vector<std::pair<NodeId, NodeId>>& edges,
                              const std::vector<int>& labels, std::size_t feat_dim = 2) {
  GraphBundle g;
  g.num_nodes = n;
  g.num_classes = classes;
  g.num_features = feat_dim;
  g.adjacency = Adjacency::from_undirected(n, edges);
  g.features.assign(n * feat_dim, 0.0f);
  for (std::size_t i = 0; i < n; ++i) g.features[i * feat_dim + i % feat_dim] = 1.0f;
  g.labels.resize(n);
  for (std::size_t i = 0; i < n && i < labels.size(); ++i) {
    if (labels[i] >= 0) g.labels[i] = static_cast<ClassId>(labels[i]);
  }
  return g;
}

inline std::vector<NodeId> iota_nodes(NodeId from, NodeId to) {
  std::vector<NodeId> out;
  for (NodeId i = from; i < to; ++i) out.push_back(i);
  return out;
}

}  // namespace redisc::testing
