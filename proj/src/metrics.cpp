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
#include "redisc/metrics.hpp"

#include "redisc/error.hpp"

namespace redisc {

namespace {

void check_inputs(std::span<const ClassId> pred, std::span<const Label> truth,
                  std::span<const NodeId> idx) {
  if (idx.empty()) throw ComputeError("accuracy over an empty index set");
  if (pred.size() != truth.size()) throw ComputeError("prediction and truth lengths differ");
  for (NodeId i : idx) {
    if (i >= truth.size()) throw ComputeError("index " + std::to_string(i) + " out of range");
    if (!truth[i]) throw ComputeError("node " + std::to_string(i) + " has no ground-truth label");
  }
}

}  // namespace

double node_accuracy(std::span<const ClassId> pred, std::span<const Label> truth,
                     std::span<const NodeId> idx) {
  check_inputs(pred, truth, idx);
  std::size_t hit = 0;
  for (NodeId i : idx) hit += pred[i] == *truth[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(idx.size());
}

double subgraph_accuracy(std::span<const ClassId> pred, std::span<const Label> truth,
                         const Adjacency& adj, std::span<const NodeId> idx) {
  check_inputs(pred, truth, idx);
  if (adj.num_nodes != pred.size()) throw ComputeError("graph size does not match predictions");
  std::size_t hit = 0;
  for (NodeId i : idx) {
    bool ok = pred[i] == *truth[i];
    for (NodeId j : adj.neighbors(i)) {
      if (!ok) break;
      if (truth[j] && pred[j] != *truth[j]) ok = false;
    }
    hit += ok ? 1 : 0;
  }
  return static_cast<double>(hit) / static_cast<double>(idx.size());
}

}  // namespace redisc
