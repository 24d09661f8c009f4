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

#include <span>

#include "redisc/graph.hpp"

namespace redisc {

/// Fraction of `idx` with pred == truth. Throws ComputeError on an empty
/// index set or an index without a ground-truth label.
double node_accuracy(std::span<const ClassId> pred, std::span<const Label> truth,
                     std::span<const NodeId> idx);

/// Fraction of `idx` whose own prediction and those of all graph neighbours
/// are correct. Neighbours without a ground-truth label are skipped; an
/// isolated node counts by its own correctness.
double subgraph_accuracy(std::span<const ClassId> pred, std::span<const Label> truth,
                         const Adjacency& adj, std::span<const NodeId> idx);

}  // namespace redisc
