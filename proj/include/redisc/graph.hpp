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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace redisc {

using NodeId = std::uint32_t;
using ClassId = std::uint16_t;
/// A node label that may be unknown.
using Label = std::optional<ClassId>;

/// Compressed sparse row matrix with 64-bit weights.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<NodeId> col_idx;
  std::vector<double> values;

  [[nodiscard]] std::size_t nnz() const { return col_idx.size(); }
  [[nodiscard]] std::span<const NodeId> row_cols(std::size_t r) const {
    return {col_idx.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  [[nodiscard]] std::span<const double> row_values(std::size_t r) const {
    return {values.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  /// Dense lookup; O(row length).
  [[nodiscard]] double at(std::size_t r, std::size_t c) const;

  static CsrMatrix identity(std::size_t n);
};

/// Unweighted undirected adjacency, both directions stored, columns sorted.
struct Adjacency {
  std::size_t num_nodes = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<NodeId> col_idx;

  [[nodiscard]] std::span<const NodeId> neighbors(NodeId i) const {
    return {col_idx.data() + row_ptr[i], row_ptr[i + 1] - row_ptr[i]};
  }
  [[nodiscard]] std::size_t degree(NodeId i) const { return row_ptr[i + 1] - row_ptr[i]; }
  [[nodiscard]] std::size_t num_directed_edges() const { return col_idx.size(); }
  [[nodiscard]] std::size_t num_undirected_edges() const { return col_idx.size() / 2; }

  /// Builds from undirected pairs; each pair is inserted in both directions.
  /// Throws on self-loops, out-of-range ids or duplicate edges.
  static Adjacency from_undirected(std::size_t num_nodes,
                                   std::span<const std::pair<NodeId, NodeId>> edges);
  /// Builds from directed pairs that must already be symmetric.
  static Adjacency from_directed(std::size_t num_nodes,
                                 std::span<const std::pair<NodeId, NodeId>> edges);
};

struct SplitSpec {
  std::vector<NodeId> train_idx;
  std::vector<NodeId> val_idx;
  std::vector<NodeId> test_idx;
};

/// Immutable graph with features, labels and splits.
struct GraphBundle {
  std::size_t num_nodes = 0;
  std::size_t num_features = 0;
  std::size_t num_classes = 0;
  Adjacency adjacency;
  /// Row-major N x d.
  std::vector<float> features;
  std::vector<Label> labels;
  SplitSpec splits;
  /// Extra meta.json keys (e.g. converter provenance), kept verbatim as a
  /// serialized JSON object so that re-serialization is lossless.
  std::string extra_meta = "{}";

  [[nodiscard]] std::span<const float> feature_row(NodeId i) const {
    return {features.data() + static_cast<std::size_t>(i) * num_features, num_features};
  }

  /// Throws LoadError describing the first violated invariant.
  void validate() const;
};

/// D̃^{-1/2}(A+I)D̃^{-1/2} with D̃ the degree matrix of A+I.
using NormalizedAdjacency = CsrMatrix;

NormalizedAdjacency normalize_adjacency(const GraphBundle& g);

/// Features as a CSR matrix holding only the non-zero entries.
CsrMatrix feature_matrix(const GraphBundle& g);

/// Per-class random split: `per_class_train` and `per_class_val` labeled
/// nodes of each class, every other labeled node goes to test.
SplitSpec make_class_balanced_split(const GraphBundle& g, std::size_t per_class_train,
                           std::size_t per_class_val, std::uint64_t seed);

struct SbmParams {
  std::size_t n_per_class = 100;
  std::size_t num_classes = 4;
  double p_in = 0.9;
  double p_out = 0.02;
  std::size_t feat_dim = 8;
  double feat_noise = 0.5;
  std::uint64_t seed = 0;
};

/// Stochastic block model. Node i belongs to block i / n_per_class; features
/// are the block's one-hot centroid plus isotropic Gaussian noise. Splits are
/// left empty.
GraphBundle generate_sbm(const SbmParams& params);

}  // namespace redisc
