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
#include <vector>

#include "redisc/denoiser.hpp"
#include "redisc/graph.hpp"
#include "redisc/nn/tape.hpp"
#include "redisc/nn/tensor.hpp"
#include "redisc/rng.hpp"

namespace redisc {

// ---- label spreading ------------------------------------------------------

struct LPConfig {
  double lambda = 0.9;
  std::size_t iterations = 50;
  double tolerance = 1e-6;
};

struct LPResult {
  /// Unnormalized fixed-point scores, N x C.
  nn::Tensor2 scores;
  std::size_t iterations = 0;
  /// Frobenius norm of F_{k+1} - F_k per iteration.
  std::vector<double> residuals;
  bool converged = false;
};

/// Iterates F <- lambda S F + (1 - lambda) Y0 from F = Y0, where
/// S = D^{-1/2} A D^{-1/2} without self-loops and Y0 holds one-hot rows on
/// `labeled`. Stops when the max-abs change drops below the tolerance.
LPResult label_spread(const GraphBundle& g, std::span<const NodeId> labeled, const LPConfig& cfg);

/// S = D^{-1/2} A D^{-1/2}; isolated nodes get an empty row.
CsrMatrix spreading_operator(const Adjacency& adj);

// ---- GNN baselines --------------------------------------------------------

struct GnnTrainConfig {
  std::size_t epochs = 200;
  double lr = 0.01;
  double weight_decay = 5e-4;
  std::size_t hidden = 64;
  std::size_t layers = 2;
  std::uint64_t seed = 0;
};

struct TrainHistory {
  /// Training loss per epoch (0 when the epoch had no supervised node).
  std::vector<double> loss;
  /// Validation accuracy of the parameters entering each epoch.
  std::vector<double> val_acc;
  double final_val_acc = 0.0;
  /// Number of optimizer steps taken by the selected parameters.
  std::size_t best_epoch = 0;
  double best_val_acc = 0.0;
};

struct GnnModel {
  LabelFusionNet net;
  TrainHistory history;
  /// Input labels used at inference (empty for the plain GNN).
  std::vector<Label> inference_labels;
};

/// Plain network without label input. Mean cross-entropy over the train
/// split; the returned parameters are those with the best validation
/// accuracy (ties: lower validation loss, then earlier).
GnnModel train_vanilla_gnn(const GraphBundle& g, const GraphContext& ctx, const GnnTrainConfig& cfg);

/// Label-trick network (label input, gate fixed to 1). Every epoch splits the
/// train nodes into V_in ~ Bernoulli(lambda_in) and V_out; labels of V_in are
/// fed as input and the mean cross-entropy over V_out is minimized. Inference
/// feeds all train labels.
GnnModel train_label_trick(const GraphBundle& g, const GraphContext& ctx, double lambda_in,
                           const GnnTrainConfig& cfg);

/// Network config of the baselines over a bundle.
NetConfig baseline_config(const GraphBundle& g, std::size_t hidden, std::size_t layers,
                          bool label_input);

/// Sum of cross-entropies over `v_out` of `net` run with input labels `y_in`.
nn::Var label_trick_loss(nn::Tape& tape, const LabelFusionNet& net, const GraphContext& ctx,
                         std::span<const Label> y_in, std::span<const NodeId> v_out,
                         std::span<const ClassId> targets, std::optional<double> t = std::nullopt);

/// Row-softmax of one forward pass.
nn::Tensor2 predict_proba(const LabelFusionNet& net, const GraphContext& ctx,
                          std::span<const Label> y_in = {});

/// Row argmax of one forward pass (ties to the lowest class).
std::vector<ClassId> predict_independent(const LabelFusionNet& net, const GraphContext& ctx,
                                         std::span<const Label> y_in = {});

std::vector<ClassId> argmax_rows(const nn::Tensor2& scores);

/// One independent categorical draw per row.
std::vector<ClassId> sample_independent(const nn::Tensor2& probs, Rng& rng);

/// Labels of `idx` taken from the bundle, as a length-N observed vector.
std::vector<Label> observed_labels(const GraphBundle& g, std::span<const NodeId> idx);

/// Known labels with unknown entries mapped to class 0 (for CE targets).
std::vector<ClassId> dense_targets(const GraphBundle& g);

}  // namespace redisc
