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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "redisc/graph.hpp"
#include "redisc/nn/params.hpp"
#include "redisc/nn/tape.hpp"
#include "redisc/rng.hpp"
#include "redisc/schedule.hpp"

namespace redisc {

/// Graph-side inputs shared by every network: sparse features and Â.
struct GraphContext {
  CsrMatrix features;
  NormalizedAdjacency adj;

  static GraphContext from(const GraphBundle& g);
  [[nodiscard]] std::size_t num_nodes() const { return adj.rows; }
};

struct NetConfig {
  std::size_t in_dim = 0;
  std::size_t num_classes = 0;
  std::size_t hidden = 64;
  std::size_t layers = 2;
  std::size_t time_dim = 128;
  /// Fuse embedded input labels into every layer.
  bool label_input = true;
  /// Gate the fused labels with a time- and label-dependent factor in [0,1];
  /// when false the gate is fixed to 1 and no time input exists.
  bool time_gate = true;
};

/// Optional diagnostics filled by a forward pass.
struct ForwardProbe {
  /// Gate values per layer (N x hidden), only when the gate is learned.
  std::vector<nn::Tensor2> gates;
};

/// K-layer GCN-style network with per-layer label fusion:
///
///   X̃ = X^{(k-1)} W_x^{(k)}
///   H̃ = X̃ + γ ∘ Ỹ            (Ỹ = onehot(labels) E, zero rows for sink)
///   X^{(k)} = relu(Â (H̃ W_h^{(k)} + b_h^{(k)}))   (no relu after layer K)
///   logits = X^{(K)} W_o + b_o
///
/// With a learned gate, γ = sigmoid([φ(t), Ỹ] W_g^{(k)} + b_g^{(k)}) where
/// φ is a one-hidden-layer MLP over the sinusoidal time encoding. The concat
/// product is evaluated as φ(t) W_time broadcast plus onehot(labels)(E W_label),
/// which is the same map with W_g = [W_time; W_label].
///
/// The same class serves as the diffusion denoiser (gate on), the label-trick
/// network (labels on, gate fixed to 1) and the plain GNN (labels off).
class LabelFusionNet {
 public:
  /// He-initialized parameters drawn from `init_rng`. Parameters shared by all
  /// variants are drawn first, so variants built from the same stream agree on
  /// them.
  LabelFusionNet(NetConfig config, Rng& init_rng);
  LabelFusionNet(NetConfig config, nn::ParamStore params);

  [[nodiscard]] const NetConfig& config() const { return config_; }
  [[nodiscard]] const nn::ParamStore& params() const { return params_; }
  nn::ParamStore& params() { return params_; }

  /// Records a forward pass and returns the N x C logits. `labels` may be
  /// empty when label_input is off; `t` is required iff the gate is learned.
  /// `first_layer` may supply a precomputed X W_x^{(1)} for inference.
  /// Throws ComputeError naming the layer on a non-finite activation.
  nn::Var logits(nn::Tape& tape, const GraphContext& ctx, std::span<const Label> labels,
                 std::optional<double> t, ForwardProbe* probe = nullptr,
                 const nn::Tensor2* first_layer = nullptr) const;

  /// X W_x^{(1)}; independent of labels and time.
  [[nodiscard]] nn::Tensor2 first_layer_transform(const GraphContext& ctx) const;

 private:
  void check_shapes() const;

  NetConfig config_;
  nn::ParamStore params_;
};

/// Per-node class distribution from the denoiser at step t. Rows of nodes
/// that are not sink in `noisy` are replaced by the exact one-hot of their
/// label.
nn::Tensor2 denoise_predict(const LabelFusionNet& net, const GraphContext& ctx,
                            const LabelState& noisy, const nn::Tensor2* first_layer = nullptr);

/// Rebuilds a network from a checkpoint, inferring the config from the
/// parameter names and shapes.
LabelFusionNet net_from_params(nn::ParamStore params);

/// Network config for the denoiser over a bundle.
NetConfig denoiser_config(const GraphBundle& g, std::size_t hidden, std::size_t layers,
                          std::size_t time_dim);

}  // namespace redisc
