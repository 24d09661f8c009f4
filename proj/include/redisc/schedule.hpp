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
#include <span>
#include <vector>

#include "redisc/graph.hpp"
#include "redisc/rng.hpp"

namespace redisc {

/// Masking schedule of the absorbing-state diffusion.
///
/// alpha[t] is the probability that a label is still intact at step t
/// (alpha[0] = 1, alpha[T] = 0, strictly decreasing). The per-step keep rate is
/// beta(t) = alpha[t] / alpha[t-1], and lambda_prime(t) is the probability
/// that a node still masked at step t is denoised on the way to t-1:
///
///   lambda_prime(t) = (alpha[t-1] - alpha[t]) / (1 - alpha[t]).
class NoiseSchedule {
 public:
  NoiseSchedule() = default;
  /// Builds beta and lambda_prime from alpha; validates the endpoint and
  /// monotonicity invariants.
  explicit NoiseSchedule(std::vector<double> alpha);

  [[nodiscard]] std::size_t horizon() const { return alpha_.size() - 1; }
  [[nodiscard]] double alpha(std::size_t t) const { return alpha_.at(t); }
  /// t in [1, T].
  [[nodiscard]] double beta(std::size_t t) const { return beta_.at(t - 1); }
  /// t in [1, T]; the rate used for the step t -> t-1.
  [[nodiscard]] double lambda_prime(std::size_t t) const { return lambda_prime_.at(t - 1); }

  [[nodiscard]] const std::vector<double>& alphas() const { return alpha_; }
  [[nodiscard]] const std::vector<double>& lambda_primes() const { return lambda_prime_; }

 private:
  std::vector<double> alpha_{1.0, 0.0};
  std::vector<double> beta_{0.0};
  std::vector<double> lambda_prime_{1.0};
};

inline constexpr double kCosineOffset = 0.008;

/// alpha[t] = cos^2(((t/T + s)/(1 + s)) pi/2) / cos^2((s/(1 + s)) pi/2), with
/// alpha[T] set to exactly 0.
NoiseSchedule cosine_schedule(std::size_t horizon, double offset = kCosineOffset);

/// Per-node labels at diffusion step t; an empty entry is the sink state.
struct LabelState {
  std::vector<Label> labels;
  std::size_t t = 0;

  [[nodiscard]] std::size_t size() const { return labels.size(); }
  [[nodiscard]] std::size_t num_masked() const;
  [[nodiscard]] bool is_masked(NodeId i) const { return !labels[i].has_value(); }

  static LabelState all_sink(std::size_t n, std::size_t t);
};

/// Routing indicators for one reverse step. b[i] = 1 for nodes already
/// denoised (they always keep their label, v = 1); v_prime is drawn only for
/// masked nodes and is 0 elsewhere.
struct RoutingDraw {
  std::vector<std::uint8_t> b;
  std::vector<std::uint8_t> v;
  std::vector<std::uint8_t> v_prime;
};

/// Each node keeps its clean label with probability alpha[t], else sink.
/// Consumes exactly one draw per node.
LabelState forward_mask(std::span<const ClassId> clean, std::size_t t, const NoiseSchedule& sched,
                        Rng& rng);

/// Requires state.t >= 1. Draws v' ~ Bernoulli(lambda_prime(t)) for masked
/// nodes only; no draws are consumed when nothing is masked.
RoutingDraw draw_routing(const LabelState& state, const NoiseSchedule& sched, Rng& rng);

struct LossMask {
  /// lambda_prime(t) on masked nodes, 0 elsewhere.
  std::vector<double> weights;
  /// Masked nodes, ascending.
  std::vector<NodeId> active;
};

/// Reweighting of the denoising cross-entropy for a forward-masked state.
/// Throws ComputeError if a non-sink entry of `noisy` disagrees with `clean`.
LossMask loss_weight_and_mask(std::span<const ClassId> clean, const LabelState& noisy,
                              const NoiseSchedule& sched);

}  // namespace redisc
