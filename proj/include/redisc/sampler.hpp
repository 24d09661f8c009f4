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

#include <functional>
#include <span>
#include <vector>

#include "redisc/denoiser.hpp"
#include "redisc/nn/tensor.hpp"
#include "redisc/rng.hpp"
#include "redisc/schedule.hpp"

namespace redisc {

/// Maps a noisy state to per-node class distributions (N x C). Rows of
/// already denoised nodes are ignored by the samplers.
using DenoiseFn = std::function<nn::Tensor2(const LabelState&)>;

/// Wraps a trained denoiser; the label- and time-independent first-layer
/// transform is computed once.
DenoiseFn make_denoise_fn(const LabelFusionNet& net, const GraphContext& ctx);

/// Called with the state after every reverse step (t already decremented).
using StepObserver = std::function<void(const LabelState&)>;

struct StepRecord {
  std::size_t t = 0;
  std::size_t masked = 0;
  std::size_t budget = 0;
  std::size_t labeled_selected = 0;
  std::size_t unlabeled_selected = 0;
};

struct SampleTrace {
  std::vector<StepRecord> steps;
  /// Step t at which each node left the sink state (0 if it never was masked).
  std::vector<std::size_t> denoised_at;
  std::size_t denoiser_calls = 0;
};

/// One reverse transition t -> t-1. Unmasked nodes are copied; masked nodes
/// with v' = 1 draw a class from their `pred` row; others stay sink.
LabelState reverse_step(const LabelState& yt, const RoutingDraw& routing, const nn::Tensor2& pred,
                        Rng& rng);

/// Ancestral sampling from the all-sink state at T. The denoiser is only
/// evaluated at steps where some node is routed to be denoised.
LabelState sample_unconditional(const DenoiseFn& denoise, std::size_t num_nodes,
                                const NoiseSchedule& sched, Rng& rng, SampleTrace* trace = nullptr,
                                const StepObserver& observer = {});

/// Conditional sampling given observed labels (`observed[i]` set exactly on
/// the labeled nodes). At each step the budget floor(M lambda') + Bernoulli(frac)
/// over the M masked nodes is spent on masked labeled nodes first (random
/// order), which are clamped to their observed label; the rest goes to masked
/// unlabeled nodes chosen uniformly without replacement, which draw from the
/// denoiser.
LabelState sample_conditional_labeled_first(const DenoiseFn& denoise,
                                            std::span<const Label> observed,
                                            const NoiseSchedule& sched, Rng& rng,
                                            SampleTrace* trace = nullptr,
                                            const StepObserver& observer = {});

/// Clean labels of a fully denoised state; throws ComputeError on sink.
std::vector<ClassId> clean_labels(const LabelState& state);

}  // namespace redisc
