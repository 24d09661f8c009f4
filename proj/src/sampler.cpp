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
#include "redisc/sampler.hpp"

#include <cmath>
#include <memory>

#include "redisc/error.hpp"

namespace redisc {

DenoiseFn make_denoise_fn(const LabelFusionNet& net, const GraphContext& ctx) {
  auto cached = std::make_shared<nn::Tensor2>(net.first_layer_transform(ctx));
  return [&net, &ctx, cached](const LabelState& s) { return denoise_predict(net, ctx, s, cached.get()); };
}

namespace {

void check_pred(const nn::Tensor2& pred, std::size_t n) {
  if (pred.rows() != n || pred.cols() == 0) {
    throw ComputeError("denoiser output has " + std::to_string(pred.rows()) + " rows, expected " +
                       std::to_string(n));
  }
}

ClassId draw_class(const nn::Tensor2& pred, std::size_t i, Rng& rng) {
  return static_cast<ClassId>(rng.categorical(pred.row(i)));
}

void finish(const LabelState& s) {
  if (s.t != 0 || s.num_masked() != 0) {
    throw ComputeError("sampler finished with sink entries left");
  }
}

}  // namespace

LabelState reverse_step(const LabelState& yt, const RoutingDraw& routing, const nn::Tensor2& pred,
                        Rng& rng) {
  if (yt.t < 1) throw ComputeError("reverse_step: state is already at t=0");
  const std::size_t n = yt.size();
  if (routing.v_prime.size() != n) throw ComputeError("reverse_step: routing size mismatch");
  LabelState out{yt.labels, yt.t - 1};
  bool checked = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (yt.labels[i] || !routing.v_prime[i]) continue;
    if (!checked) {
      check_pred(pred, n);
      checked = true;
    }
    out.labels[i] = draw_class(pred, i, rng);
  }
  return out;
}

LabelState sample_unconditional(const DenoiseFn& denoise, std::size_t num_nodes,
                                const NoiseSchedule& sched, Rng& rng, SampleTrace* trace,
                                const StepObserver& observer) {
  LabelState state = LabelState::all_sink(num_nodes, sched.horizon());
  if (trace) *trace = SampleTrace{{}, std::vector<std::size_t>(num_nodes, 0), 0};
  const nn::Tensor2 none;
  while (state.t > 0) {
    const std::size_t t = state.t;
    const std::size_t masked = state.num_masked();
    RoutingDraw routing = draw_routing(state, sched, rng);
    std::size_t selected = 0;
    for (auto v : routing.v_prime) selected += v;
    LabelState next;
    if (selected > 0) {
      const nn::Tensor2 pred = denoise(state);
      if (trace) ++trace->denoiser_calls;
      next = reverse_step(state, routing, pred, rng);
    } else {
      next = reverse_step(state, routing, none, rng);
    }
    if (trace) {
      trace->steps.push_back({t, masked, selected, 0, selected});
      for (std::size_t i = 0; i < num_nodes; ++i) {
        if (!state.labels[i] && next.labels[i]) trace->denoised_at[i] = t;
      }
    }
    state = std::move(next);
    if (observer) observer(state);
  }
  finish(state);
  return state;
}

LabelState sample_conditional_labeled_first(const DenoiseFn& denoise,
                                            std::span<const Label> observed,
                                            const NoiseSchedule& sched, Rng& rng,
                                            SampleTrace* trace, const StepObserver& observer) {
  const std::size_t n = observed.size();
  LabelState state = LabelState::all_sink(n, sched.horizon());
  if (trace) *trace = SampleTrace{{}, std::vector<std::size_t>(n, 0), 0};

  std::vector<NodeId> masked_labeled;
  std::vector<NodeId> masked_unlabeled;
  std::vector<std::uint8_t> chosen(n, 0);
  while (state.t > 0) {
    const std::size_t t = state.t;
    masked_labeled.clear();
    masked_unlabeled.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (state.labels[i]) continue;
      (observed[i] ? masked_labeled : masked_unlabeled).push_back(static_cast<NodeId>(i));
    }
    const std::size_t masked = masked_labeled.size() + masked_unlabeled.size();

    // stochastic rounding keeps E[budget] = M lambda'
    const double expected = static_cast<double>(masked) * sched.lambda_prime(t);
    const double whole = std::floor(expected);
    std::size_t budget = static_cast<std::size_t>(whole);
    if (rng.bernoulli(expected - whole)) ++budget;
    budget = std::min(budget, masked);
    if (t == 1 && budget != masked) throw ComputeError("final step budget does not cover all masked nodes");

    rng.shuffle(masked_labeled);
    const std::size_t take_l = std::min(budget, masked_labeled.size());
    const std::size_t take_u = budget - take_l;
    // partial Fisher-Yates: the first take_u entries are a uniform subset
    for (std::size_t k = 0; k < take_u; ++k) {
      const auto j = k + static_cast<std::size_t>(rng.uniform_index(masked_unlabeled.size() - k));
      std::swap(masked_unlabeled[k], masked_unlabeled[j]);
    }

    LabelState next{state.labels, t - 1};
    for (std::size_t k = 0; k < take_l; ++k) {
      const NodeId i = masked_labeled[k];
      next.labels[i] = *observed[i];
    }
    if (take_u > 0) {
      const nn::Tensor2 pred = denoise(state);
      if (trace) ++trace->denoiser_calls;
      check_pred(pred, n);
      std::fill(chosen.begin(), chosen.end(), 0);
      for (std::size_t k = 0; k < take_u; ++k) chosen[masked_unlabeled[k]] = 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen[i]) next.labels[i] = draw_class(pred, i, rng);
      }
    }
    if (trace) {
      trace->steps.push_back({t, masked, budget, take_l, take_u});
      for (std::size_t i = 0; i < n; ++i) {
        if (!state.labels[i] && next.labels[i]) trace->denoised_at[i] = t;
      }
    }
    state = std::move(next);
    if (observer) observer(state);
  }
  finish(state);
  return state;
}

std::vector<ClassId> clean_labels(const LabelState& state) {
  std::vector<ClassId> out(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!state.labels[i]) throw ComputeError("node " + std::to_string(i) + " is still in the sink state");
    out[i] = *state.labels[i];
  }
  return out;
}

}  // namespace redisc
