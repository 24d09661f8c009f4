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
#include "redisc/schedule.hpp"

#include <cmath>
#include <numbers>

#include "redisc/error.hpp"

namespace redisc {

NoiseSchedule::NoiseSchedule(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() < 2) throw ConfigError("noise schedule needs a horizon of at least 1");
  if (alpha_.front() != 1.0 || alpha_.back() != 0.0) {
    throw ConfigError("noise schedule must start at alpha=1 and end at alpha=0");
  }
  const std::size_t horizon = alpha_.size() - 1;
  beta_.assign(horizon, 0.0);
  lambda_prime_.assign(horizon, 0.0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    if (!(alpha_[t] < alpha_[t - 1])) {
      throw ConfigError("noise schedule alpha is not strictly decreasing at t=" + std::to_string(t));
    }
    beta_[t - 1] = alpha_[t] / alpha_[t - 1];
    lambda_prime_[t - 1] = (alpha_[t - 1] - alpha_[t]) / (1.0 - alpha_[t]);
  }
}

NoiseSchedule cosine_schedule(std::size_t horizon, double offset) {
  if (horizon < 1) throw ConfigError("cosine_schedule: T must be at least 1");
  auto f = [&](double t) {
    const double c = std::cos((t / static_cast<double>(horizon) + offset) / (1.0 + offset) *
                              std::numbers::pi / 2.0);
    return c * c;
  };
  const double f0 = f(0.0);
  std::vector<double> alpha(horizon + 1);
  alpha[0] = 1.0;
  for (std::size_t t = 1; t < horizon; ++t) alpha[t] = f(static_cast<double>(t)) / f0;
  alpha[horizon] = 0.0;
  return NoiseSchedule(std::move(alpha));
}

std::size_t LabelState::num_masked() const {
  std::size_t m = 0;
  for (const auto& l : labels) m += l.has_value() ? 0 : 1;
  return m;
}

LabelState LabelState::all_sink(std::size_t n, std::size_t t) {
  return LabelState{std::vector<Label>(n), t};
}

LabelState forward_mask(std::span<const ClassId> clean, std::size_t t, const NoiseSchedule& sched,
                        Rng& rng) {
  if (t > sched.horizon()) {
    throw ComputeError("forward_mask: t=" + std::to_string(t) + " outside [0, T]");
  }
  const double keep = sched.alpha(t);
  LabelState out{std::vector<Label>(clean.size()), t};
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (rng.bernoulli(keep)) out.labels[i] = clean[i];
  }
  return out;
}

RoutingDraw draw_routing(const LabelState& state, const NoiseSchedule& sched, Rng& rng) {
  if (state.t < 1 || state.t > sched.horizon()) throw ComputeError("draw_routing: t outside [1, T]");
  const double lp = sched.lambda_prime(state.t);
  const std::size_t n = state.size();
  RoutingDraw r{std::vector<std::uint8_t>(n), std::vector<std::uint8_t>(n),
                std::vector<std::uint8_t>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    if (state.labels[i]) {
      r.b[i] = 1;
      r.v[i] = 1;
    } else {
      r.v_prime[i] = rng.bernoulli(lp) ? 1 : 0;
    }
  }
  return r;
}

LossMask loss_weight_and_mask(std::span<const ClassId> clean, const LabelState& noisy,
                              const NoiseSchedule& sched) {
  if (noisy.t < 1) throw ComputeError("loss_weight_and_mask: state must be at t >= 1");
  if (clean.size() != noisy.size()) throw ComputeError("loss_weight_and_mask: size mismatch");
  const double lp = sched.lambda_prime(noisy.t);
  LossMask m{std::vector<double>(clean.size(), 0.0), {}};
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (!noisy.labels[i]) {
      m.weights[i] = lp;
      m.active.push_back(static_cast<NodeId>(i));
    } else if (*noisy.labels[i] != clean[i]) {
      throw ComputeError("loss_weight_and_mask: unmasked node " + std::to_string(i) +
                         " differs from the clean label");
    }
  }
  return m;
}

}  // namespace redisc
