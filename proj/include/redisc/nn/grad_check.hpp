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

#include "redisc/nn/tape.hpp"
#include "redisc/rng.hpp"

namespace redisc::nn {

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::size_t coords_checked = 0;
};

/// Compares backprop gradients of the scalar built by `f` against central
/// finite differences with step `h`, on a random subsample of at least
/// `min_coords` parameter coordinates (all of them when fewer exist).
///
/// Relative error per coordinate is |g_bp - g_fd| / max(|g_bp|, |g_fd|, 1e-6).
/// `params` is perturbed in place and restored before returning.
GradCheckResult grad_check(const std::function<Var(Tape&)>& f, ParamStore& params, Rng& rng,
                           std::size_t min_coords = 100, double h = 1e-5);

}  // namespace redisc::nn
