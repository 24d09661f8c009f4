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
#include "redisc/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace redisc::nn {

GradCheckResult grad_check(const std::function<Var(Tape&)>& f, ParamStore& params, Rng& rng,
                           std::size_t min_coords, double h) {
  Gradients analytic;
  {
    Tape tape(params);
    analytic = tape.backward(f(tape));
  }
  auto evaluate = [&]() {
    Tape tape(params);
    return f(tape).value()(0, 0);
  };

  std::vector<std::pair<ParamId, std::size_t>> coords;
  for (ParamId p = 0; p < params.size(); ++p) {
    for (std::size_t j = 0; j < params.value(p).size(); ++j) coords.emplace_back(p, j);
  }
  rng.shuffle(coords);
  if (coords.size() > min_coords) coords.resize(min_coords);

  GradCheckResult result;
  for (const auto& [p, j] : coords) {
    double& x = params.value(p).data()[j];
    const double saved = x;
    x = saved + h;
    const double up = evaluate();
    x = saved - h;
    const double down = evaluate();
    x = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double backprop = analytic[p].data()[j];
    const double denom = std::max({std::abs(numeric), std::abs(backprop), 1e-6});
    result.max_rel_err = std::max(result.max_rel_err, std::abs(numeric - backprop) / denom);
    ++result.coords_checked;
  }
  return result;
}

}  // namespace redisc::nn
