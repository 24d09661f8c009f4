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
#include "redisc/nn/params.hpp"

#include <cmath>

#include "redisc/binary.hpp"
#include "redisc/error.hpp"

namespace redisc::nn {

ParamId ParamStore::add(std::string name, Tensor2 init) {
  if (find(name)) throw ComputeError("duplicate parameter name '" + name + "'");
  Tensor2 zeros(init.rows(), init.cols());
  entries_.push_back({std::move(name), std::move(init), zeros, zeros});
  return entries_.size() - 1;
}

std::optional<ParamId> ParamStore::find(std::string_view name) const {
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k].name == name) return k;
  }
  return std::nullopt;
}

ParamId ParamStore::id(std::string_view name) const {
  if (auto k = find(name)) return *k;
  throw ComputeError("unknown parameter '" + std::string(name) + "'");
}

std::size_t ParamStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.value.size();
  return n;
}

void ParamStore::save(const std::filesystem::path& file) const {
  ByteWriter out;
  out.u32(static_cast<std::uint32_t>(entries_.size()));
  for (const auto& e : entries_) {
    out.u16(static_cast<std::uint16_t>(e.name.size()));
    out.bytes(e.name);
    out.u32(static_cast<std::uint32_t>(e.value.rows()));
    out.u32(static_cast<std::uint32_t>(e.value.cols()));
    for (double v : e.value.data()) out.f64(v);
  }
  out.save(file);
}

ParamStore ParamStore::load(const std::filesystem::path& file) {
  ByteReader in(file);
  ParamStore store;
  const std::uint32_t count = in.u32();
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint16_t len = in.u16();
    std::string name = in.bytes(len);
    const std::uint32_t rows = in.u32();
    const std::uint32_t cols = in.u32();
    Tensor2 t(rows, cols);
    for (double& v : t.data()) {
      const std::size_t offset = in.offset();
      v = in.f64();
      if (!std::isfinite(v)) {
        throw LoadError(in.path() + ": non-finite parameter value at offset " + std::to_string(offset));
      }
    }
    try {
      store.add(std::move(name), std::move(t));
    } catch (const ComputeError& e) {
      throw LoadError(in.path() + ": " + e.what());
    }
  }
  in.expect_end();
  return store;
}

void ParamStore::assign_values(const ParamStore& other) {
  for (auto& e : entries_) {
    const ParamId src = other.id(e.name);
    if (!other.value(src).same_shape(e.value)) {
      throw ComputeError("parameter '" + e.name + "' has a different shape in the source store");
    }
    e.value = other.value(src);
  }
}

void optimizer_step(ParamStore& params, const Gradients& grads, double lr, double weight_decay) {
  if (grads.size() != params.entries_.size()) throw ComputeError("optimizer_step: gradient count mismatch");
  for (std::size_t k = 0; k < grads.size(); ++k) {
    if (!grads[k].same_shape(params.entries_[k].value)) {
      throw ComputeError("optimizer_step: gradient shape mismatch for '" + params.entries_[k].name + "'");
    }
    if (!grads[k].all_finite()) {
      throw ComputeError("optimizer_step: non-finite gradient for '" + params.entries_[k].name + "'");
    }
  }
  ++params.step_;
  const double t = static_cast<double>(params.step_);
  const double bc1 = 1.0 - std::pow(kAdamBeta1, t);
  const double bc2 = 1.0 - std::pow(kAdamBeta2, t);
  for (std::size_t k = 0; k < grads.size(); ++k) {
    auto& e = params.entries_[k];
    auto& p = e.value.data();
    auto& m = e.m.data();
    auto& v = e.v.data();
    const auto& g = grads[k].data();
    for (std::size_t j = 0; j < p.size(); ++j) {
      p[j] -= lr * weight_decay * p[j];
      m[j] = kAdamBeta1 * m[j] + (1.0 - kAdamBeta1) * g[j];
      v[j] = kAdamBeta2 * v[j] + (1.0 - kAdamBeta2) * g[j] * g[j];
      const double m_hat = m[j] / bc1;
      const double v_hat = v[j] / bc2;
      p[j] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEps);
    }
  }
}

}  // namespace redisc::nn
