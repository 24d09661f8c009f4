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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "redisc/nn/tensor.hpp"

namespace redisc::nn {

using ParamId = std::size_t;

/// Named parameter tensors with their adaptive-moment state.
class ParamStore {
 public:
  /// Adds a parameter; names must be unique.
  ParamId add(std::string name, Tensor2 init);

  [[nodiscard]] std::optional<ParamId> find(std::string_view name) const;
  /// Like find(), but throws ComputeError for unknown names.
  [[nodiscard]] ParamId id(std::string_view name) const;

  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const std::string& name(ParamId id) const { return entries_[id].name; }
  [[nodiscard]] const Tensor2& value(ParamId id) const { return entries_[id].value; }
  Tensor2& value(ParamId id) { return entries_[id].value; }
  [[nodiscard]] const Tensor2& first_moment(ParamId id) const { return entries_[id].m; }
  [[nodiscard]] const Tensor2& second_moment(ParamId id) const { return entries_[id].v; }
  [[nodiscard]] std::uint64_t step() const { return step_; }
  [[nodiscard]] std::size_t num_scalars() const;

  /// Checkpoint layout (little-endian): u32 tensor count, then per tensor
  /// u16 name length, UTF-8 name, u32 rows, u32 cols, f64 values.
  /// Optimizer moments are not part of a checkpoint.
  void save(const std::filesystem::path& file) const;
  static ParamStore load(const std::filesystem::path& file);

  /// Overwrites values from `other`, matching by name and shape.
  void assign_values(const ParamStore& other);

 private:
  struct Entry {
    std::string name;
    Tensor2 value;
    Tensor2 m;
    Tensor2 v;
  };
  std::vector<Entry> entries_;
  std::uint64_t step_ = 0;

  friend void optimizer_step(ParamStore&, const std::vector<Tensor2>&, double, double);
};

/// Per-parameter gradients, indexed by ParamId.
using Gradients = std::vector<Tensor2>;

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

/// Bias-corrected adaptive-moment step with decoupled weight decay: each
/// parameter is first shrunk by p -= lr * weight_decay * p, then moved by
/// -lr * m_hat / (sqrt(v_hat) + eps). Throws ComputeError, leaving the store
/// untouched, if any gradient is non-finite or shaped wrongly.
void optimizer_step(ParamStore& params, const Gradients& grads, double lr, double weight_decay);

}  // namespace redisc::nn
