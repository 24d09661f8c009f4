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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "redisc/graph.hpp"
#include "redisc/nn/params.hpp"
#include "redisc/nn/tensor.hpp"

namespace redisc::nn {

class Tape;

/// Handle to a value recorded on a Tape.
class Var {
 public:
  Var() = default;

  [[nodiscard]] const Tensor2& value() const;
  [[nodiscard]] std::size_t rows() const { return value().rows(); }
  [[nodiscard]] std::size_t cols() const { return value().cols(); }
  [[nodiscard]] Tape& tape() const { return *tape_; }
  [[nodiscard]] std::size_t id() const { return id_; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Records primitive ops in execution order and replays them backwards.
///
/// Nodes are appended in topological order, so backward() is a single reverse
/// sweep. Parameters enter through param(); backward() returns one gradient per
/// parameter of the store, zero for parameters the forward pass never touched.
class Tape {
 public:
  Tape() = default;
  explicit Tape(const ParamStore& params) : params_(&params) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf that never receives a gradient.
  Var constant(Tensor2 value);
  /// Leaf whose gradient is kept and readable via grad() after backward().
  Var input(Tensor2 value);
  Var param(ParamId id);
  Var param(std::string_view name);

  [[nodiscard]] const Tensor2& value(Var v) const { return nodes_[v.id_].value; }
  [[nodiscard]] bool requires_grad(Var v) const { return nodes_[v.id_].requires_grad; }
  /// Gradient of the last backward() target w.r.t. `v` (zeros if unreached).
  [[nodiscard]] Tensor2 grad(Var v) const;
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const ParamStore* params() const { return params_; }

  /// Reverse sweep from a 1x1 `loss`.
  Gradients backward(Var loss);

  /// Op-author interface: appends a node. `backward` receives the tape and the
  /// index of the new node and must accumulate into its inputs via accumulate().
  using BackwardFn = std::function<void(Tape&, std::size_t)>;
  Var record(Tensor2 value, bool requires_grad, BackwardFn backward);
  /// Gradient flowing into node `id` (valid inside a BackwardFn).
  [[nodiscard]] const Tensor2& grad_of(std::size_t id) const { return nodes_[id].grad; }
  /// Adds into the gradient buffer of `v` if it requires one; returns the
  /// buffer or nullptr.
  Tensor2* grad_buffer(Var v);

 private:
  struct Node {
    Tensor2 value;
    Tensor2 grad;
    bool requires_grad = false;
    bool keep_grad = false;
    std::optional<ParamId> param;
    BackwardFn backward;
  };

  std::vector<Node> nodes_;
  const ParamStore* params_ = nullptr;
};

// ---- primitive ops --------------------------------------------------------

/// a (n x k) times b (k x m).
Var matmul(Var a, Var b);
/// x W + b, with b a 1 x m row broadcast over rows.
Var affine(Var x, Var w, Var b);
Var add(Var a, Var b);
/// Adds a 1 x m row to every row of `a`.
Var add_row(Var a, Var row);
Var hadamard(Var a, Var b);
Var scale(Var a, double s);
Var relu(Var x);
Var sigmoid(Var x);
/// A h for a sparse constant A; the backward pass multiplies by A^T.
Var sparse_propagate(const CsrMatrix& a, Var h);
/// Row i of the result is table[index[i]], or zeros when index[i] is absent.
Var gather_rows(Var table, std::span<const std::optional<std::size_t>> index);
Var concat_cols(Var a, Var b);
/// Repeats a 1 x m row n times.
Var broadcast_rows(Var row, std::size_t n);
/// Sum of all entries, as a 1 x 1 value.
Var sum(Var x);

/// sum_{i in active} weights[i] * CE(targets[i], softmax(logits_i)).
/// Rows outside `active` receive no gradient. Throws ComputeError on negative
/// weights or targets outside [0, C).
Var weighted_softmax_ce(Var logits, std::span<const ClassId> targets,
                        std::span<const double> weights, std::span<const NodeId> active);

/// Interleaved sinusoidal encoding: out[2i] = sin(t w_i), out[2i+1] = cos(t w_i),
/// with w_i = 10000^(-2i/dim). Throws ConfigError for odd or zero dim.
std::vector<double> time_encoding(double t, std::size_t dim);

}  // namespace redisc::nn
