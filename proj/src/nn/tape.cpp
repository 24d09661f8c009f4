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
#include "redisc/nn/tape.hpp"

#include "redisc/error.hpp"

namespace redisc::nn {

const Tensor2& Var::value() const { return tape_->value(*this); }

Var Tape::record(Tensor2 value, bool requires_grad, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor2 value) { return record(std::move(value), false, nullptr); }

Var Tape::input(Tensor2 value) {
  Var v = record(std::move(value), true, nullptr);
  nodes_[v.id_].keep_grad = true;
  return v;
}

Var Tape::param(ParamId id) {
  if (params_ == nullptr || id >= params_->size()) throw ComputeError("Tape::param: no such parameter");
  Var v = record(params_->value(id), true, nullptr);
  nodes_[v.id_].param = id;
  return v;
}

Var Tape::param(std::string_view name) {
  if (params_ == nullptr) throw ComputeError("Tape::param: tape has no parameter store");
  return param(params_->id(name));
}

Tensor2 Tape::grad(Var v) const {
  const Node& n = nodes_[v.id_];
  if (n.grad.size() == 0) return Tensor2(n.value.rows(), n.value.cols());
  return n.grad;
}

Tensor2* Tape::grad_buffer(Var v) {
  Node& n = nodes_[v.id_];
  if (!n.requires_grad) return nullptr;
  if (n.grad.size() == 0 && n.value.size() != 0) n.grad = Tensor2(n.value.rows(), n.value.cols());
  return &n.grad;
}

Gradients Tape::backward(Var loss) {
  if (loss.tape_ != this) throw ComputeError("backward: variable belongs to another tape");
  const Tensor2& lv = nodes_[loss.id_].value;
  if (lv.rows() != 1 || lv.cols() != 1) throw ComputeError("backward: loss must be 1x1");

  Gradients out;
  if (params_ != nullptr) {
    out.reserve(params_->size());
    for (ParamId k = 0; k < params_->size(); ++k) {
      out.emplace_back(params_->value(k).rows(), params_->value(k).cols());
    }
  }
  for (auto& n : nodes_) n.grad = Tensor2();
  if (!nodes_[loss.id_].requires_grad) return out;

  nodes_[loss.id_].grad = Tensor2(1, 1, 1.0);
  for (std::size_t id = loss.id_ + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.grad.size() == 0) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param) {
      auto& dst = out[*n.param].data();
      const auto& src = n.grad.data();
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
    if (!n.keep_grad && !n.param && id != loss.id_) n.grad = Tensor2();
  }
  return out;
}

}  // namespace redisc::nn
