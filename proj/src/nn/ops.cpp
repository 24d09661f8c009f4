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
#include <algorithm>
#include <cmath>
#include <numbers>

#include "redisc/error.hpp"
#include "redisc/nn/tape.hpp"

namespace redisc::nn {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ComputeError(what);
}

bool any_grad(Var a) { return a.tape().requires_grad(a); }
bool any_grad(Var a, Var b) { return any_grad(a) || any_grad(b); }

// c += a * b
void gemm_nn(const Tensor2& a, const Tensor2& b, Tensor2& c) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c.row(i).data();
    const double* ai = a.row(i).data();
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      if (av == 0.0) continue;
      const double* bp = b.row(p).data();
      for (std::size_t j = 0; j < m; ++j) ci[j] += av * bp[j];
    }
  }
}

// c += a * b^T
void gemm_nt(const Tensor2& a, const Tensor2& b, Tensor2& c) {
  const std::size_t n = a.rows(), k = b.rows(), m = a.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a.row(i).data();
    double* ci = c.row(i).data();
    for (std::size_t p = 0; p < k; ++p) {
      const double* bp = b.row(p).data();
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += ai[j] * bp[j];
      ci[p] += s;
    }
  }
}

// c += a^T * b
void gemm_tn(const Tensor2& a, const Tensor2& b, Tensor2& c) {
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a.row(i).data();
    const double* bi = b.row(i).data();
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ai[p];
      if (av == 0.0) continue;
      double* cp = c.row(p).data();
      for (std::size_t j = 0; j < m; ++j) cp[j] += av * bi[j];
    }
  }
}

}  // namespace

Var matmul(Var a, Var b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  Tensor2 out(a.rows(), b.cols());
  gemm_nn(a.value(), b.value(), out);
  return a.tape().record(std::move(out), any_grad(a, b), [a, b](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    if (Tensor2* ga = t.grad_buffer(a)) gemm_nt(g, b.value(), *ga);
    if (Tensor2* gb = t.grad_buffer(b)) gemm_tn(a.value(), g, *gb);
  });
}

Var add_row(Var a, Var row) {
  require(row.rows() == 1 && row.cols() == a.cols(), "add_row: row must be 1 x cols(a)");
  Tensor2 out = a.value();
  const auto r = row.value().row(0);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto o = out.row(i);
    for (std::size_t j = 0; j < o.size(); ++j) o[j] += r[j];
  }
  return a.tape().record(std::move(out), any_grad(a, row), [a, row](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    if (Tensor2* ga = t.grad_buffer(a)) {
      for (std::size_t j = 0; j < g.size(); ++j) ga->data()[j] += g.data()[j];
    }
    if (Tensor2* gr = t.grad_buffer(row)) {
      auto dst = gr->row(0);
      for (std::size_t i = 0; i < g.rows(); ++i) {
        const auto src = g.row(i);
        for (std::size_t j = 0; j < src.size(); ++j) dst[j] += src[j];
      }
    }
  });
}

Var affine(Var x, Var w, Var b) { return add_row(matmul(x, w), b); }

Var add(Var a, Var b) {
  require(a.value().same_shape(b.value()), "add: shape mismatch");
  Tensor2 out = a.value();
  for (std::size_t j = 0; j < out.size(); ++j) out.data()[j] += b.value().data()[j];
  return a.tape().record(std::move(out), any_grad(a, b), [a, b](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    for (Var v : {a, b}) {
      if (Tensor2* gv = t.grad_buffer(v)) {
        for (std::size_t j = 0; j < g.size(); ++j) gv->data()[j] += g.data()[j];
      }
    }
  });
}

Var hadamard(Var a, Var b) {
  require(a.value().same_shape(b.value()), "hadamard: shape mismatch");
  Tensor2 out = a.value();
  for (std::size_t j = 0; j < out.size(); ++j) out.data()[j] *= b.value().data()[j];
  return a.tape().record(std::move(out), any_grad(a, b), [a, b](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    if (Tensor2* ga = t.grad_buffer(a)) {
      for (std::size_t j = 0; j < g.size(); ++j) ga->data()[j] += g.data()[j] * b.value().data()[j];
    }
    if (Tensor2* gb = t.grad_buffer(b)) {
      for (std::size_t j = 0; j < g.size(); ++j) gb->data()[j] += g.data()[j] * a.value().data()[j];
    }
  });
}

Var scale(Var a, double s) {
  Tensor2 out = a.value();
  for (double& v : out.data()) v *= s;
  return a.tape().record(std::move(out), any_grad(a), [a, s](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    if (Tensor2* ga = t.grad_buffer(a)) {
      for (std::size_t j = 0; j < g.size(); ++j) ga->data()[j] += s * g.data()[j];
    }
  });
}

Var relu(Var x) {
  Tensor2 out = x.value();
  for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
  return x.tape().record(std::move(out), any_grad(x), [x](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    if (Tensor2* gx = t.grad_buffer(x)) {
      const auto& xv = x.value().data();
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (xv[j] > 0.0) gx->data()[j] += g.data()[j];
      }
    }
  });
}

Var sigmoid(Var x) {
  Tensor2 out = x.value();
  for (double& v : out.data()) v = 1.0 / (1.0 + std::exp(-v));
  return x.tape().record(std::move(out), any_grad(x), [x](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    const Tensor2& xv = x.value();
    if (Tensor2* gx = t.grad_buffer(x)) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double s = 1.0 / (1.0 + std::exp(-xv.data()[j]));
        gx->data()[j] += g.data()[j] * s * (1.0 - s);
      }
    }
  });
}

Var sparse_propagate(const CsrMatrix& a, Var h) {
  require(a.cols == h.rows(), "sparse_propagate: shape mismatch");
  const std::size_t d = h.cols();
  Tensor2 out(a.rows, d);
  const Tensor2& hv = h.value();
  for (std::size_t i = 0; i < a.rows; ++i) {
    double* oi = out.row(i).data();
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const double w = vals[k];
      const double* hj = hv.row(cols[k]).data();
      for (std::size_t c = 0; c < d; ++c) oi[c] += w * hj[c];
    }
  }
  const CsrMatrix* ap = &a;
  return h.tape().record(std::move(out), any_grad(h), [ap, h](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    Tensor2* gh = t.grad_buffer(h);
    if (gh == nullptr) return;
    const std::size_t d = g.cols();
    for (std::size_t i = 0; i < ap->rows; ++i) {
      const double* gi = g.row(i).data();
      const auto cols = ap->row_cols(i);
      const auto vals = ap->row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        double* dst = gh->row(cols[k]).data();
        const double w = vals[k];
        for (std::size_t c = 0; c < d; ++c) dst[c] += w * gi[c];
      }
    }
  });
}

Var gather_rows(Var table, std::span<const std::optional<std::size_t>> index) {
  const std::size_t d = table.cols();
  Tensor2 out(index.size(), d);
  std::vector<std::optional<std::size_t>> idx(index.begin(), index.end());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (!idx[i]) continue;
    require(*idx[i] < table.rows(), "gather_rows: index out of range");
    std::copy_n(table.value().row(*idx[i]).begin(), d, out.row(i).begin());
  }
  return table.tape().record(std::move(out), any_grad(table),
                             [table, idx = std::move(idx)](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    Tensor2* gt = t.grad_buffer(table);
    if (gt == nullptr) return;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (!idx[i]) continue;
      auto dst = gt->row(*idx[i]);
      const auto src = g.row(i);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
    }
  });
}

Var concat_cols(Var a, Var b) {
  require(a.rows() == b.rows(), "concat_cols: row counts differ");
  const std::size_t ca = a.cols(), cb = b.cols();
  Tensor2 out(a.rows(), ca + cb);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy_n(a.value().row(i).begin(), ca, out.row(i).begin());
    std::copy_n(b.value().row(i).begin(), cb, out.row(i).begin() + static_cast<std::ptrdiff_t>(ca));
  }
  return a.tape().record(std::move(out), any_grad(a, b), [a, b, ca, cb](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    Tensor2* ga = t.grad_buffer(a);
    Tensor2* gb = t.grad_buffer(b);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      const auto src = g.row(i);
      if (ga) {
        for (std::size_t c = 0; c < ca; ++c) (*ga)(i, c) += src[c];
      }
      if (gb) {
        for (std::size_t c = 0; c < cb; ++c) (*gb)(i, c) += src[ca + c];
      }
    }
  });
}

Var broadcast_rows(Var row, std::size_t n) {
  require(row.rows() == 1, "broadcast_rows: expected a single row");
  Tensor2 out(n, row.cols());
  for (std::size_t i = 0; i < n; ++i) std::copy_n(row.value().row(0).begin(), row.cols(), out.row(i).begin());
  return row.tape().record(std::move(out), any_grad(row), [row](Tape& t, std::size_t self) {
    const Tensor2& g = t.grad_of(self);
    Tensor2* gr = t.grad_buffer(row);
    if (gr == nullptr) return;
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t c = 0; c < g.cols(); ++c) (*gr)(0, c) += g(i, c);
    }
  });
}

Var sum(Var x) {
  double s = 0.0;
  for (double v : x.value().data()) s += v;
  return x.tape().record(Tensor2(1, 1, s), any_grad(x), [x](Tape& t, std::size_t self) {
    const double g = t.grad_of(self)(0, 0);
    if (Tensor2* gx = t.grad_buffer(x)) {
      for (double& v : gx->data()) v += g;
    }
  });
}

Var weighted_softmax_ce(Var logits, std::span<const ClassId> targets,
                        std::span<const double> weights, std::span<const NodeId> active) {
  const std::size_t n = logits.rows();
  const std::size_t c = logits.cols();
  require(targets.size() == n, "weighted_softmax_ce: one target per row required");
  require(weights.size() == n, "weighted_softmax_ce: one weight per row required");
  for (NodeId i : active) {
    require(i < n, "weighted_softmax_ce: active index out of range");
    require(weights[i] >= 0.0, "weighted_softmax_ce: weights must be non-negative");
    require(targets[i] < c, "weighted_softmax_ce: target out of range");
  }
  const Tensor2& z = logits.value();
  double loss = 0.0;
  for (NodeId i : active) {
    if (weights[i] == 0.0) continue;
    const auto zi = z.row(i);
    const double m = *std::max_element(zi.begin(), zi.end());
    double s = 0.0;
    for (double v : zi) s += std::exp(v - m);
    loss += weights[i] * (m + std::log(s) - zi[targets[i]]);
  }
  std::vector<ClassId> tg(targets.begin(), targets.end());
  std::vector<double> wt(weights.begin(), weights.end());
  std::vector<NodeId> act(active.begin(), active.end());
  return logits.tape().record(
      Tensor2(1, 1, loss), any_grad(logits),
      [logits, tg = std::move(tg), wt = std::move(wt), act = std::move(act)](Tape& t, std::size_t self) {
        const double g = t.grad_of(self)(0, 0);
        Tensor2* gl = t.grad_buffer(logits);
        if (gl == nullptr) return;
        const Tensor2& z = logits.value();
        for (NodeId i : act) {
          if (wt[i] == 0.0) continue;
          const auto zi = z.row(i);
          const double m = *std::max_element(zi.begin(), zi.end());
          double s = 0.0;
          for (double v : zi) s += std::exp(v - m);
          auto dst = gl->row(i);
          for (std::size_t k = 0; k < zi.size(); ++k) {
            const double p = std::exp(zi[k] - m) / s;
            dst[k] += g * wt[i] * (p - (k == tg[i] ? 1.0 : 0.0));
          }
        }
      });
}

std::vector<double> time_encoding(double t, std::size_t dim) {
  if (dim == 0 || dim % 2 != 0) throw ConfigError("time_encoding: dim must be even and positive");
  std::vector<double> out(dim);
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const double freq = std::pow(10000.0, -2.0 * static_cast<double>(i) / static_cast<double>(dim));
    out[2 * i] = std::sin(t * freq);
    out[2 * i + 1] = std::cos(t * freq);
  }
  return out;
}

}  // namespace redisc::nn
