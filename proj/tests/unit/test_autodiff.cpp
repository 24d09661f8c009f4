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
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "redisc/error.hpp"
#include "redisc/nn/grad_check.hpp"
#include "redisc/nn/params.hpp"
#include "redisc/nn/tape.hpp"

using namespace redisc;
using namespace redisc::nn;

namespace {

Tensor2 random_tensor(std::size_t r, std::size_t c, Rng& rng, double scale = 1.0) {
  Tensor2 t(r, c);
  for (double& v : t.data()) v = scale * rng.normal();
  return t;
}

/// Entries bounded away from the relu kink.
Tensor2 away_from_zero(std::size_t r, std::size_t c, Rng& rng) {
  Tensor2 t(r, c);
  for (double& v : t.data()) {
    const double u = 0.1 + rng.uniform();
    v = rng.bernoulli(0.5) ? u : -u;
  }
  return t;
}

CsrMatrix two_node_half() {
  CsrMatrix a;
  a.rows = a.cols = 2;
  a.row_ptr = {0, 2, 4};
  a.col_idx = {0, 1, 0, 1};
  a.values = {0.5, 0.5, 0.5, 0.5};
  return a;
}

CsrMatrix random_sparse(std::size_t r, std::size_t c, Rng& rng) {
  CsrMatrix a;
  a.rows = r;
  a.cols = c;
  a.row_ptr = {0};
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      if (rng.bernoulli(0.4)) {
        a.col_idx.push_back(static_cast<NodeId>(j));
        a.values.push_back(rng.normal());
      }
    }
    a.row_ptr.push_back(a.col_idx.size());
  }
  return a;
}

/// sum(x * probe) for a fixed random probe, so that gradients are not uniform.
Var probe_sum(Var x, const Tensor2& probe) {
  return sum(hadamard(x, x.tape().constant(probe)));
}

}  // namespace

TEST_CASE("affine: identity weight and zero bias return x") {
  ParamStore ps;
  ps.add("W", Tensor2{{1, 0}, {0, 1}});
  ps.add("b", Tensor2(1, 2));
  Tape tape(ps);
  const Tensor2 x{{1.5, -2}, {3, 4}};
  CHECK(affine(tape.constant(x), tape.param("W"), tape.param("b")).value() == x);
  const Tensor2 zero(2, 2);
  CHECK(affine(tape.constant(zero), tape.param("W"), tape.param("b")).value() == zero);
}

TEST_CASE("affine gradient matches finite differences") {
  Rng rng(1);
  ParamStore ps;
  ps.add("x", random_tensor(5, 4, rng));
  ps.add("W", random_tensor(4, 3, rng));
  ps.add("b", random_tensor(1, 3, rng));
  const Tensor2 probe = random_tensor(5, 3, rng);
  auto f = [&](Tape& t) { return probe_sum(affine(t.param("x"), t.param("W"), t.param("b")), probe); };
  Rng pick(2);
  const auto r = grad_check(f, ps, pick);
  CHECK(r.coords_checked == 20 + 12 + 3);
  CHECK(r.max_rel_err < 1e-6);
}

TEST_CASE("gradient of sum(affine) w.r.t. W is the column sums of x") {
  ParamStore ps;
  ps.add("W", Tensor2(2, 3));
  ps.add("b", Tensor2(1, 3));
  Tape tape(ps);
  const Tensor2 x{{1, 2}, {3, 5}};
  const auto grads = tape.backward(sum(affine(tape.constant(x), tape.param("W"), tape.param("b"))));
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(grads[0](0, j) == 4.0);
    CHECK(grads[0](1, j) == 7.0);
    CHECK(grads[1](0, j) == 2.0);
  }
}

TEST_CASE("sparse_propagate values") {
  ParamStore ps;
  Tape tape(ps);
  const Tensor2 h{{2, 0}, {0, 2}};
  CHECK(sparse_propagate(two_node_half(), tape.constant(h)).value() == Tensor2{{1, 1}, {1, 1}});
  CHECK(sparse_propagate(CsrMatrix::identity(2), tape.constant(h)).value() == h);
}

TEST_CASE("sparse_propagate gradient, square and rectangular") {
  Rng rng(3);
  ParamStore ps;
  ps.add("h", random_tensor(6, 3, rng));
  ps.add("w", random_tensor(7, 2, rng));
  const CsrMatrix a = random_sparse(6, 6, rng);
  const CsrMatrix x = random_sparse(4, 7, rng);
  const Tensor2 p1 = random_tensor(6, 3, rng);
  const Tensor2 p2 = random_tensor(4, 2, rng);
  auto f = [&](Tape& t) {
    return add(probe_sum(sparse_propagate(a, t.param("h")), p1),
               probe_sum(sparse_propagate(x, t.param("w")), p2));
  };
  Rng pick(4);
  CHECK(grad_check(f, ps, pick).max_rel_err < 1e-6);
}

TEST_CASE("sparse_propagate rejects shape mismatch") {
  ParamStore ps;
  Tape tape(ps);
  CHECK_THROWS_AS(sparse_propagate(two_node_half(), tape.constant(Tensor2(3, 1))), ComputeError);
  CHECK_THROWS_AS(matmul(tape.constant(Tensor2(2, 3)), tape.constant(Tensor2(2, 3))), ComputeError);
}

TEST_CASE("relu and sigmoid values") {
  ParamStore ps;
  Tape tape(ps);
  const auto r = relu(tape.constant(Tensor2{{-1, 2}})).value();
  CHECK(r(0, 0) == 0.0);
  CHECK(r(0, 1) == 2.0);
  CHECK(sigmoid(tape.constant(Tensor2{{0}})).value()(0, 0) == 0.5);
}

TEST_CASE("relu and sigmoid gradients away from the kink") {
  Rng rng(5);
  ParamStore ps;
  ps.add("x", away_from_zero(4, 5, rng));
  const Tensor2 probe = random_tensor(4, 5, rng);
  Rng pick(6);
  auto fr = [&](Tape& t) { return probe_sum(relu(t.param("x")), probe); };
  CHECK(grad_check(fr, ps, pick).max_rel_err < 1e-6);
  auto fs = [&](Tape& t) { return probe_sum(sigmoid(t.param("x")), probe); };
  CHECK(grad_check(fs, ps, pick).max_rel_err < 1e-6);
}

TEST_CASE("gather, concat, broadcast, hadamard, scale gradients") {
  Rng rng(7);
  ParamStore ps;
  ps.add("table", random_tensor(3, 4, rng));
  ps.add("a", random_tensor(5, 4, rng));
  ps.add("row", random_tensor(1, 2, rng));
  const std::vector<std::optional<std::size_t>> idx{0, std::nullopt, 2, 2, 1};
  const Tensor2 probe = random_tensor(5, 6, rng);
  auto f = [&](Tape& t) {
    Var g = gather_rows(t.param("table"), idx);
    Var h = scale(hadamard(g, t.param("a")), 1.7);
    return probe_sum(concat_cols(h, broadcast_rows(t.param("row"), 5)), probe);
  };
  Rng pick(8);
  CHECK(grad_check(f, ps, pick).max_rel_err < 1e-6);

  Tape tape(ps);
  const auto g = gather_rows(tape.param("table"), idx).value();
  for (std::size_t k = 0; k < 4; ++k) CHECK(g(1, k) == 0.0);
}

TEST_CASE("weighted_softmax_ce: closed forms") {
  ParamStore ps;
  ps.add("z", Tensor2(3, 4));
  const std::vector<ClassId> targets{1, 2, 3};
  const std::vector<NodeId> one{1};

  SUBCASE("uniform logits give w ln C") {
    Tape tape(ps);
    const std::vector<double> w{0.0, 2.5, 0.0};
    const double loss = weighted_softmax_ce(tape.param("z"), targets, w, one).value()(0, 0);
    CHECK(loss == doctest::Approx(2.5 * std::log(4.0)).epsilon(1e-14));
  }
  SUBCASE("zero weights give zero loss and gradient") {
    Tape tape(ps);
    const std::vector<double> w(3, 0.0);
    const std::vector<NodeId> all{0, 1, 2};
    Var l = weighted_softmax_ce(tape.param("z"), targets, w, all);
    CHECK(l.value()(0, 0) == 0.0);
    const auto g = tape.backward(l);
    for (double v : g[0].data()) CHECK(v == 0.0);
  }
  SUBCASE("target out of range") {
    Tape tape(ps);
    const std::vector<ClassId> bad{0, 9, 0};
    const std::vector<double> w(3, 1.0);
    CHECK_THROWS(weighted_softmax_ce(tape.param("z"), bad, w, one));
  }
}

TEST_CASE("weighted_softmax_ce: linear in weights, gradient only on active rows") {
  Rng rng(9);
  ParamStore ps;
  ps.add("z", random_tensor(5, 3, rng));
  const std::vector<ClassId> targets{0, 1, 2, 0, 1};
  std::vector<double> w{0.3, 1.2, 0.0, 0.7, 2.0};
  const std::vector<NodeId> active{1, 3, 4};
  Tape t1(ps);
  Var l1 = weighted_softmax_ce(t1.param("z"), targets, w, active);
  const auto g1 = t1.backward(l1);
  for (double& v : w) v *= 2.0;
  Tape t2(ps);
  Var l2 = weighted_softmax_ce(t2.param("z"), targets, w, active);
  const auto g2 = t2.backward(l2);
  CHECK(l2.value()(0, 0) == 2.0 * l1.value()(0, 0));
  for (std::size_t k = 0; k < g1[0].size(); ++k) CHECK(g2[0].data()[k] == 2.0 * g1[0].data()[k]);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(g1[0](0, c) == 0.0);
    CHECK(g1[0](2, c) == 0.0);
  }
  auto f = [&](Tape& t) { return weighted_softmax_ce(t.param("z"), targets, w, active); };
  Rng pick(10);
  CHECK(grad_check(f, ps, pick).max_rel_err < 1e-6);
}

TEST_CASE("time_encoding") {
  const auto e0 = time_encoding(0.0, 8);
  double norm = 0.0;
  for (std::size_t i = 0; i < 8; i += 2) {
    CHECK(e0[i] == 0.0);
    CHECK(e0[i + 1] == 1.0);
  }
  for (double v : e0) norm += v * v;
  CHECK(norm == 4.0);
  CHECK(time_encoding(5.0, 8) == time_encoding(5.0 + 0.0, 8));
  for (int t = 0; t < 100; ++t) CHECK(time_encoding(t, 2) != time_encoding(t + 1, 2));
  CHECK(time_encoding(37.0, 128) != time_encoding(38.0, 128));
  // lowest frequency is 10^4^(-(dim-2)/dim), highest is 1
  const auto e1 = time_encoding(1.0, 4);
  CHECK(e1[0] == doctest::Approx(std::sin(1.0)));
  CHECK(e1[2] == doctest::Approx(std::sin(0.01)));
  CHECK_THROWS_AS(time_encoding(1.0, 3), ConfigError);
}

TEST_CASE("grad_check: linear and constant functions") {
  Rng rng(11);
  ParamStore ps;
  // zero base point: the perturbed sums are exact up to one rounding
  ps.add("x", Tensor2(12, 12));
  const Tensor2 probe = random_tensor(12, 12, rng);
  Rng pick(12);
  const auto lin = grad_check([&](Tape& t) { return probe_sum(t.param("x"), probe); }, ps, pick);
  CHECK(lin.coords_checked >= 100);
  CHECK(lin.max_rel_err < 1e-9);
  const Tensor2 before = ps.value(0);
  const auto cst = grad_check([&](Tape& t) { return sum(t.constant(probe)); }, ps, pick);
  CHECK(cst.max_rel_err == 0.0);
  CHECK(ps.value(0) == before);
}

TEST_CASE("untouched parameters get zero gradients") {
  ParamStore ps;
  ps.add("used", Tensor2{{1, 2}});
  ps.add("unused", Tensor2{{3}});
  Tape tape(ps);
  const auto g = tape.backward(sum(tape.param("used")));
  CHECK(g.size() == 2);
  CHECK(g[1](0, 0) == 0.0);
  CHECK(g[0](0, 1) == 1.0);
}

TEST_CASE("input leaves keep their gradient") {
  ParamStore ps;
  Tape tape(ps);
  Var x = tape.input(Tensor2{{1, 2}, {3, 4}});
  tape.backward(sum(scale(x, 3.0)));
  const Tensor2 g = tape.grad(x);
  for (double v : g.data()) CHECK(v == 3.0);
}

TEST_CASE("softmax rows sum to one") {
  Rng rng(13);
  const Tensor2 p = softmax_rows(random_tensor(10, 5, rng, 30.0));
  for (std::size_t i = 0; i < 10; ++i) {
    double s = 0.0;
    for (double v : p.row(i)) {
      CHECK(v >= 0.0);
      s += v;
    }
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}
