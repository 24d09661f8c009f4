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

#include <algorithm>

#include "redisc/error.hpp"
#include "redisc/metrics.hpp"
#include "redisc/rng.hpp"
#include "support.hpp"

using namespace redisc;
using namespace redisc::testing;

TEST_CASE("node accuracy") {
  const auto g = make_graph(3, 2, {{0, 1}}, {0, 1, 1});
  const auto idx = iota_nodes(0, 3);
  CHECK(node_accuracy(std::vector<ClassId>{0, 1, 1}, g.labels, idx) == 1.0);
  CHECK(node_accuracy(std::vector<ClassId>{1, 0, 0}, g.labels, idx) == 0.0);
  CHECK(node_accuracy(std::vector<ClassId>{0, 1, 0}, g.labels, idx) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("subgraph accuracy: one wrong node spoils its neighbors") {
  const auto tri = make_graph(3, 2, {{0, 1}, {1, 2}, {0, 2}}, {0, 0, 0});
  const auto idx = iota_nodes(0, 3);
  CHECK(subgraph_accuracy(std::vector<ClassId>{0, 0, 1}, tri.labels, tri.adjacency, idx) == 0.0);
  CHECK(subgraph_accuracy(std::vector<ClassId>{0, 0, 0}, tri.labels, tri.adjacency, idx) == 1.0);
  const auto star = make_graph(5, 2, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}, {1, 0, 0, 0, 0});
  CHECK(subgraph_accuracy(std::vector<ClassId>{0, 0, 0, 0, 0}, star.labels, star.adjacency, iota_nodes(0, 5)) == 0.0);
  // a wrong leaf only spoils itself and the center
  CHECK(subgraph_accuracy(std::vector<ClassId>{1, 1, 0, 0, 0}, star.labels, star.adjacency, iota_nodes(0, 5)) ==
        doctest::Approx(3.0 / 5.0));
}

TEST_CASE("subgraph accuracy: isolated nodes and unknown neighbors") {
  const auto g = make_graph(4, 2, {{1, 2}}, {0, 1, -1, 1});
  const std::vector<NodeId> idx{0, 1, 3};
  CHECK(subgraph_accuracy(std::vector<ClassId>{0, 1, 0, 1}, g.labels, g.adjacency, idx) == 1.0);
  CHECK(subgraph_accuracy(std::vector<ClassId>{1, 1, 0, 1}, g.labels, g.adjacency, idx) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("subgraph accuracy never exceeds node accuracy and is permutation invariant") {
  SbmParams p;
  p.n_per_class = 20;
  p.num_classes = 3;
  p.p_in = 0.2;
  p.p_out = 0.05;
  p.seed = 9;
  const auto g = generate_sbm(p);
  Rng rng(1);
  auto idx = iota_nodes(0, static_cast<NodeId>(g.num_nodes));
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ClassId> pred(g.num_nodes);
    for (std::size_t i = 0; i < g.num_nodes; ++i) {
      pred[i] = rng.uniform() < 0.8 ? *g.labels[i] : static_cast<ClassId>(rng.uniform_index(3));
    }
    const double s = subgraph_accuracy(pred, g.labels, g.adjacency, idx);
    CHECK(s <= node_accuracy(pred, g.labels, idx));
    auto shuffled = idx;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(subgraph_accuracy(pred, g.labels, g.adjacency, shuffled) == doctest::Approx(s).epsilon(1e-15));
  }
}

TEST_CASE("accuracy errors") {
  const auto g = make_graph(2, 2, {{0, 1}}, {0, -1});
  const std::vector<ClassId> pred{0, 0};
  CHECK_THROWS_AS(node_accuracy(pred, g.labels, {}), ComputeError);
  const std::vector<NodeId> unl{1};
  CHECK_THROWS_AS(node_accuracy(pred, g.labels, unl), ComputeError);
  CHECK_THROWS_AS(subgraph_accuracy(pred, g.labels, g.adjacency, {}), ComputeError);
  const std::vector<ClassId> short_pred{0};
  const std::vector<NodeId> zero{0};
  CHECK_THROWS_AS(node_accuracy(short_pred, g.labels, zero), ComputeError);
}
