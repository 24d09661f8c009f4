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

#include <fstream>
#include <sstream>

#include "redisc/config.hpp"
#include "redisc/error.hpp"
#include "redisc/experiment.hpp"
#include "support.hpp"

using namespace redisc;
using namespace redisc::testing;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json tiny_experiment() {
  return Json::parse(R"({
    "synth": {"n_per_class": 12, "num_classes": 3, "p_in": 0.5, "p_out": 0.03, "feat_noise": 0.5, "seed": 4},
    "split": {"per_class_train": 3, "per_class_val": 3},
    "methods": ["redisc", "gnn", "gnn-lp", "lp"],
    "seeds": [5],
    "train": {"T": 8, "S": 4, "em_rounds": 4, "warmup_epochs": 10, "hidden_dim": 8, "time_dim": 8, "eval_samples": 2},
    "gnn": {"epochs": 10, "hidden_dim": 8},
    "label_trick": {"epochs": 10, "hidden_dim": 8, "lambda_in": 0.5},
    "lp": {"lambda": 0.9}
  })");
}

}  // namespace

TEST_CASE("train config: defaults, overrides and strictness") {
  const auto c = train_config_from_json(Json::object());
  CHECK(c.T == 80);
  CHECK(c.S == 100);
  CHECK(c.tau == 0.1);
  const auto d = train_config_from_json(Json::parse(R"({"T": 5, "priority_mode": "power", "schedule": "cosine"})"));
  CHECK(d.T == 5);
  CHECK(d.priority_mode == PriorityMode::kPower);
  CHECK_THROWS_AS(train_config_from_json(Json::parse(R"({"TT": 5})")), ConfigError);
  CHECK_THROWS_AS(train_config_from_json(Json::parse(R"({"T": "five"})")), ConfigError);
  CHECK_THROWS_AS(train_config_from_json(Json::parse(R"({"T": 0})")), ConfigError);
  CHECK_THROWS_AS(train_config_from_json(Json::parse(R"({"schedule": "linear"})")), ConfigError);
  CHECK_THROWS_AS(train_config_from_json(Json::parse(R"({"priority_mode": "max"})")), ConfigError);
  CHECK_THROWS_AS(train_config_from_json(Json::array()), ConfigError);
}

TEST_CASE("config round trips through JSON") {
  TrainConfig c;
  c.T = 13;
  c.tau = 0.25;
  c.priority_mode = PriorityMode::kPower;
  const auto back = train_config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  GnnTrainConfig g;
  g.epochs = 7;
  CHECK(to_json(gnn_config_from_json(to_json(g))) == to_json(g));
  LPConfig l;
  l.lambda = 0.3;
  CHECK(to_json(lp_config_from_json(to_json(l))) == to_json(l));
  SbmParams s;
  s.p_in = 0.7;
  CHECK(to_json(sbm_params_from_json(to_json(s))) == to_json(s));
  CHECK_THROWS_AS(gnn_config_from_json(Json::parse(R"({"hidden": 3})")), ConfigError);
  CHECK_THROWS_AS(sbm_params_from_json(Json::parse(R"({"n": 3})")), ConfigError);
}

TEST_CASE("labels CSV round trip and errors") {
  const auto dir = temp_dir("csv");
  const std::vector<ClassId> labels{2, 0, 1, 1};
  write_labels_csv(dir / "l.csv", labels);
  CHECK(slurp(dir / "l.csv").rfind("node_id,class\n", 0) == 0);
  CHECK(read_labels_csv(dir / "l.csv", 4) == labels);
  CHECK_THROWS_AS(read_labels_csv(dir / "l.csv", 5), LoadError);
  std::ofstream(dir / "bad.csv") << "node_id,class\n0,x\n";
  CHECK_THROWS_AS(read_labels_csv(dir / "bad.csv", 1), LoadError);
  CHECK_THROWS_AS(read_labels_csv(dir / "missing.csv", 1), LoadError);
  CHECK_THROWS_AS(load_json_file(dir / "missing.json"), ConfigError);
}

TEST_CASE("experiment config: unknown keys and methods are rejected") {
  auto j = tiny_experiment();
  j["bogus"] = 1;
  CHECK_THROWS_AS(experiment_from_json(j, "."), ConfigError);
  j = tiny_experiment();
  j["methods"] = {"magic"};
  CHECK_THROWS_AS(experiment_from_json(j, "."), ConfigError);
  j = tiny_experiment();
  j["seeds"] = Json::array();
  CHECK_THROWS_AS(experiment_from_json(j, "."), ConfigError);
  j = tiny_experiment();
  j["subgraph_scope"] = "everything";
  CHECK_THROWS_AS(experiment_from_json(j, "."), ConfigError);
  j = tiny_experiment();
  j.erase("synth");
  j["data"] = "bundle";
  CHECK(experiment_from_json(j, "/base").data == std::filesystem::path("/base/bundle"));
}

TEST_CASE("experiment: one seed gives zero spread; reruns are byte-identical") {
  const auto s = experiment_from_json(tiny_experiment(), ".");
  const auto a = temp_dir("exp_a");
  const auto b = temp_dir("exp_b");
  const Json ra = run_experiment(s, a);
  run_experiment(s, b);
  for (const char* m : {"redisc", "gnn", "gnn-lp", "lp"}) {
    CHECK(ra["methods"][m]["node_acc"]["std"] == 0.0);
    CHECK(ra["methods"][m]["subgraph_acc"]["std"] == 0.0);
    const double node = ra["methods"][m]["node_acc"]["mean"];
    const double sub = ra["methods"][m]["subgraph_acc"]["mean"];
    CHECK(node >= 0.0);
    CHECK(node <= 1.0);
    CHECK(sub <= node);
  }
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
  CHECK(slurp(a / "metrics.csv").rfind("seed,method,node_acc,subgraph_acc\n", 0) == 0);
}

TEST_CASE("experiment: a missing bundle fails in the data stage with a load error") {
  auto j = tiny_experiment();
  j.erase("synth");
  j["data"] = "/nonexistent/bundle";
  const auto s = experiment_from_json(j, ".");
  try {
    run_experiment(s, temp_dir("exp_fail"));
    FAIL("expected an error");
  } catch (const LoadError& e) {
    CHECK(std::string(e.what()).find("stage 'data' failed") != std::string::npos);
  }
}
