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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "redisc/bundle_io.hpp"
#include "redisc/config.hpp"
#include "redisc/nn/params.hpp"
#include "support.hpp"

using namespace redisc;
using namespace redisc::testing;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(REDISC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kMini = std::string(REDISC_TEST_DATA) + "/mini_bundle";

}  // namespace

TEST_CASE("cli: help and usage errors") {
  CHECK(run("--help") == 0);
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("baseline --data " + kMini + " --out /tmp/x") == 2);
  CHECK(run("train --threads 0 --data " + kMini + " --out /tmp/x") == 2);
}

TEST_CASE("cli: config errors exit 2, runtime failures exit 3") {
  const auto dir = temp_dir("cli_err");
  write_text(dir / "bad.json", R"({"T": 4, "unknown": 1})");
  CHECK(run("train --data " + kMini + " --config " + (dir / "bad.json").string() + " --out " + (dir / "o").string()) == 2);
  write_text(dir / "broken.json", "{not json");
  CHECK(run("train --data " + kMini + " --config " + (dir / "broken.json").string() + " --out " + (dir / "o").string()) == 2);
  CHECK(run("baseline --method magic --data " + kMini + " --out " + (dir / "o").string()) == 2);
  CHECK(run("train --data /nonexistent --out " + (dir / "o").string()) == 3);
  write_text(dir / "junk.bin", "garbage");
  CHECK(run("sample --data " + kMini + " --checkpoint " + (dir / "junk.bin").string() + " --out " + (dir / "o").string()) == 3);
}

TEST_CASE("cli: synth writes a loadable bundle, deterministically") {
  const auto dir = temp_dir("cli_synth");
  write_text(dir / "s.json", R"({"n_per_class": 10, "num_classes": 2, "p_in": 0.5, "p_out": 0.05, "split": {"per_class_train": 2, "per_class_val": 2}})");
  const std::string cfg = " --config " + (dir / "s.json").string();
  REQUIRE(run("synth --seed 3" + cfg + " --out " + (dir / "a").string()) == 0);
  REQUIRE(run("synth --seed 3" + cfg + " --out " + (dir / "b").string()) == 0);
  const auto g = load_bundle(dir / "a");
  CHECK(g.num_nodes == 20);
  CHECK(g.splits.train_idx.size() == 4);
  CHECK(g.splits.val_idx.size() == 4);
  CHECK(g.splits.test_idx.size() == 12);
  for (const char* f : {"meta.json", "edges.bin", "features.bin", "labels.bin", "splits/train.idx"}) {
    REQUIRE(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
}

TEST_CASE("cli: train, sample, eval round trip") {
  const auto dir = temp_dir("cli_train");
  write_text(dir / "t.json", R"({"T": 6, "S": 4, "em_rounds": 3, "warmup_epochs": 10, "hidden_dim": 8, "time_dim": 8, "eval_samples": 2})");
  const std::string cfg = " --config " + (dir / "t.json").string();
  REQUIRE(run("train --seed 1 --data " + kMini + cfg + " --out " + (dir / "run").string()) == 0);
  const auto report = load_json_file(dir / "run" / "run_report.json");
  CHECK(report.contains("config"));
  CHECK(report["em"]["rounds"].size() == 3);
  CHECK(report["metrics"].contains("test_node_acc"));
  const auto pred = read_labels_csv(dir / "run" / "predictions.csv", 30);
  CHECK(pred.size() == 30);
  const auto params = nn::ParamStore::load(dir / "run" / "checkpoint.bin");
  CHECK(params.size() > 0);

  REQUIRE(run("sample --seed 2 --data " + kMini + cfg + " --checkpoint " + (dir / "run" / "checkpoint.bin").string() +
              " --out " + (dir / "s").string()) == 0);
  const auto labels = read_labels_csv(dir / "s" / "labels.csv", 30);
  const auto g = load_bundle(kMini);
  for (NodeId i : g.splits.train_idx) CHECK(labels[i] == *g.labels[i]);
  const auto trace = load_json_file(dir / "s" / "trace.json");
  CHECK(trace["mode"] == "labeled_first");
  CHECK(trace["T"] == 6);

  REQUIRE(run("sample --unconditional --seed 2 --data " + kMini + cfg + " --checkpoint " +
              (dir / "run" / "checkpoint.bin").string() + " --out " + (dir / "u").string()) == 0);
  CHECK(load_json_file(dir / "u" / "trace.json")["mode"] == "unconditional");

  REQUIRE(run("eval --data " + kMini + " --predictions " + (dir / "run" / "predictions.csv").string() +
              " --scope all --out " + (dir / "e").string()) == 0);
  const auto ev = load_json_file(dir / "e" / "eval.json");
  CHECK(ev["scope"] == "all");
  CHECK(ev["test_node_acc"] == report["metrics"]["test_node_acc"]);
  CHECK(run("eval --data " + kMini + " --predictions " + (dir / "run" / "predictions.csv").string() + " --scope some") == 2);
}

TEST_CASE("cli: baselines and report") {
  const auto dir = temp_dir("cli_base");
  write_text(dir / "g.json", R"({"epochs": 10, "hidden_dim": 8})");
  for (const char* m : {"lp", "gnn", "gnn-lp"}) {
    const std::string out = (dir / m).string();
    const std::string cfg = std::string(m) == "lp" ? "" : " --config " + (dir / "g.json").string();
    REQUIRE(run(std::string("baseline --method ") + m + " --data " + kMini + cfg + " --out " + out) == 0);
    CHECK(load_json_file(fs::path(out) / "report.json")["method"] == m);
    CHECK(read_labels_csv(fs::path(out) / "predictions.csv", 30).size() == 30);
  }
  write_text(dir / "exp.json", R"({"methods": ["lp", "gnn"], "seeds": [0], "gnn": {"epochs": 5, "hidden_dim": 8}})");
  REQUIRE(run("report --data " + kMini + " --seeds 1,2 --config " + (dir / "exp.json").string() + " --out " + (dir / "r").string()) == 0);
  const auto r = load_json_file(dir / "r" / "report.json");
  CHECK(r["seeds"] == Json::array({1, 2}));
  CHECK(r["methods"]["lp"]["per_seed"].size() == 2);
  CHECK(slurp(dir / "r" / "metrics.csv").rfind("seed,method,node_acc,subgraph_acc\n", 0) == 0);
}
