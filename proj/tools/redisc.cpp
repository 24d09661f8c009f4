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
// Command-line entry point: synth, train, sample, eval, baseline, report.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "redisc/bundle_io.hpp"
#include "redisc/config.hpp"
#include "redisc/error.hpp"
#include "redisc/experiment.hpp"
#include "redisc/metrics.hpp"

namespace fs = std::filesystem;
using namespace redisc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Globals {
  std::string data;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::size_t threads = 1;
  std::optional<std::size_t> split_train;
  std::optional<std::size_t> split_val;
};

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string("missing required flag ") + flag);
}

Json config_or_empty(const Globals& g) {
  return g.config.empty() ? Json::object() : load_json_file(g.config);
}

GraphBundle load_data(const Globals& gl, std::uint64_t seed) {
  require(gl.data, "--data");
  GraphBundle g = load_bundle(gl.data);
  if (gl.split_train || gl.split_val) {
    g.splits = make_class_balanced_split(g, gl.split_train.value_or(20), gl.split_val.value_or(30), seed);
  }
  return g;
}

Json accuracy_json(const GraphBundle& g, std::span<const ClassId> pred, SubgraphScope scope) {
  Json j = Json::object();
  if (!g.splits.test_idx.empty()) j["test_node_acc"] = node_accuracy(pred, g.labels, g.splits.test_idx);
  const auto nodes = subgraph_nodes(g, scope);
  if (!nodes.empty()) j["subgraph_acc"] = subgraph_accuracy(pred, g.labels, g.adjacency, nodes);
  if (!g.splits.val_idx.empty()) j["val_node_acc"] = node_accuracy(pred, g.labels, g.splits.val_idx);
  return j;
}

int cmd_synth(const Globals& gl) {
  require(gl.out, "--out");
  Json cfg = config_or_empty(gl);
  std::optional<SplitRequest> split;
  if (cfg.contains("split")) {
    const Json s = cfg["split"];
    cfg.erase("split");
    SplitRequest r;
    for (const auto& [k, v] : s.items()) {
      if (!v.is_number_unsigned()) throw ConfigError("split." + k + " must be a count");
      if (k == "per_class_train") r.per_class_train = v.get<std::size_t>();
      else if (k == "per_class_val") r.per_class_val = v.get<std::size_t>();
      else throw ConfigError("unknown key 'split." + k + "'");
    }
    split = r;
  }
  SbmParams p = sbm_params_from_json(cfg);
  if (gl.seed) p.seed = *gl.seed;
  if (gl.split_train || gl.split_val) {
    split = SplitRequest{gl.split_train.value_or(20), gl.split_val.value_or(30)};
  }
  GraphBundle g = generate_sbm(p);
  if (split) g.splits = make_class_balanced_split(g, split->per_class_train, split->per_class_val, p.seed);
  save_bundle(g, gl.out);
  std::cout << "wrote " << g.num_nodes << " nodes, " << g.adjacency.num_undirected_edges()
            << " edges to " << gl.out << "\n";
  return 0;
}

int cmd_train(const Globals& gl) {
  require(gl.out, "--out");
  TrainConfig cfg = train_config_from_json(config_or_empty(gl));
  if (gl.seed) cfg.seed = *gl.seed;
  const GraphBundle g = load_data(gl, cfg.seed);
  const GraphContext ctx = GraphContext::from(g);
  EmResult r = em_train(g, ctx, cfg);
  const auto observed = observed_labels(g, g.splits.train_idx);
  const Prediction p = predict(r.net, ctx, cfg.schedule(), observed, cfg.eval_samples,
                               Rng(cfg.seed, streams::kPredict));
  fs::create_directories(gl.out);
  const fs::path out = gl.out;
  r.net.params().save(out / "checkpoint.bin");
  write_labels_csv(out / "predictions.csv", p.classes);
  Json report{{"config", to_json(cfg)}, {"em", to_json(r.report)},
              {"metrics", accuracy_json(g, p.classes, SubgraphScope::kTest)}};
  save_json_file(report, out / "run_report.json");
  std::cout << report["metrics"].dump() << "\n";
  return 0;
}

int cmd_sample(const Globals& gl, const std::string& checkpoint, bool unconditional) {
  require(gl.out, "--out");
  require(checkpoint, "--checkpoint");
  TrainConfig cfg = train_config_from_json(config_or_empty(gl));
  if (gl.seed) cfg.seed = *gl.seed;
  const GraphBundle g = load_data(gl, cfg.seed);
  const GraphContext ctx = GraphContext::from(g);
  const LabelFusionNet net = net_from_params(nn::ParamStore::load(checkpoint));
  if (!net.config().time_gate) throw ConfigError("checkpoint is not a denoiser");
  if (net.config().in_dim != g.num_features || net.config().num_classes != g.num_classes) {
    throw ConfigError("checkpoint does not match the bundle's feature or class count");
  }
  const DenoiseFn fn = make_denoise_fn(net, ctx);
  Rng rng(cfg.seed, streams::kSample);
  SampleTrace trace;
  const NoiseSchedule sched = cfg.schedule();
  const LabelState s = unconditional
                           ? sample_unconditional(fn, g.num_nodes, sched, rng, &trace)
                           : sample_conditional_labeled_first(fn, observed_labels(g, g.splits.train_idx),
                                                              sched, rng, &trace);
  const auto labels = clean_labels(s);
  fs::create_directories(gl.out);
  write_labels_csv(fs::path(gl.out) / "labels.csv", labels);
  Json t = to_json(trace);
  t["mode"] = unconditional ? "unconditional" : "labeled_first";
  t["T"] = cfg.T;
  t["seed"] = cfg.seed;
  save_json_file(t, fs::path(gl.out) / "trace.json");
  return 0;
}

int cmd_eval(const Globals& gl, const std::string& predictions, const std::string& scope) {
  require(predictions, "--predictions");
  GraphBundle g = load_data(gl, gl.seed.value_or(0));
  const auto pred = read_labels_csv(predictions, g.num_nodes);
  SubgraphScope sc = SubgraphScope::kTest;
  if (scope == "all") sc = SubgraphScope::kAll;
  else if (scope != "test") throw ConfigError("--scope must be 'test' or 'all'");
  Json j = accuracy_json(g, pred, sc);
  j["scope"] = scope;
  if (!gl.out.empty()) {
    fs::create_directories(gl.out);
    save_json_file(j, fs::path(gl.out) / "eval.json");
  }
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_baseline(const Globals& gl, const std::string& method) {
  require(gl.out, "--out");
  Json cfg = config_or_empty(gl);
  ExperimentSettings s;
  s.methods = {method};
  if (method == "lp") {
    s.lp = lp_config_from_json(cfg);
  } else if (method == "gnn") {
    s.gnn = gnn_config_from_json(cfg);
  } else if (method == "gnn-lp") {
    if (cfg.contains("lambda_in")) {
      if (!cfg["lambda_in"].is_number()) throw ConfigError("lambda_in must be a number");
      s.lambda_in = cfg["lambda_in"].get<double>();
      cfg.erase("lambda_in");
    }
    s.label_trick = gnn_config_from_json(cfg);
  } else {
    throw ConfigError("--method must be lp, gnn or gnn-lp");
  }
  const std::uint64_t seed = gl.seed.value_or(method == "gnn" ? s.gnn.seed : s.label_trick.seed);
  const GraphBundle g = load_data(gl, seed);
  MethodRun run = run_method(method, g, s, seed);
  fs::create_directories(gl.out);
  write_labels_csv(fs::path(gl.out) / "predictions.csv", run.pred);
  Json report{{"method", method}, {"seed", seed}, {"details", run.details},
              {"metrics", accuracy_json(g, run.pred, SubgraphScope::kTest)}};
  save_json_file(report, fs::path(gl.out) / "report.json");
  std::cout << report["metrics"].dump() << "\n";
  return 0;
}

int cmd_report(const Globals& gl) {
  require(gl.config, "--config");
  require(gl.out, "--out");
  const fs::path cfg_path = gl.config;
  Json j = load_json_file(cfg_path);
  // --data replaces whatever graph source the config names
  if (!gl.data.empty() && j.is_object()) {
    j.erase("synth");
    j["data"] = fs::absolute(gl.data).string();
  }
  ExperimentSettings s = experiment_from_json(j, cfg_path.parent_path());
  if (!gl.seeds.empty()) s.seeds = gl.seeds;
  else if (gl.seed) s.seeds = {*gl.seed};
  const Json report = run_experiment(s, gl.out);
  for (const auto& [m, r] : report["methods"].items()) {
    std::cout << m << ": node_acc " << r["node_acc"]["mean"].get<double>() << " +- "
              << r["node_acc"]["std"].get<double>() << ", subgraph_acc "
              << r["subgraph_acc"]["mean"].get<double>() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"redisc: masked label diffusion for node classification"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals gl;
  app.add_option("--data", gl.data, "bundle directory");
  app.add_option("--config", gl.config, "JSON config file");
  app.add_option("--out", gl.out, "output directory");
  app.add_option("--seed", gl.seed, "run seed");
  app.add_option("--seeds", gl.seeds, "seed list (report)")->delimiter(',');
  app.add_option("--threads", gl.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--split-train", gl.split_train, "resplit: train nodes per class");
  app.add_option("--split-val", gl.split_val, "resplit: validation nodes per class");

  auto* synth = app.add_subcommand("synth", "generate a stochastic block model bundle");
  auto* train = app.add_subcommand("train", "EM training; writes checkpoint, run report, predictions");
  auto* sample = app.add_subcommand("sample", "draw one label sample from a checkpoint");
  std::string checkpoint;
  bool unconditional = false;
  sample->add_option("--checkpoint", checkpoint, "denoiser checkpoint");
  sample->add_flag("--unconditional", unconditional, "ignore observed labels");
  auto* eval = app.add_subcommand("eval", "score a predictions CSV");
  std::string predictions;
  std::string scope = "test";
  eval->add_option("--predictions", predictions, "node_id,class CSV");
  eval->add_option("--scope", scope, "subgraph accuracy over 'test' or 'all' labeled nodes");
  auto* baseline = app.add_subcommand("baseline", "run a baseline predictor");
  std::string method;
  baseline->add_option("--method", method, "lp | gnn | gnn-lp")->required();
  auto* report = app.add_subcommand("report", "run an experiment config over seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*synth) return cmd_synth(gl);
    if (*train) return cmd_train(gl);
    if (*sample) return cmd_sample(gl, checkpoint, unconditional);
    if (*eval) return cmd_eval(gl, predictions, scope);
    if (*baseline) return cmd_baseline(gl, method);
    if (*report) return cmd_report(gl);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
