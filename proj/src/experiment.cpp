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
#include "redisc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "redisc/bundle_io.hpp"
#include "redisc/error.hpp"
#include "redisc/metrics.hpp"

namespace redisc {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kMethods{"redisc", "gnn", "gnn-lp", "lp"};

template <typename T>
std::vector<T> list_of(const Json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string("experiment: '") + key + "' must be a list");
  std::vector<T> out;
  try {
    for (const auto& v : j) out.push_back(v.get<T>());
  } catch (const std::exception&) {
    throw ConfigError(std::string("experiment: '") + key + "' has wrongly typed entries");
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError("stage '" + name + "' failed: " + e.what());
  } catch (const LoadError& e) {
    throw LoadError("stage '" + name + "' failed: " + e.what());
  } catch (const std::exception& e) {
    throw ComputeError("stage '" + name + "' failed: " + e.what());
  }
}

Json summary(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return Json{{"mean", mean}, {"std", std::sqrt(var)}};
}

}  // namespace

ExperimentSettings experiment_from_json(const Json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentSettings s;
  for (const auto& [key, v] : j.items()) {
    if (key == "data") {
      if (!v.is_string()) throw ConfigError("experiment: 'data' must be a path string");
      fs::path p = v.get<std::string>();
      s.data = p.is_absolute() ? p : base_dir / p;
    } else if (key == "synth") {
      s.synth = sbm_params_from_json(v);
    } else if (key == "split") {
      if (!v.is_object()) throw ConfigError("experiment: 'split' must be an object");
      SplitRequest r;
      for (const auto& [k2, v2] : v.items()) {
        if (!v2.is_number_unsigned()) throw ConfigError("experiment: split." + k2 + " must be a count");
        if (k2 == "per_class_train") r.per_class_train = v2.get<std::size_t>();
        else if (k2 == "per_class_val") r.per_class_val = v2.get<std::size_t>();
        else throw ConfigError("experiment: unknown key 'split." + k2 + "'");
      }
      s.split = r;
    } else if (key == "methods") {
      s.methods = list_of<std::string>(v, "methods");
      for (const auto& m : s.methods) {
        if (std::find(kMethods.begin(), kMethods.end(), m) == kMethods.end()) {
          throw ConfigError("experiment: unknown method '" + m + "'");
        }
      }
    } else if (key == "seeds") {
      s.seeds = list_of<std::uint64_t>(v, "seeds");
    } else if (key == "train") {
      s.train = train_config_from_json(v);
    } else if (key == "gnn") {
      s.gnn = gnn_config_from_json(v);
    } else if (key == "label_trick") {
      Json rest = v;
      if (rest.is_object() && rest.contains("lambda_in")) {
        if (!rest["lambda_in"].is_number()) throw ConfigError("experiment: lambda_in must be a number");
        s.lambda_in = rest["lambda_in"].get<double>();
        rest.erase("lambda_in");
      }
      s.label_trick = gnn_config_from_json(rest);
    } else if (key == "lp") {
      s.lp = lp_config_from_json(v);
    } else if (key == "grid") {
      if (!v.is_object()) throw ConfigError("experiment: 'grid' must be an object");
      for (const auto& [k2, v2] : v.items()) {
        if (k2 == "lr") s.grid_lr = list_of<double>(v2, "grid.lr");
        else if (k2 == "weight_decay") s.grid_weight_decay = list_of<double>(v2, "grid.weight_decay");
        else if (k2 == "tau") s.grid_tau = list_of<double>(v2, "grid.tau");
        else throw ConfigError("experiment: unknown key 'grid." + k2 + "'");
      }
    } else if (key == "subgraph_scope") {
      const auto scope = v.is_string() ? v.get<std::string>() : "";
      if (scope == "test") s.subgraph_scope = SubgraphScope::kTest;
      else if (scope == "all") s.subgraph_scope = SubgraphScope::kAll;
      else throw ConfigError("experiment: subgraph_scope must be 'test' or 'all'");
    } else {
      throw ConfigError("experiment: unknown key '" + key + "'");
    }
  }
  if (s.data.empty() == !s.synth.has_value()) {
    throw ConfigError("experiment: exactly one of 'data' and 'synth' is required");
  }
  if (s.seeds.empty()) throw ConfigError("experiment: 'seeds' must not be empty");
  if (s.methods.empty()) throw ConfigError("experiment: 'methods' must not be empty");
  if (!(s.lambda_in >= 0.0 && s.lambda_in <= 1.0)) throw ConfigError("experiment: lambda_in must lie in [0,1]");
  return s;
}

GraphBundle prepare_graph(const ExperimentSettings& s, std::uint64_t seed) {
  GraphBundle g;
  if (s.synth) {
    SbmParams p = *s.synth;
    g = generate_sbm(p);
  } else {
    g = load_bundle(s.data);
  }
  if (s.split) g.splits = make_class_balanced_split(g, s.split->per_class_train, s.split->per_class_val, seed);
  g.validate();
  return g;
}

std::vector<NodeId> subgraph_nodes(const GraphBundle& g, SubgraphScope scope) {
  if (scope == SubgraphScope::kTest) return g.splits.test_idx;
  std::vector<NodeId> out;
  for (NodeId i = 0; i < g.num_nodes; ++i) {
    if (g.labels[i]) out.push_back(i);
  }
  return out;
}

MethodRun run_method(const std::string& method, const GraphBundle& g, const ExperimentSettings& s,
                     std::uint64_t seed) {
  const GraphContext ctx = GraphContext::from(g);
  MethodRun run;
  if (method == "redisc") {
    const std::vector<double> lrs = s.grid_lr.empty() ? std::vector<double>{s.train.lr} : s.grid_lr;
    const std::vector<double> wds =
        s.grid_weight_decay.empty() ? std::vector<double>{s.train.weight_decay} : s.grid_weight_decay;
    const std::vector<double> taus = s.grid_tau.empty() ? std::vector<double>{s.train.tau} : s.grid_tau;
    std::optional<EmResult> best;
    TrainConfig best_cfg;
    Json grid = Json::array();
    for (double lr : lrs) {
      for (double wd : wds) {
        for (double tau : taus) {
          TrainConfig cfg = s.train;
          cfg.lr = lr;
          cfg.weight_decay = wd;
          cfg.tau = tau;
          cfg.seed = seed;
          EmResult r = em_train(g, ctx, cfg);
          grid.push_back(Json{{"lr", lr}, {"weight_decay", wd}, {"tau", tau}, {"val_acc", r.report.best_val_acc}});
          if (!best || r.report.best_val_acc > best->report.best_val_acc) {
            best = std::move(r);
            best_cfg = cfg;
          }
        }
      }
    }
    const auto observed = observed_labels(g, g.splits.train_idx);
    const Prediction p = predict(best->net, ctx, best_cfg.schedule(), observed, best_cfg.eval_samples,
                                 Rng(seed, streams::kPredict));
    run.pred = p.classes;
    run.val_acc = best->report.best_val_acc;
    run.details = Json{{"selected", {{"lr", best_cfg.lr}, {"weight_decay", best_cfg.weight_decay}, {"tau", best_cfg.tau}}},
                       {"grid", std::move(grid)},
                       {"best_round", best->report.best_round}};
  } else if (method == "gnn" || method == "gnn-lp") {
    GnnTrainConfig cfg = method == "gnn" ? s.gnn : s.label_trick;
    cfg.seed = seed;
    GnnModel m = method == "gnn" ? train_vanilla_gnn(g, ctx, cfg) : train_label_trick(g, ctx, s.lambda_in, cfg);
    run.pred = predict_independent(m.net, ctx, m.inference_labels);
    run.val_acc = m.history.best_val_acc;
    run.details = Json{{"best_epoch", m.history.best_epoch}};
  } else if (method == "lp") {
    const LPResult r = label_spread(g, g.splits.train_idx, s.lp);
    run.pred = argmax_rows(r.scores);
    if (!g.splits.val_idx.empty()) run.val_acc = node_accuracy(run.pred, g.labels, g.splits.val_idx);
    run.details = Json{{"iterations", r.iterations}, {"converged", r.converged}};
  } else {
    throw ConfigError("unknown method '" + method + "'");
  }
  return run;
}

Json run_experiment(const ExperimentSettings& s, const fs::path& out_dir) {
  Json per_method = Json::object();
  std::string csv = "seed,method,node_acc,subgraph_acc\n";
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> acc;
  for (const auto& m : s.methods) per_method[m] = Json{{"per_seed", Json::array()}};
  for (std::uint64_t seed : s.seeds) {
    const GraphBundle g = stage("data", [&] { return prepare_graph(s, seed); });
    const auto scope = subgraph_nodes(g, s.subgraph_scope);
    for (const auto& m : s.methods) {
      MethodRun run = stage(m, [&] { return run_method(m, g, s, seed); });
      const auto [node, sub] = stage("eval", [&] {
        return std::pair{node_accuracy(run.pred, g.labels, g.splits.test_idx),
                         subgraph_accuracy(run.pred, g.labels, g.adjacency, scope)};
      });
      acc[m].first.push_back(node);
      acc[m].second.push_back(sub);
      per_method[m]["per_seed"].push_back(Json{{"seed", seed},
                                               {"node_acc", node},
                                               {"subgraph_acc", sub},
                                               {"val_acc", run.val_acc},
                                               {"details", std::move(run.details)}});
      csv += std::to_string(seed) + "," + m + "," + fmt(node) + "," + fmt(sub) + "\n";
    }
  }
  for (const auto& m : s.methods) {
    per_method[m]["node_acc"] = summary(acc[m].first);
    per_method[m]["subgraph_acc"] = summary(acc[m].second);
  }
  Json report{{"seeds", s.seeds},
              {"subgraph_scope", s.subgraph_scope == SubgraphScope::kTest ? "test" : "all"},
              {"train", to_json(s.train)},
              {"methods", std::move(per_method)}};
  stage("report", [&] {
    fs::create_directories(out_dir);
    save_json_file(report, out_dir / "report.json");
    std::ofstream out(out_dir / "metrics.csv", std::ios::binary);
    out << csv;
    if (!out) throw ComputeError("cannot write metrics.csv");
    return 0;
  });
  return report;
}

}  // namespace redisc
