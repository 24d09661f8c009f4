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
#include "redisc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "redisc/error.hpp"

namespace redisc {

Json load_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

void save_json_file(const Json& j, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ComputeError("cannot write " + file.string());
  out << j.dump(2) << "\n";
  if (!out) throw ComputeError("write failed: " + file.string());
}

namespace {

/// Reads typed fields and complains about anything left over.
class Fields {
 public:
  Fields(const Json& j, std::string what) : j_(j), what_(std::move(what)) {
    if (!j_.is_object()) throw ConfigError(what_ + " must be a JSON object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const Json& v = j_.at(key);
    try {
      if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned()) throw ConfigError("");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("");
      }
      out = v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError(what_ + ": key '" + key + "' has the wrong type");
    }
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(what_ + ": unknown key '" + key + "'");
    }
  }

 private:
  const Json& j_;
  std::string what_;
  std::set<std::string> seen_;
};

}  // namespace

TrainConfig train_config_from_json(const Json& j, TrainConfig c) {
  Fields f(j, "train config");
  f.get("T", c.T);
  f.get("S", c.S);
  f.get("tau", c.tau);
  f.get("lr", c.lr);
  f.get("weight_decay", c.weight_decay);
  f.get("em_rounds", c.em_rounds);
  f.get("m_steps_per_round", c.m_steps_per_round);
  f.get("warmup_epochs", c.warmup_epochs);
  f.get("eval_samples", c.eval_samples);
  f.get("seed", c.seed);
  std::string mode = c.priority_mode == PriorityMode::kSoftmax ? "softmax" : "power";
  f.get("priority_mode", mode);
  if (mode == "softmax") c.priority_mode = PriorityMode::kSoftmax;
  else if (mode == "power") c.priority_mode = PriorityMode::kPower;
  else throw ConfigError("train config: priority_mode must be 'softmax' or 'power'");
  std::string schedule = "cosine";
  f.get("schedule", schedule);
  if (schedule != "cosine") throw ConfigError("train config: only the 'cosine' schedule is supported");
  f.get("hidden_dim", c.hidden_dim);
  f.get("layers", c.layers);
  f.get("time_dim", c.time_dim);
  f.get("cosine_s", c.cosine_s);
  f.get("warmup_lr", c.warmup_lr);
  f.get("warmup_weight_decay", c.warmup_weight_decay);
  f.finish();
  c.validate();
  return c;
}

GnnTrainConfig gnn_config_from_json(const Json& j, GnnTrainConfig c) {
  Fields f(j, "gnn config");
  f.get("epochs", c.epochs);
  f.get("lr", c.lr);
  f.get("weight_decay", c.weight_decay);
  f.get("hidden_dim", c.hidden);
  f.get("layers", c.layers);
  f.get("seed", c.seed);
  f.finish();
  if (c.hidden < 1 || c.layers < 1) throw ConfigError("gnn config: hidden_dim and layers must be positive");
  return c;
}

LPConfig lp_config_from_json(const Json& j, LPConfig c) {
  Fields f(j, "label spreading config");
  f.get("lambda", c.lambda);
  f.get("iterations", c.iterations);
  f.get("tolerance", c.tolerance);
  f.finish();
  if (!(c.lambda > 0.0 && c.lambda < 1.0)) throw ConfigError("label spreading lambda must lie in (0,1)");
  return c;
}

SbmParams sbm_params_from_json(const Json& j, SbmParams c) {
  Fields f(j, "sbm config");
  f.get("n_per_class", c.n_per_class);
  f.get("num_classes", c.num_classes);
  f.get("p_in", c.p_in);
  f.get("p_out", c.p_out);
  f.get("feat_dim", c.feat_dim);
  f.get("feat_noise", c.feat_noise);
  f.get("seed", c.seed);
  f.finish();
  return c;
}

Json to_json(const TrainConfig& c) {
  return Json{{"T", c.T},
              {"S", c.S},
              {"tau", c.tau},
              {"lr", c.lr},
              {"weight_decay", c.weight_decay},
              {"em_rounds", c.em_rounds},
              {"m_steps_per_round", c.m_steps_per_round},
              {"warmup_epochs", c.warmup_epochs},
              {"eval_samples", c.eval_samples},
              {"seed", c.seed},
              {"priority_mode", c.priority_mode == PriorityMode::kSoftmax ? "softmax" : "power"},
              {"schedule", "cosine"},
              {"hidden_dim", c.hidden_dim},
              {"layers", c.layers},
              {"time_dim", c.time_dim},
              {"cosine_s", c.cosine_s},
              {"warmup_lr", c.warmup_lr},
              {"warmup_weight_decay", c.warmup_weight_decay}};
}

Json to_json(const GnnTrainConfig& c) {
  return Json{{"epochs", c.epochs}, {"lr", c.lr}, {"weight_decay", c.weight_decay},
              {"hidden_dim", c.hidden}, {"layers", c.layers}, {"seed", c.seed}};
}

Json to_json(const LPConfig& c) {
  return Json{{"lambda", c.lambda}, {"iterations", c.iterations}, {"tolerance", c.tolerance}};
}

Json to_json(const SbmParams& c) {
  return Json{{"n_per_class", c.n_per_class}, {"num_classes", c.num_classes}, {"p_in", c.p_in},
              {"p_out", c.p_out}, {"feat_dim", c.feat_dim}, {"feat_noise", c.feat_noise},
              {"seed", c.seed}};
}

Json to_json(const EmReport& r) {
  Json rounds = Json::array();
  for (const auto& rec : r.rounds) {
    Json o{{"round", rec.round}, {"val_acc", rec.val_acc}};
    o["test_acc"] = rec.test_acc ? Json(*rec.test_acc) : Json(nullptr);
    o["mean_loss"] = rec.mean_loss;
    o["queue_size"] = rec.queue_size;
    rounds.push_back(std::move(o));
  }
  return Json{{"warmup_val_acc", r.warmup_val_acc},
              {"warmup_priorities", r.warmup_priorities},
              {"rounds", std::move(rounds)},
              {"final_val_acc", r.final_val_acc},
              {"best_round", r.best_round},
              {"best_val_acc", r.best_val_acc},
              {"final_priorities", r.final_priorities}};
}

Json to_json(const TrainHistory& h) {
  return Json{{"loss", h.loss},
              {"val_acc", h.val_acc},
              {"final_val_acc", h.final_val_acc},
              {"best_epoch", h.best_epoch},
              {"best_val_acc", h.best_val_acc}};
}

Json to_json(const SampleTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    steps.push_back(Json{{"t", s.t},
                         {"masked", s.masked},
                         {"budget", s.budget},
                         {"labeled_selected", s.labeled_selected},
                         {"unlabeled_selected", s.unlabeled_selected}});
  }
  return Json{{"steps", std::move(steps)}, {"denoiser_calls", t.denoiser_calls}};
}

void write_labels_csv(const std::filesystem::path& file, std::span<const ClassId> labels) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ComputeError("cannot write " + file.string());
  out << "node_id,class\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
  if (!out) throw ComputeError("write failed: " + file.string());
}

std::vector<ClassId> read_labels_csv(const std::filesystem::path& file, std::size_t num_nodes) {
  std::ifstream in(file);
  if (!in) throw LoadError("cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line) || line != "node_id,class") {
    throw LoadError(file.string() + ": expected header 'node_id,class'");
  }
  std::vector<ClassId> out(num_nodes, 0);
  std::vector<bool> seen(num_nodes, false);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    unsigned long long node = 0;
    unsigned long long cls = 0;
    char comma = 0;
    if (!(ss >> node >> comma >> cls) || comma != ',' || node >= num_nodes || cls >= 0xFFFF || seen[node]) {
      throw LoadError(file.string() + ": bad row at line " + std::to_string(lineno));
    }
    seen[node] = true;
    out[node] = static_cast<ClassId>(cls);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    if (!seen[i]) throw LoadError(file.string() + ": node " + std::to_string(i) + " missing");
  }
  return out;
}

}  // namespace redisc
