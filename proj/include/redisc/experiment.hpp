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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "redisc/config.hpp"

namespace redisc {

struct SplitRequest {
  std::size_t per_class_train = 20;
  std::size_t per_class_val = 30;
};

enum class SubgraphScope { kTest, kAll };

struct ExperimentSettings {
  /// Bundle directory, or a synthetic graph when `synth` is set.
  std::filesystem::path data;
  std::optional<SbmParams> synth;
  /// Resplit per seed; when empty the bundle's own splits are used.
  std::optional<SplitRequest> split;
  std::vector<std::string> methods{"redisc"};
  std::vector<std::uint64_t> seeds{0};
  TrainConfig train;
  GnnTrainConfig gnn;
  GnnTrainConfig label_trick;
  double lambda_in = 0.5;
  LPConfig lp;
  std::vector<double> grid_lr;
  std::vector<double> grid_weight_decay;
  std::vector<double> grid_tau;
  SubgraphScope subgraph_scope = SubgraphScope::kTest;
};

/// Parses an experiment config. Relative data paths resolve against
/// `base_dir`. Unknown keys or methods raise ConfigError.
ExperimentSettings experiment_from_json(const Json& j, const std::filesystem::path& base_dir);

/// Loads or generates the graph; applies the split request with `seed`.
GraphBundle prepare_graph(const ExperimentSettings& s, std::uint64_t seed);

struct MethodRun {
  std::vector<ClassId> pred;
  double val_acc = 0.0;
  Json details;
};

/// Runs one method ("redisc", "gnn", "gnn-lp", "lp") on a prepared graph.
MethodRun run_method(const std::string& method, const GraphBundle& g, const ExperimentSettings& s,
                     std::uint64_t seed);

/// Nodes scored by subgraph accuracy: the test split, or every labeled node.
std::vector<NodeId> subgraph_nodes(const GraphBundle& g, SubgraphScope scope);

/// Runs every method over every seed, writes report.json and metrics.csv to
/// `out_dir` and returns the report. A failing stage is rethrown with its
/// name prefixed.
Json run_experiment(const ExperimentSettings& s, const std::filesystem::path& out_dir);

}  // namespace redisc
