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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "redisc/baselines.hpp"
#include "redisc/em.hpp"
#include "redisc/graph.hpp"
#include "redisc/sampler.hpp"

namespace redisc {

using Json = nlohmann::ordered_json;

/// Parses a UTF-8 JSON file; syntax errors become ConfigError.
Json load_json_file(const std::filesystem::path& file);
/// Writes dump(2) plus a trailing newline.
void save_json_file(const Json& j, const std::filesystem::path& file);

// Config readers reject unknown keys and wrongly typed values with ConfigError.
// Missing keys keep their defaults.
TrainConfig train_config_from_json(const Json& j, TrainConfig base = {});
GnnTrainConfig gnn_config_from_json(const Json& j, GnnTrainConfig base = {});
LPConfig lp_config_from_json(const Json& j, LPConfig base = {});
SbmParams sbm_params_from_json(const Json& j, SbmParams base = {});

Json to_json(const TrainConfig& c);
Json to_json(const GnnTrainConfig& c);
Json to_json(const LPConfig& c);
Json to_json(const SbmParams& c);
Json to_json(const EmReport& r);
Json to_json(const TrainHistory& h);
Json to_json(const SampleTrace& t);

/// "node_id,class" CSV with a header row.
void write_labels_csv(const std::filesystem::path& file, std::span<const ClassId> labels);
/// Reads a file written by write_labels_csv; every node must appear once.
std::vector<ClassId> read_labels_csv(const std::filesystem::path& file, std::size_t num_nodes);

}  // namespace redisc
