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
#include <string>
#include <vector>

#include "redisc/graph.hpp"

namespace redisc {

/// Label value reserved for UNKNOWN in labels.bin.
inline constexpr std::uint16_t kUnknownLabel = 0xFFFF;

/// Reads a bundle directory:
///
///   meta.json          num_nodes, num_features, num_classes, edges_stored ("both"|"once")
///   edges.bin          u64 pair count, then (u32 src, u32 dst) pairs
///   features.bin       N*d f32, row-major
///   labels.bin         N u16, 0xFFFF = unknown
///   splits/{train,val,test}.idx   u64 count, then u32 indices
///
/// All integers and floats are little-endian. Errors name the file and the
/// byte offset of the offending value.
GraphBundle load_bundle(const std::filesystem::path& dir);

/// Writes the canonical form: edges_stored="both", pairs in CSR order.
void save_bundle(const GraphBundle& g, const std::filesystem::path& dir);

/// Little-endian index list in the splits/*.idx layout.
std::vector<NodeId> read_index_file(const std::filesystem::path& file);
void write_index_file(const std::filesystem::path& file, const std::vector<NodeId>& idx);

}  // namespace redisc
