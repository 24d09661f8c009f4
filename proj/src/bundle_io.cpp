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

#include "redisc/bundle_io.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "redisc/binary.hpp"
#include "redisc/error.hpp"

namespace redisc {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t meta_count(const json& meta, const char* key, const fs::path& file) {
  if (!meta.contains(key) || !meta[key].is_number_unsigned()) {
    throw LoadError(file.string() + ": missing or non-integer key '" + key + "'");
  }
  return meta[key].get<std::size_t>();
}

}  // namespace

std::vector<NodeId> read_index_file(const fs::path& file) {
  ByteReader in(file);
  const std::uint64_t count = in.u64();
  std::vector<NodeId> idx;
  idx.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t k = 0; k < count; ++k) idx.push_back(in.u32());
  in.expect_end();
  return idx;
}

void write_index_file(const fs::path& file, const std::vector<NodeId>& idx) {
  ByteWriter out;
  out.u64(idx.size());
  for (NodeId i : idx) out.u32(i);
  out.save(file);
}

GraphBundle load_bundle(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw LoadError(meta_path.string() + ": cannot open");
  json meta;
  try {
    meta = json::parse(meta_in);
  } catch (const json::parse_error& e) {
    throw LoadError(meta_path.string() + ": malformed JSON at byte " + std::to_string(e.byte));
  }
  if (!meta.is_object()) throw LoadError(meta_path.string() + ": expected a JSON object");

  GraphBundle g;
  g.num_nodes = meta_count(meta, "num_nodes", meta_path);
  g.num_features = meta_count(meta, "num_features", meta_path);
  g.num_classes = meta_count(meta, "num_classes", meta_path);
  const std::string stored = meta.value("edges_stored", std::string{});
  if (stored != "both" && stored != "once") {
    throw LoadError(meta_path.string() + ": edges_stored must be \"both\" or \"once\"");
  }
  json extra = json::object();
  for (const auto& [key, value] : meta.items()) {
    if (key != "num_nodes" && key != "num_features" && key != "num_classes" &&
        key != "edges_stored") {
      extra[key] = value;
    }
  }
  g.extra_meta = extra.dump();

  {
    ByteReader in(dir / "edges.bin");
    const std::uint64_t count = in.u64();
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t k = 0; k < count; ++k) {
      const std::size_t offset = in.offset();
      const NodeId s = in.u32();
      const NodeId d = in.u32();
      if (s >= g.num_nodes || d >= g.num_nodes) {
        throw LoadError(in.path() + ": node index out of range at offset " + std::to_string(offset));
      }
      edges.emplace_back(s, d);
    }
    in.expect_end();
    try {
      g.adjacency = stored == "both" ? Adjacency::from_directed(g.num_nodes, edges)
                                     : Adjacency::from_undirected(g.num_nodes, edges);
    } catch (const LoadError& e) {
      throw LoadError(in.path() + ": " + e.what());
    }
  }

  {
    ByteReader in(dir / "features.bin");
    g.features.resize(g.num_nodes * g.num_features);
    for (auto& f : g.features) {
      const std::size_t offset = in.offset();
      f = in.f32();
      if (!std::isfinite(f)) {
        throw LoadError(in.path() + ": non-finite feature at offset " + std::to_string(offset));
      }
    }
    in.expect_end();
  }

  {
    ByteReader in(dir / "labels.bin");
    g.labels.resize(g.num_nodes);
    for (auto& label : g.labels) {
      const std::size_t offset = in.offset();
      const std::uint16_t v = in.u16();
      if (v == kUnknownLabel) {
        label.reset();
      } else if (v >= g.num_classes) {
        throw LoadError(in.path() + ": class id " + std::to_string(v) + " out of range at offset " +
                        std::to_string(offset));
      } else {
        label = v;
      }
    }
    in.expect_end();
  }

  g.splits.train_idx = read_index_file(dir / "splits" / "train.idx");
  g.splits.val_idx = read_index_file(dir / "splits" / "val.idx");
  g.splits.test_idx = read_index_file(dir / "splits" / "test.idx");
  try {
    g.validate();
  } catch (const LoadError& e) {
    throw LoadError(dir.string() + ": " + e.what());
  }
  return g;
}

void save_bundle(const GraphBundle& g, const fs::path& dir) {
  g.validate();
  fs::create_directories(dir / "splits");

  json meta = json::parse(g.extra_meta);
  meta["num_nodes"] = g.num_nodes;
  meta["num_features"] = g.num_features;
  meta["num_classes"] = g.num_classes;
  meta["edges_stored"] = "both";
  {
    std::ofstream out(dir / "meta.json", std::ios::binary | std::ios::trunc);
    out << meta.dump(2) << '\n';
    if (!out) throw Error((dir / "meta.json").string() + ": write failed");
  }

  ByteWriter edges;
  edges.u64(g.adjacency.num_directed_edges());
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    for (NodeId j : g.adjacency.neighbors(static_cast<NodeId>(i))) {
      edges.u32(static_cast<NodeId>(i));
      edges.u32(j);
    }
  }
  edges.save(dir / "edges.bin");

  ByteWriter features;
  for (float f : g.features) features.f32(f);
  features.save(dir / "features.bin");

  ByteWriter labels;
  for (const auto& label : g.labels) labels.u16(label ? *label : kUnknownLabel);
  labels.save(dir / "labels.bin");

  write_index_file(dir / "splits" / "train.idx", g.splits.train_idx);
  write_index_file(dir / "splits" / "val.idx", g.splits.val_idx);
  write_index_file(dir / "splits" / "test.idx", g.splits.test_idx);
}

}  // namespace redisc
