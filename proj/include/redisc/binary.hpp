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

// Little-endian byte buffers for the on-disk formats.

#include <bit>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace redisc {

class ByteReader {
 public:
  /// Reads the whole file; throws LoadError if it cannot be opened.
  explicit ByteReader(const std::filesystem::path& file);

  std::uint16_t u16() { return static_cast<std::uint16_t>(take(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  std::uint64_t u64() { return take(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string bytes(std::size_t n);

  /// Throws LoadError if unread bytes remain.
  void expect_end() const;
  [[nodiscard]] std::size_t offset() const { return pos_; }
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::uint64_t take(std::size_t n);

  std::string path_;
  std::vector<unsigned char> data_;
  std::size_t pos_ = 0;
};

class ByteWriter {
 public:
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const std::string& s) { data_.insert(data_.end(), s.begin(), s.end()); }

  [[nodiscard]] const std::vector<unsigned char>& data() const { return data_; }
  void save(const std::filesystem::path& file) const;

 private:
  void put(std::uint64_t v, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) data_.push_back(static_cast<unsigned char>(v >> (8 * k)));
  }

  std::vector<unsigned char> data_;
};

}  // namespace redisc
