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

#include "redisc/binary.hpp"

#include <fstream>
#include <iterator>

#include "redisc/error.hpp"

namespace redisc {

ByteReader::ByteReader(const std::filesystem::path& file) : path_(file.string()) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw LoadError(path_ + ": cannot open");
  data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::uint64_t ByteReader::take(std::size_t n) {
  if (pos_ + n > data_.size()) {
    throw LoadError(path_ + ": truncated, needed " + std::to_string(n) + " bytes at offset " +
                    std::to_string(pos_));
  }
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < n; ++k) v |= static_cast<std::uint64_t>(data_[pos_ + k]) << (8 * k);
  pos_ += n;
  return v;
}

std::string ByteReader::bytes(std::size_t n) {
  if (pos_ + n > data_.size()) {
    throw LoadError(path_ + ": truncated, needed " + std::to_string(n) + " bytes at offset " +
                    std::to_string(pos_));
  }
  std::string s(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return s;
}

void ByteReader::expect_end() const {
  if (pos_ != data_.size()) {
    throw LoadError(path_ + ": " + std::to_string(data_.size() - pos_) +
                    " trailing bytes at offset " + std::to_string(pos_));
  }
}

void ByteWriter::save(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(data_.data()), static_cast<std::streamsize>(data_.size()));
  if (!out) throw Error(file.string() + ": write failed");
}

}  // namespace redisc
