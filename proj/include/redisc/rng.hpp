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
#include <span>
#include <vector>

namespace redisc {

/// Counter-based 64-bit generator.
///
/// The n-th output of a stream is a pure function of (key, n), where the key
/// is derived from a seed and a stream id. Two streams with different ids are
/// statistically independent, so every stochastic operation takes its own
/// stream and results never depend on call interleaving elsewhere.
///
/// All derived distributions are implemented here rather than through
/// <random> so that outputs are bit-identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent child stream; does not advance this stream.
  [[nodiscard]] Rng fork(std::uint64_t stream) const;

  std::uint64_t next_u64();
  std::uint64_t operator()() { return next_u64(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t uniform_index(std::uint64_t n);
  bool bernoulli(double p);
  /// Standard normal deviate (Box-Muller, one value per call).
  double normal();
  /// Index drawn from unnormalized non-negative weights.
  std::size_t categorical(std::span<const double> weights);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  [[nodiscard]] std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Fixed stream ids that a master seed fans out to.
namespace streams {
inline constexpr std::uint64_t kSplit = 1;
inline constexpr std::uint64_t kInit = 2;
inline constexpr std::uint64_t kWarmup = 3;
inline constexpr std::uint64_t kEm = 4;
inline constexpr std::uint64_t kPredict = 5;
inline constexpr std::uint64_t kPartition = 6;
inline constexpr std::uint64_t kSynth = 7;
inline constexpr std::uint64_t kSample = 8;
}  // namespace streams

}  // namespace redisc
