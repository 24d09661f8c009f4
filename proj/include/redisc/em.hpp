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
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "redisc/baselines.hpp"
#include "redisc/denoiser.hpp"
#include "redisc/graph.hpp"
#include "redisc/nn/tape.hpp"
#include "redisc/rng.hpp"
#include "redisc/sampler.hpp"
#include "redisc/schedule.hpp"

namespace redisc {

enum class PriorityMode {
  /// p_k proportional to exp(priority_k / tau)
  kSoftmax,
  /// p_k proportional to priority_k^(1 / tau)
  kPower,
};

struct TrainConfig {
  std::size_t T = 80;
  std::size_t S = 100;
  double tau = 0.1;
  double lr = 0.005;
  double weight_decay = 0.001;
  std::size_t em_rounds = 500;
  std::size_t m_steps_per_round = 1;
  std::size_t warmup_epochs = 500;
  std::size_t eval_samples = 10;
  std::uint64_t seed = 0;
  PriorityMode priority_mode = PriorityMode::kSoftmax;
  std::size_t hidden_dim = 64;
  std::size_t layers = 2;
  std::size_t time_dim = 128;
  double cosine_s = kCosineOffset;
  double warmup_lr = 0.01;
  double warmup_weight_decay = 5e-4;

  /// Throws ConfigError on T = 0, S = 0, tau <= 0 and similar.
  void validate() const;
  [[nodiscard]] NoiseSchedule schedule() const { return cosine_schedule(T, cosine_s); }
};

struct QueueEntry {
  std::vector<ClassId> labels;
  double priority = 0.0;
  std::uint64_t insertion = 0;
};

/// Bounded FIFO of pseudo-label samples; the oldest entry is evicted once
/// the capacity is reached.
class SampleQueue {
 public:
  explicit SampleQueue(std::size_t capacity);

  void push(std::vector<ClassId> labels, double priority);
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t capacity() const { return capacity_; }
  [[nodiscard]] const std::deque<QueueEntry>& entries() const { return entries_; }
  [[nodiscard]] const QueueEntry& operator[](std::size_t k) const { return entries_[k]; }
  [[nodiscard]] std::vector<double> priorities() const;

 private:
  std::size_t capacity_;
  std::uint64_t next_insertion_ = 0;
  std::deque<QueueEntry> entries_;
};

/// Selection probabilities of the queue entries.
std::vector<double> selection_probabilities(const SampleQueue& queue, double tau, PriorityMode mode);

/// Index of an entry drawn with selection_probabilities(). Throws on an
/// empty queue.
std::size_t priority_select(const SampleQueue& queue, double tau, PriorityMode mode, Rng& rng);

/// Validation accuracy of a full labeling.
double sample_priority(const GraphBundle& g, std::span<const ClassId> labels);

struct WarmupResult {
  SampleQueue queue;
  GnnModel gnn;
};

/// Trains the plain GNN, then fills the queue with S independent per-node
/// draws from its softmax, each clamped to the train labels.
WarmupResult warmup_queue(const GraphBundle& g, const GraphContext& ctx, const TrainConfig& cfg,
                          Rng& rng);

/// Sum over masked nodes of lambda'(t) times the cross-entropy of the
/// denoiser logits against the clean labels.
nn::Var diffusion_loss(nn::Tape& tape, const LabelFusionNet& net, const GraphContext& ctx,
                       const NoiseSchedule& sched, std::span<const ClassId> clean,
                       const LabelState& noisy);

struct MStepResult {
  double loss = 0.0;
  std::size_t t = 0;
  std::size_t num_active = 0;
  bool stepped = false;
};

/// t ~ Uniform{1..T}, forward-mask the sample, one optimizer step on the
/// diffusion loss. No step is taken when nothing is masked.
MStepResult m_step(LabelFusionNet& net, const GraphContext& ctx, const NoiseSchedule& sched,
                   std::span<const ClassId> clean, const TrainConfig& cfg, Rng& rng);

struct RoundRecord {
  std::size_t round = 0;
  double val_acc = 0.0;
  std::optional<double> test_acc;
  double mean_loss = 0.0;
  std::size_t queue_size = 0;
};

struct EmReport {
  double warmup_val_acc = 0.0;
  std::vector<double> warmup_priorities;
  std::vector<RoundRecord> rounds;
  /// Validation accuracy of an E-step sample from the final parameters.
  double final_val_acc = 0.0;
  /// Round whose parameters were kept (em_rounds means the final ones).
  std::size_t best_round = 0;
  double best_val_acc = 0.0;
  std::vector<double> final_priorities;
};

struct EmResult {
  LabelFusionNet net;
  EmReport report;
  SampleQueue queue;
};

/// Warm-up, then em_rounds of {E-step conditional sample pushed with its
/// validation priority; m_steps_per_round priority-selected M-steps}. Keeps
/// the parameters whose E-step sample scored the best validation accuracy
/// (ties go to the later round).
EmResult em_train(const GraphBundle& g, const GraphContext& ctx, const TrainConfig& cfg);

struct Prediction {
  std::vector<ClassId> classes;
  /// Vote frequencies, N x C.
  nn::Tensor2 votes;
};

/// Majority vote over K conditional samples (ties to the lowest class).
/// Sample k uses rng.fork(k).
Prediction predict(const LabelFusionNet& net, const GraphContext& ctx, const NoiseSchedule& sched,
                   std::span<const Label> observed, std::size_t num_samples, const Rng& rng);

/// Majority vote over given samples.
Prediction majority_vote(std::span<const std::vector<ClassId>> samples, std::size_t num_classes);

}  // namespace redisc
