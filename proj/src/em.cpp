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
#include "redisc/em.hpp"

#include <algorithm>
#include <cmath>

#include "redisc/error.hpp"
#include "redisc/metrics.hpp"

namespace redisc {

void TrainConfig::validate() const {
  if (T < 1) throw ConfigError("T must be at least 1");
  if (S < 1) throw ConfigError("S must be at least 1");
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(lr >= 0.0) || !(weight_decay >= 0.0) || !(warmup_lr >= 0.0) || !(warmup_weight_decay >= 0.0)) {
    throw ConfigError("learning rates and weight decays must be non-negative");
  }
  if (eval_samples < 1) throw ConfigError("eval_samples must be at least 1");
  if (hidden_dim < 1 || layers < 1) throw ConfigError("hidden_dim and layers must be positive");
  if (time_dim < 2 || time_dim % 2 != 0) throw ConfigError("time_dim must be even and positive");
  if (!(cosine_s > 0.0)) throw ConfigError("cosine_s must be positive");
}

SampleQueue::SampleQueue(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ < 1) throw ConfigError("queue capacity must be at least 1");
}

void SampleQueue::push(std::vector<ClassId> labels, double priority) {
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back(QueueEntry{std::move(labels), priority, next_insertion_++});
}

std::vector<double> SampleQueue::priorities() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.priority);
  return out;
}

std::vector<double> selection_probabilities(const SampleQueue& queue, double tau, PriorityMode mode) {
  if (queue.empty()) throw ComputeError("priority selection from an empty queue");
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  const auto pr = queue.priorities();
  std::vector<double> w(pr.size());
  if (mode == PriorityMode::kSoftmax) {
    const double top = *std::max_element(pr.begin(), pr.end());
    for (std::size_t k = 0; k < pr.size(); ++k) w[k] = std::exp((pr[k] - top) / tau);
  } else {
    for (std::size_t k = 0; k < pr.size(); ++k) w[k] = std::pow(std::max(pr[k], 0.0), 1.0 / tau);
  }
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0) || !std::isfinite(total)) {
    // all-zero power weights
    std::fill(w.begin(), w.end(), 1.0);
    total = static_cast<double>(w.size());
  }
  for (double& v : w) v /= total;
  return w;
}

std::size_t priority_select(const SampleQueue& queue, double tau, PriorityMode mode, Rng& rng) {
  const auto p = selection_probabilities(queue, tau, mode);
  return rng.categorical(p);
}

double sample_priority(const GraphBundle& g, std::span<const ClassId> labels) {
  return node_accuracy(labels, g.labels, g.splits.val_idx);
}

namespace {

void clamp(std::vector<ClassId>& labels, std::span<const Label> observed) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (observed[i]) labels[i] = *observed[i];
  }
}

}  // namespace

WarmupResult warmup_queue(const GraphBundle& g, const GraphContext& ctx, const TrainConfig& cfg,
                          Rng& rng) {
  cfg.validate();
  if (g.splits.val_idx.empty()) throw ConfigError("training needs a non-empty validation split");
  GnnTrainConfig gc;
  gc.epochs = cfg.warmup_epochs;
  gc.lr = cfg.warmup_lr;
  gc.weight_decay = cfg.warmup_weight_decay;
  gc.hidden = cfg.hidden_dim;
  gc.layers = cfg.layers;
  gc.seed = cfg.seed;
  GnnModel gnn = train_vanilla_gnn(g, ctx, gc);
  const auto observed = observed_labels(g, g.splits.train_idx);
  const nn::Tensor2 probs = predict_proba(gnn.net, ctx);
  SampleQueue queue(cfg.S);
  for (std::size_t s = 0; s < cfg.S; ++s) {
    auto labels = sample_independent(probs, rng);
    clamp(labels, observed);
    const double pr = sample_priority(g, labels);
    queue.push(std::move(labels), pr);
  }
  return WarmupResult{std::move(queue), std::move(gnn)};
}

nn::Var diffusion_loss(nn::Tape& tape, const LabelFusionNet& net, const GraphContext& ctx,
                       const NoiseSchedule& sched, std::span<const ClassId> clean,
                       const LabelState& noisy) {
  const LossMask mask = loss_weight_and_mask(clean, noisy, sched);
  nn::Var z = net.logits(tape, ctx, noisy.labels, static_cast<double>(noisy.t));
  return nn::weighted_softmax_ce(z, clean, mask.weights, mask.active);
}

MStepResult m_step(LabelFusionNet& net, const GraphContext& ctx, const NoiseSchedule& sched,
                   std::span<const ClassId> clean, const TrainConfig& cfg, Rng& rng) {
  MStepResult r;
  r.t = 1 + static_cast<std::size_t>(rng.uniform_index(sched.horizon()));
  const LabelState noisy = forward_mask(clean, r.t, sched, rng);
  r.num_active = noisy.num_masked();
  if (r.num_active == 0) return r;
  nn::Tape tape(net.params());
  nn::Var loss = diffusion_loss(tape, net, ctx, sched, clean, noisy);
  r.loss = loss.value()(0, 0);
  if (!std::isfinite(r.loss)) throw ComputeError("non-finite diffusion loss at t=" + std::to_string(r.t));
  const auto grads = tape.backward(loss);
  nn::optimizer_step(net.params(), grads, cfg.lr, cfg.weight_decay);
  r.stepped = true;
  return r;
}

EmResult em_train(const GraphBundle& g, const GraphContext& ctx, const TrainConfig& cfg) {
  cfg.validate();
  const NoiseSchedule sched = cfg.schedule();
  Rng warm_rng(cfg.seed, streams::kWarmup);
  WarmupResult warm = warmup_queue(g, ctx, cfg, warm_rng);

  Rng init(cfg.seed, streams::kInit);
  LabelFusionNet net(denoiser_config(g, cfg.hidden_dim, cfg.layers, cfg.time_dim), init);
  LabelFusionNet best = net;

  EmResult res{net, {}, std::move(warm.queue)};
  EmReport& rep = res.report;
  rep.warmup_val_acc = warm.gnn.history.best_val_acc;
  rep.warmup_priorities = res.queue.priorities();
  rep.best_val_acc = -1.0;

  const auto observed = observed_labels(g, g.splits.train_idx);
  const bool have_test = !g.splits.test_idx.empty();
  Rng em_rng(cfg.seed, streams::kEm);

  auto e_step = [&](const LabelFusionNet& model) {
    const DenoiseFn fn = make_denoise_fn(model, ctx);
    return clean_labels(sample_conditional_labeled_first(fn, observed, sched, em_rng));
  };

  for (std::size_t round = 0; round < cfg.em_rounds; ++round) {
    RoundRecord rec;
    rec.round = round;
    auto sample = e_step(net);
    rec.val_acc = sample_priority(g, sample);
    if (have_test) rec.test_acc = node_accuracy(sample, g.labels, g.splits.test_idx);
    if (rec.val_acc >= rep.best_val_acc) {
      rep.best_val_acc = rec.val_acc;
      rep.best_round = round;
      best.params().assign_values(net.params());
    }
    res.queue.push(std::move(sample), rec.val_acc);
    rec.queue_size = res.queue.size();

    double total = 0.0;
    for (std::size_t m = 0; m < cfg.m_steps_per_round; ++m) {
      const std::size_t k = priority_select(res.queue, cfg.tau, cfg.priority_mode, em_rng);
      total += m_step(net, ctx, sched, res.queue[k].labels, cfg, em_rng).loss;
    }
    if (cfg.m_steps_per_round > 0) rec.mean_loss = total / static_cast<double>(cfg.m_steps_per_round);
    rep.rounds.push_back(rec);
  }

  // score the final parameters the same way
  const auto last = e_step(net);
  rep.final_val_acc = sample_priority(g, last);
  if (rep.final_val_acc >= rep.best_val_acc) {
    rep.best_val_acc = rep.final_val_acc;
    rep.best_round = cfg.em_rounds;
    best.params().assign_values(net.params());
  }
  rep.final_priorities = res.queue.priorities();
  res.net = std::move(best);
  return res;
}

Prediction majority_vote(std::span<const std::vector<ClassId>> samples, std::size_t num_classes) {
  if (samples.empty()) throw ConfigError("majority vote needs at least one sample");
  const std::size_t n = samples.front().size();
  Prediction p{std::vector<ClassId>(n, 0), nn::Tensor2(n, num_classes)};
  const double w = 1.0 / static_cast<double>(samples.size());
  for (const auto& s : samples) {
    if (s.size() != n) throw ComputeError("samples differ in length");
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i] >= num_classes) throw ComputeError("sampled class out of range");
      p.votes(i, s[i]) += w;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = p.votes.row(i);
    p.classes[i] = static_cast<ClassId>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return p;
}

Prediction predict(const LabelFusionNet& net, const GraphContext& ctx, const NoiseSchedule& sched,
                   std::span<const Label> observed, std::size_t num_samples, const Rng& rng) {
  if (num_samples < 1) throw ConfigError("prediction needs at least one sample");
  const DenoiseFn fn = make_denoise_fn(net, ctx);
  std::vector<std::vector<ClassId>> samples;
  samples.reserve(num_samples);
  for (std::size_t k = 0; k < num_samples; ++k) {
    Rng r = rng.fork(k);
    samples.push_back(clean_labels(sample_conditional_labeled_first(fn, observed, sched, r)));
  }
  return majority_vote(samples, net.config().num_classes);
}

}  // namespace redisc
