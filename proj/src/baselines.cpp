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
#include "redisc/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "redisc/error.hpp"
#include "redisc/metrics.hpp"

namespace redisc {

using nn::Tensor2;

CsrMatrix spreading_operator(const Adjacency& adj) {
  const std::size_t n = adj.num_nodes;
  std::vector<double> inv_sqrt(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    if (adj.degree(i) > 0) inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(adj.degree(i)));
  }
  CsrMatrix s;
  s.rows = s.cols = n;
  s.row_ptr.assign(adj.row_ptr.begin(), adj.row_ptr.end());
  s.col_idx.assign(adj.col_idx.begin(), adj.col_idx.end());
  s.values.resize(adj.col_idx.size());
  for (NodeId i = 0; i < n; ++i) {
    for (std::size_t e = adj.row_ptr[i]; e < adj.row_ptr[i + 1]; ++e) {
      s.values[e] = inv_sqrt[i] * inv_sqrt[adj.col_idx[e]];
    }
  }
  return s;
}

LPResult label_spread(const GraphBundle& g, std::span<const NodeId> labeled, const LPConfig& cfg) {
  if (!(cfg.lambda > 0.0 && cfg.lambda < 1.0)) throw ConfigError("label spreading lambda must lie in (0,1)");
  if (labeled.empty()) throw ConfigError("label spreading needs at least one labeled node");
  const std::size_t n = g.num_nodes;
  const std::size_t c = g.num_classes;
  Tensor2 y0(n, c);
  for (NodeId i : labeled) {
    if (i >= n || !g.labels[i]) throw ConfigError("labeled node " + std::to_string(i) + " has no label");
    y0(i, *g.labels[i]) = 1.0;
  }
  const CsrMatrix s = spreading_operator(g.adjacency);
  LPResult res;
  res.scores = y0;
  Tensor2 next(n, c);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    double max_change = 0.0;
    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto out = next.row(i);
      for (std::size_t k = 0; k < c; ++k) out[k] = (1.0 - cfg.lambda) * y0(i, k);
      const auto cols = s.row_cols(i);
      const auto vals = s.row_values(i);
      for (std::size_t e = 0; e < cols.size(); ++e) {
        const double w = cfg.lambda * vals[e];
        const auto src = res.scores.row(cols[e]);
        for (std::size_t k = 0; k < c; ++k) out[k] += w * src[k];
      }
      for (std::size_t k = 0; k < c; ++k) {
        const double d = out[k] - res.scores(i, k);
        max_change = std::max(max_change, std::abs(d));
        frob += d * d;
      }
    }
    std::swap(res.scores, next);
    res.iterations = it + 1;
    res.residuals.push_back(std::sqrt(frob));
    if (max_change < cfg.tolerance) {
      res.converged = true;
      break;
    }
  }
  return res;
}

NetConfig baseline_config(const GraphBundle& g, std::size_t hidden, std::size_t layers,
                          bool label_input) {
  NetConfig c;
  c.in_dim = g.num_features;
  c.num_classes = g.num_classes;
  c.hidden = hidden;
  c.layers = layers;
  c.label_input = label_input;
  c.time_gate = false;
  return c;
}

std::vector<Label> observed_labels(const GraphBundle& g, std::span<const NodeId> idx) {
  std::vector<Label> out(g.num_nodes);
  for (NodeId i : idx) {
    if (!g.labels.at(i)) throw ConfigError("node " + std::to_string(i) + " is listed as labeled but has no label");
    out[i] = g.labels[i];
  }
  return out;
}

std::vector<ClassId> dense_targets(const GraphBundle& g) {
  std::vector<ClassId> out(g.num_nodes, 0);
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    if (g.labels[i]) out[i] = *g.labels[i];
  }
  return out;
}

nn::Var label_trick_loss(nn::Tape& tape, const LabelFusionNet& net, const GraphContext& ctx,
                         std::span<const Label> y_in, std::span<const NodeId> v_out,
                         std::span<const ClassId> targets, std::optional<double> t) {
  for (NodeId i : v_out) {
    if (i < y_in.size() && y_in[i]) throw ComputeError("output node " + std::to_string(i) + " is also an input");
  }
  nn::Var z = net.logits(tape, ctx, y_in, t);
  const std::vector<double> ones(ctx.num_nodes(), 1.0);
  return nn::weighted_softmax_ce(z, targets, ones, v_out);
}

Tensor2 predict_proba(const LabelFusionNet& net, const GraphContext& ctx, std::span<const Label> y_in) {
  nn::Tape tape(net.params());
  return nn::softmax_rows(net.logits(tape, ctx, y_in, std::nullopt).value());
}

std::vector<ClassId> argmax_rows(const Tensor2& scores) {
  std::vector<ClassId> out(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const auto row = scores.row(i);
    out[i] = static_cast<ClassId>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

std::vector<ClassId> predict_independent(const LabelFusionNet& net, const GraphContext& ctx,
                                         std::span<const Label> y_in) {
  return argmax_rows(predict_proba(net, ctx, y_in));
}

std::vector<ClassId> sample_independent(const Tensor2& probs, Rng& rng) {
  std::vector<ClassId> out(probs.rows());
  for (std::size_t i = 0; i < probs.rows(); ++i) out[i] = static_cast<ClassId>(rng.categorical(probs.row(i)));
  return out;
}

namespace {

struct ValScore {
  double acc = 0.0;
  double loss = 0.0;
};

ValScore score_val(const Tensor2& logits, const GraphBundle& g, std::span<const ClassId> targets) {
  const auto& val = g.splits.val_idx;
  if (val.empty()) return {};
  const Tensor2 p = nn::softmax_rows(logits);
  const auto pred = argmax_rows(p);
  double loss = 0.0;
  for (NodeId i : val) loss -= std::log(std::max(p(i, targets[i]), 1e-300));
  return {node_accuracy(pred, g.labels, val), loss / static_cast<double>(val.size())};
}

bool better(const ValScore& a, const ValScore& b) {
  return a.acc > b.acc || (a.acc == b.acc && a.loss < b.loss);
}

GnnModel train_loop(const GraphBundle& g, const GraphContext& ctx, const GnnTrainConfig& cfg,
                    bool label_input, double lambda_in) {
  if (!(lambda_in >= 0.0 && lambda_in <= 1.0)) throw ConfigError("lambda_in must lie in [0,1]");
  Rng init(cfg.seed, streams::kInit);
  Rng partition(cfg.seed, streams::kPartition);
  LabelFusionNet net(baseline_config(g, cfg.hidden, cfg.layers, label_input), init);
  const auto& train = g.splits.train_idx;
  const auto targets = dense_targets(g);
  std::vector<Label> full_inputs;
  if (label_input) full_inputs = observed_labels(g, train);

  GnnModel out{net, {}, full_inputs};
  ValScore best{-1.0, 0.0};
  auto consider = [&](const Tensor2& logits, std::size_t epoch) {
    const ValScore s = score_val(logits, g, targets);
    if (epoch < cfg.epochs) out.history.val_acc.push_back(s.acc);
    else out.history.final_val_acc = s.acc;
    if (g.splits.val_idx.empty() || better(s, best)) {
      best = s;
      out.net.params().assign_values(net.params());
      out.history.best_epoch = epoch;
      out.history.best_val_acc = s.acc;
    }
  };

  std::vector<Label> y_in(label_input ? g.num_nodes : 0);
  std::vector<NodeId> v_out;
  std::vector<double> weights(g.num_nodes, 0.0);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    v_out.clear();
    std::fill(y_in.begin(), y_in.end(), Label{});
    for (NodeId i : train) {
      if (label_input && partition.bernoulli(lambda_in)) {
        y_in[i] = g.labels[i];
      } else {
        v_out.push_back(i);
      }
    }
    nn::Tape tape(net.params());
    nn::Var z = net.logits(tape, ctx, y_in, std::nullopt);
    if (label_input) {
      nn::Tape eval(net.params());
      consider(net.logits(eval, ctx, full_inputs, std::nullopt).value(), epoch);
    } else {
      consider(z.value(), epoch);
    }
    if (v_out.empty()) {
      out.history.loss.push_back(0.0);
      continue;
    }
    std::fill(weights.begin(), weights.end(), 0.0);
    const double w = 1.0 / static_cast<double>(v_out.size());
    for (NodeId i : v_out) weights[i] = w;
    nn::Var loss = nn::weighted_softmax_ce(z, targets, weights, v_out);
    const double lv = loss.value()(0, 0);
    if (!std::isfinite(lv)) throw ComputeError("non-finite training loss at epoch " + std::to_string(epoch));
    out.history.loss.push_back(lv);
    const auto grads = tape.backward(loss);
    nn::optimizer_step(net.params(), grads, cfg.lr, cfg.weight_decay);
  }
  nn::Tape tape(net.params());
  consider(net.logits(tape, ctx, label_input ? std::span<const Label>(full_inputs) : std::span<const Label>{},
                      std::nullopt)
               .value(),
           cfg.epochs);
  return out;
}

}  // namespace

GnnModel train_vanilla_gnn(const GraphBundle& g, const GraphContext& ctx, const GnnTrainConfig& cfg) {
  return train_loop(g, ctx, cfg, false, 0.0);
}

GnnModel train_label_trick(const GraphBundle& g, const GraphContext& ctx, double lambda_in,
                           const GnnTrainConfig& cfg) {
  return train_loop(g, ctx, cfg, true, lambda_in);
}

}  // namespace redisc
