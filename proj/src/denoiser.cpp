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
#include "redisc/denoiser.hpp"

#include <cmath>

#include "redisc/error.hpp"

namespace redisc {

using nn::Tensor2;
using nn::Var;

GraphContext GraphContext::from(const GraphBundle& g) {
  return GraphContext{feature_matrix(g), normalize_adjacency(g)};
}

NetConfig denoiser_config(const GraphBundle& g, std::size_t hidden, std::size_t layers,
                          std::size_t time_dim) {
  NetConfig c;
  c.in_dim = g.num_features;
  c.num_classes = g.num_classes;
  c.hidden = hidden;
  c.layers = layers;
  c.time_dim = time_dim;
  c.label_input = true;
  c.time_gate = true;
  return c;
}

namespace {

// gain 2 for maps feeding a ReLU, 1 for purely linear ones
Tensor2 he_normal(std::size_t fan_in, std::size_t fan_out, Rng& rng, std::size_t scale_fan = 0,
                  double gain = 2.0) {
  Tensor2 w(fan_in, fan_out);
  const double sd = std::sqrt(gain / static_cast<double>(scale_fan ? scale_fan : fan_in));
  for (double& v : w.data()) v = sd * rng.normal();
  return w;
}

std::string layer_key(std::size_t k, const char* what) {
  return "layer" + std::to_string(k) + "." + what;
}

void check_finite(const Var& v, std::size_t layer, const char* what) {
  if (!v.value().all_finite()) {
    throw ComputeError("non-finite activation in layer " + std::to_string(layer) + " (" + what + ")");
  }
}

}  // namespace

LabelFusionNet::LabelFusionNet(NetConfig config, Rng& init_rng) : config_(config) {
  if (config_.layers < 1 || config_.hidden < 1 || config_.num_classes < 1 || config_.in_dim < 1) {
    throw ConfigError("network needs at least one layer, class, feature and hidden unit");
  }
  if (config_.time_gate && !config_.label_input) {
    throw ConfigError("a learned gate requires label input");
  }
  const std::size_t h = config_.hidden;
  for (std::size_t k = 1; k <= config_.layers; ++k) {
    params_.add(layer_key(k, "feat.W"), he_normal(k == 1 ? config_.in_dim : h, h, init_rng, 0, 1.0));
    params_.add(layer_key(k, "prop.W"), he_normal(h, h, init_rng));
    params_.add(layer_key(k, "prop.b"), Tensor2(1, h));
  }
  // small output layer: near-uniform predictions at initialization
  params_.add("head.W", he_normal(h, config_.num_classes, init_rng, 0, 0.01));
  params_.add("head.b", Tensor2(1, config_.num_classes));
  if (config_.label_input) {
    params_.add("label_embed", he_normal(config_.num_classes, h, init_rng));
  }
  if (config_.time_gate) {
    if (config_.time_dim == 0 || config_.time_dim % 2 != 0) {
      throw ConfigError("time_dim must be even and positive");
    }
    params_.add("time.fc1.W", he_normal(config_.time_dim, h, init_rng));
    params_.add("time.fc1.b", Tensor2(1, h));
    params_.add("time.fc2.W", he_normal(h, h, init_rng));
    params_.add("time.fc2.b", Tensor2(1, h));
    for (std::size_t k = 1; k <= config_.layers; ++k) {
      // fan-in of the concatenated gate input is 2h
      params_.add(layer_key(k, "gate.W_time"), he_normal(h, h, init_rng, 2 * h));
      params_.add(layer_key(k, "gate.W_label"), he_normal(h, h, init_rng, 2 * h));
      params_.add(layer_key(k, "gate.b"), Tensor2(1, h));
    }
  }
  check_shapes();
}

LabelFusionNet::LabelFusionNet(NetConfig config, nn::ParamStore params)
    : config_(config), params_(std::move(params)) {
  check_shapes();
}

void LabelFusionNet::check_shapes() const {
  const std::size_t h = config_.hidden;
  auto expect = [&](const std::string& name, std::size_t r, std::size_t c) {
    const auto id = params_.find(name);
    if (!id) throw ConfigError("parameter '" + name + "' missing for this network config");
    const auto& v = params_.value(*id);
    if (v.rows() != r || v.cols() != c) {
      throw ConfigError("parameter '" + name + "' has shape " + std::to_string(v.rows()) + "x" +
                        std::to_string(v.cols()) + ", expected " + std::to_string(r) + "x" +
                        std::to_string(c));
    }
  };
  for (std::size_t k = 1; k <= config_.layers; ++k) {
    expect(layer_key(k, "feat.W"), k == 1 ? config_.in_dim : h, h);
    expect(layer_key(k, "prop.W"), h, h);
    expect(layer_key(k, "prop.b"), 1, h);
    if (config_.time_gate) {
      expect(layer_key(k, "gate.W_time"), h, h);
      expect(layer_key(k, "gate.W_label"), h, h);
      expect(layer_key(k, "gate.b"), 1, h);
    }
  }
  expect("head.W", h, config_.num_classes);
  expect("head.b", 1, config_.num_classes);
  if (config_.label_input) expect("label_embed", config_.num_classes, h);
  if (config_.time_gate) {
    expect("time.fc1.W", config_.time_dim, h);
    expect("time.fc2.W", h, h);
  }
}

LabelFusionNet net_from_params(nn::ParamStore params) {
  auto shape = [&](const std::string& name) -> const Tensor2* {
    const auto id = params.find(name);
    return id ? &params.value(*id) : nullptr;
  };
  NetConfig c;
  const Tensor2* first = shape(layer_key(1, "feat.W"));
  const Tensor2* head = shape("head.W");
  if (!first || !head) throw LoadError("checkpoint does not hold a network (missing layer1.feat.W or head.W)");
  c.in_dim = first->rows();
  c.hidden = first->cols();
  c.num_classes = head->cols();
  c.layers = 0;
  while (shape(layer_key(c.layers + 1, "feat.W"))) ++c.layers;
  c.label_input = shape("label_embed") != nullptr;
  const Tensor2* fc1 = shape("time.fc1.W");
  c.time_gate = fc1 != nullptr;
  if (fc1) c.time_dim = fc1->rows();
  try {
    return LabelFusionNet(c, std::move(params));
  } catch (const ConfigError& e) {
    throw LoadError(std::string("inconsistent checkpoint: ") + e.what());
  }
}

Tensor2 LabelFusionNet::first_layer_transform(const GraphContext& ctx) const {
  nn::Tape tape(params_);
  return nn::sparse_propagate(ctx.features, tape.param(layer_key(1, "feat.W"))).value();
}

Var LabelFusionNet::logits(nn::Tape& tape, const GraphContext& ctx, std::span<const Label> labels,
                           std::optional<double> t, ForwardProbe* probe,
                           const Tensor2* first_layer) const {
  const std::size_t n = ctx.num_nodes();
  if (ctx.features.rows != n || ctx.features.cols != config_.in_dim) {
    throw ComputeError("feature matrix shape does not match the network input");
  }
  if (config_.label_input && labels.size() != n) {
    throw ComputeError("expected one label slot per node");
  }
  if (config_.time_gate && !t) throw ComputeError("time-gated network needs a timestep");

  std::vector<std::optional<std::size_t>> label_index(n);
  if (config_.label_input) {
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i]) {
        if (*labels[i] >= config_.num_classes) throw ComputeError("input label out of range");
        label_index[i] = *labels[i];
      }
    }
  }

  Var embedded;
  Var time_feat;
  if (config_.label_input) embedded = nn::gather_rows(tape.param("label_embed"), label_index);
  if (config_.time_gate) {
    const auto enc = nn::time_encoding(*t, config_.time_dim);
    Var te = tape.constant(Tensor2(1, config_.time_dim, enc));
    Var hidden = nn::relu(nn::affine(te, tape.param("time.fc1.W"), tape.param("time.fc1.b")));
    time_feat = nn::affine(hidden, tape.param("time.fc2.W"), tape.param("time.fc2.b"));
  }

  Var x;
  for (std::size_t k = 1; k <= config_.layers; ++k) {
    Var xt;
    if (k == 1) {
      xt = first_layer ? tape.constant(*first_layer)
                       : nn::sparse_propagate(ctx.features, tape.param(layer_key(1, "feat.W")));
    } else {
      xt = nn::matmul(x, tape.param(layer_key(k, "feat.W")));
    }
    Var fused = xt;
    if (config_.label_input) {
      if (config_.time_gate) {
        Var time_part = nn::add(nn::matmul(time_feat, tape.param(layer_key(k, "gate.W_time"))),
                                tape.param(layer_key(k, "gate.b")));
        Var label_table = nn::matmul(tape.param("label_embed"), tape.param(layer_key(k, "gate.W_label")));
        Var gate = nn::sigmoid(nn::add_row(nn::gather_rows(label_table, label_index), time_part));
        if (probe) probe->gates.push_back(gate.value());
        fused = nn::add(xt, nn::hadamard(gate, embedded));
      } else {
        fused = nn::add(xt, embedded);
      }
    }
    Var pre = nn::affine(fused, tape.param(layer_key(k, "prop.W")), tape.param(layer_key(k, "prop.b")));
    x = nn::sparse_propagate(ctx.adj, pre);
    if (k < config_.layers) x = nn::relu(x);
    check_finite(x, k, "propagation");
  }
  Var out = nn::affine(x, tape.param("head.W"), tape.param("head.b"));
  check_finite(out, config_.layers + 1, "output head");
  return out;
}

Tensor2 denoise_predict(const LabelFusionNet& net, const GraphContext& ctx, const LabelState& noisy,
                        const Tensor2* first_layer) {
  if (!net.config().time_gate) throw ComputeError("denoise_predict needs a time-gated network");
  nn::Tape tape(net.params());
  Var z = net.logits(tape, ctx, noisy.labels, static_cast<double>(noisy.t), nullptr, first_layer);
  Tensor2 p = nn::softmax_rows(z.value());
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    if (!noisy.labels[i]) continue;
    auto row = p.row(i);
    std::fill(row.begin(), row.end(), 0.0);
    row[*noisy.labels[i]] = 1.0;
  }
  return p;
}

}  // namespace redisc
