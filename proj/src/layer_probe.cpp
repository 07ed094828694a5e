// Copyright 2026 the sqabench authors
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

#include "sqa/layer_probe.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace sqa {

std::vector<double> softmax(const std::vector<double>& logits) {
  double max_logit = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

static void check_shapes(const LayerStack& stack, const ProbeParams& params) {
  if (stack.layers != params.layer_logits.size())
    throw std::invalid_argument("layer count mismatch: stack has " +
                                std::to_string(stack.layers) + ", params have " +
                                std::to_string(params.layer_logits.size()));
  if (stack.dims != params.dims)
    throw std::invalid_argument("dim mismatch between stack and head");
}

std::vector<double> weighted_layer_sum(const LayerStack& stack, const ProbeParams& params) {
  check_shapes(stack, params);
  std::vector<double> w = softmax(params.layer_logits);
  std::vector<double> out(stack.frames * stack.dims, 0.0);
  for (std::size_t l = 0; l < stack.layers; ++l)
    for (std::size_t t = 0; t < stack.frames; ++t)
      for (std::size_t d = 0; d < stack.dims; ++d) out[t * stack.dims + d] += w[l] * stack.at(l, t, d);
  return out;
}

static std::vector<double> mean_pool(const std::vector<double>& frames_by_dims,
                                     std::size_t frames, std::size_t dims) {
  if (frames == 0) throw std::invalid_argument("cannot pool over zero frames");
  std::vector<double> pooled(dims, 0.0);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t d = 0; d < dims; ++d) pooled[d] += frames_by_dims[t * dims + d];
  for (double& v : pooled) v /= static_cast<double>(frames);
  return pooled;
}

std::array<double, 4> probe_forward(const LayerStack& stack, const ProbeParams& params) {
  std::vector<double> pooled = mean_pool(weighted_layer_sum(stack, params), stack.frames, stack.dims);
  std::array<double, 4> logits{};
  for (int k = 0; k < 4; ++k) {
    double acc = params.head_bias[k];
    for (std::size_t d = 0; d < params.dims; ++d) acc += params.head_weights[k * params.dims + d] * pooled[d];
    logits[k] = acc;
  }
  return logits;
}

double probe_loss_and_gradients(const LayerStack& stack, const ProbeParams& params,
                                ProbeGradients* grads) {
  check_shapes(stack, params);
  if (stack.label < 0 || stack.label > 3)
    throw std::invalid_argument("label outside A-D for item " + stack.item_id);

  const std::size_t L = stack.layers, T = stack.frames, D = stack.dims;
  std::vector<double> w = softmax(params.layer_logits);

  // pooled_d = (1/T) sum_t sum_l w_l x_ltd
  std::vector<double> layer_pooled(L * D, 0.0);  // per-layer mean over frames
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t d = 0; d < D; ++d) layer_pooled[l * D + d] += stack.at(l, t, d);
  for (double& v : layer_pooled) v /= static_cast<double>(T);

  std::vector<double> pooled(D, 0.0);
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t d = 0; d < D; ++d) pooled[d] += w[l] * layer_pooled[l * D + d];

  std::array<double, 4> logits{};
  for (int k = 0; k < 4; ++k) {
    double acc = params.head_bias[k];
    for (std::size_t d = 0; d < D; ++d) acc += params.head_weights[k * D + d] * pooled[d];
    logits[k] = acc;
  }

  double max_logit = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  std::array<double, 4> probs{};
  for (int k = 0; k < 4; ++k) {
    probs[k] = std::exp(logits[k] - max_logit);
    z += probs[k];
  }
  for (double& p : probs) p /= z;
  double loss = -std::log(probs[stack.label]);

  if (grads) {
    grads->layer_logits.assign(L, 0.0);
    grads->head_weights.assign(4 * D, 0.0);
    grads->head_bias.fill(0.0);

    std::array<double, 4> dlogits = probs;
    dlogits[stack.label] -= 1.0;

    std::vector<double> dpooled(D, 0.0);
    for (int k = 0; k < 4; ++k) {
      grads->head_bias[k] = dlogits[k];
      for (std::size_t d = 0; d < D; ++d) {
        grads->head_weights[k * D + d] = dlogits[k] * pooled[d];
        dpooled[d] += params.head_weights[k * D + d] * dlogits[k];
      }
    }

    // d loss / d w_l, then back through the softmax Jacobian.
    std::vector<double> dw(L, 0.0);
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t d = 0; d < D; ++d) dw[l] += dpooled[d] * layer_pooled[l * D + d];
    double dot = 0.0;
    for (std::size_t l = 0; l < L; ++l) dot += w[l] * dw[l];
    for (std::size_t l = 0; l < L; ++l) grads->layer_logits[l] = w[l] * (dw[l] - dot);
  }
  return loss;
}

ProbeParams init_probe_params(std::size_t layers, std::size_t dims, std::uint64_t seed) {
  ProbeParams params;
  params.dims = dims;
  params.layer_logits.assign(layers, 0.0);
  params.head_weights.resize(4 * dims);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  for (double& v : params.head_weights) v = dist(rng);
  params.head_bias.fill(0.0);
  return params;
}

std::pair<ProbeParams, ProbeReport> train_probe(const std::vector<LayerStack>& train,
                                                const std::vector<LayerStack>& valid,
                                                const ProbeConfig& config) {
  if (train.empty()) throw std::invalid_argument("empty training set");
  const std::size_t L = train.front().layers, D = train.front().dims;
  ProbeParams params = init_probe_params(L, D, config.seed);

  const double scale = 1.0 / static_cast<double>(train.size());
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    ProbeGradients total;
    total.layer_logits.assign(L, 0.0);
    total.head_weights.assign(4 * D, 0.0);
    total.head_bias.fill(0.0);
    // Accumulation in example-index order keeps runs bit-reproducible.
    for (const LayerStack& stack : train) {
      ProbeGradients g;
      probe_loss_and_gradients(stack, params, &g);
      for (std::size_t l = 0; l < L; ++l) total.layer_logits[l] += g.layer_logits[l];
      for (std::size_t i = 0; i < 4 * D; ++i) total.head_weights[i] += g.head_weights[i];
      for (int k = 0; k < 4; ++k) total.head_bias[k] += g.head_bias[k];
    }
    for (std::size_t l = 0; l < L; ++l)
      params.layer_logits[l] -= config.learning_rate * scale * total.layer_logits[l];
    for (std::size_t i = 0; i < 4 * D; ++i)
      params.head_weights[i] -= config.learning_rate * scale * total.head_weights[i];
    for (int k = 0; k < 4; ++k)
      params.head_bias[k] -= config.learning_rate * scale * total.head_bias[k];
  }

  ProbeReport report;
  report.weights = softmax(params.layer_logits);
  report.cumulative = cumulative_weight_curve(params);
  std::size_t correct = 0;
  for (const LayerStack& stack : valid) {
    auto logits = probe_forward(stack, params);
    int pred = static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
    if (pred == stack.label) ++correct;
  }
  report.valid_accuracy =
      valid.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(valid.size());
  return {std::move(params), std::move(report)};
}

std::vector<double> cumulative_weight_curve(const ProbeParams& params) {
  std::vector<double> w = softmax(params.layer_logits);
  std::vector<double> curve(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    curve[i] = acc;
  }
  return curve;
}

static constexpr char kStackMagic[4] = {'S', 'Q', 'S', '1'};

void write_layer_stack(const std::filesystem::path& path, const LayerStack& stack) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kStackMagic, 4);
  auto put64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  put64(stack.layers);
  put64(stack.frames);
  put64(stack.dims);
  out.write(reinterpret_cast<const char*>(&stack.duration), 8);
  std::int32_t label = stack.label;
  out.write(reinterpret_cast<const char*>(&label), 4);
  put64(stack.item_id.size());
  out.write(stack.item_id.data(), static_cast<std::streamsize>(stack.item_id.size()));
  out.write(reinterpret_cast<const char*>(stack.values.data()),
            static_cast<std::streamsize>(stack.values.size() * sizeof(double)));
}

LayerStack read_layer_stack(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (std::memcmp(magic, kStackMagic, 4) != 0)
    throw std::runtime_error(path.string() + ": not a layer-stack file");
  LayerStack stack;
  auto get64 = [&]() {
    std::uint64_t v;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  stack.layers = get64();
  stack.frames = get64();
  stack.dims = get64();
  in.read(reinterpret_cast<char*>(&stack.duration), 8);
  std::int32_t label;
  in.read(reinterpret_cast<char*>(&label), 4);
  stack.label = label;
  std::uint64_t id_len = get64();
  stack.item_id.resize(id_len);
  in.read(stack.item_id.data(), static_cast<std::streamsize>(id_len));
  stack.values.resize(stack.layers * stack.frames * stack.dims);
  in.read(reinterpret_cast<char*>(stack.values.data()),
          static_cast<std::streamsize>(stack.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error(path.string() + ": truncated layer-stack file");
  return stack;
}

}  // namespace sqa
