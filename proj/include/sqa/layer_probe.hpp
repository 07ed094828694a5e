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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sqa {

// L layers x T frames x D dims of encoder representations for one prompt.
struct LayerStack {
  std::string item_id;
  int label = 0;  // 0..3 for A..D
  double duration = 0.0;
  std::size_t layers = 0, frames = 0, dims = 0;
  std::vector<double> values;  // row-major [layer][frame][dim]

  double at(std::size_t l, std::size_t t, std::size_t d) const {
    return values[(l * frames + t) * dims + d];
  }
  double& at(std::size_t l, std::size_t t, std::size_t d) {
    return values[(l * frames + t) * dims + d];
  }
};

// Raw layer logits plus a linear 4-way head. Effective layer weights are
// softmax(layer_logits).
struct ProbeParams {
  std::vector<double> layer_logits;        // length L
  std::vector<double> head_weights;        // 4 x D, row-major
  std::array<double, 4> head_bias{};
  std::size_t dims = 0;
};

struct ProbeGradients {
  std::vector<double> layer_logits;
  std::vector<double> head_weights;
  std::array<double, 4> head_bias{};
};

struct ProbeConfig {
  double learning_rate = 0.5;
  int epochs = 200;
  std::uint64_t seed = 0;
};

struct ProbeReport {
  std::vector<double> weights;     // softmax(layer_logits)
  std::vector<double> cumulative;  // running sum, ends at 1
  double valid_accuracy = 0.0;
};

std::vector<double> softmax(const std::vector<double>& logits);

// Per-frame sum over layers of softmax(layer_logits)_l * layer_l.
// Returns T x D, row-major.
std::vector<double> weighted_layer_sum(const LayerStack& stack, const ProbeParams& params);

// weighted_layer_sum -> mean-pool over frames -> linear head.
std::array<double, 4> probe_forward(const LayerStack& stack, const ProbeParams& params);

// Cross-entropy of probe_forward against the stack's label, with analytic
// gradients for every parameter.
double probe_loss_and_gradients(const LayerStack& stack, const ProbeParams& params,
                                ProbeGradients* grads);

ProbeParams init_probe_params(std::size_t layers, std::size_t dims, std::uint64_t seed);

// Full-batch gradient descent on (layer logits, head) with a fixed learning
// rate; representations stay frozen.
std::pair<ProbeParams, ProbeReport> train_probe(const std::vector<LayerStack>& train,
                                                const std::vector<LayerStack>& valid,
                                                const ProbeConfig& config);

std::vector<double> cumulative_weight_curve(const ProbeParams& params);

void write_layer_stack(const std::filesystem::path& path, const LayerStack& stack);
LayerStack read_layer_stack(const std::filesystem::path& path);

}  // namespace sqa
