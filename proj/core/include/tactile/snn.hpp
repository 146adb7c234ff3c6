// Copyright 2026 The Tactile SNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Discrete-time current-based LIF networks with one hidden layer, either
// feedforward or recurrent.
//
// Per step, for each layer:
//   I(t) = alpha * I(t-1) + weighted_input(t)
//   U(t) = (beta * U(t-1) + I(t)) * (1 - S(t-1))
//   S(t) = U(t) >= threshold
// Hidden weighted input is W_in x(t) (+ V_rec S_hidden(t-1) when recurrent);
// output weighted input is W_out S_hidden(t). All state starts at zero.

#ifndef TACTILE_SNN_HPP_
#define TACTILE_SNN_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tactile/event_codec.hpp"

namespace tactile {

struct LifParams {
  double tau_mem_ms = 60.0;
  double tau_syn_ms = 6.0;
  double time_bin_ms = 5.0;
  double alpha = 0.0;  // exp(-bin / tau_syn)
  double beta = 0.0;   // exp(-bin / tau_mem)
  double threshold = 1.0;
  double u_rest = 0.0;
  double resistance = 1.0;

  static LifParams from_time_constants(double tau_mem_ms, double tau_syn_ms,
                                       double time_bin_ms, double threshold = 1.0);
  // Checks ranges and that alpha/beta agree with the time constants.
  void validate() const;
};

struct LayerState {
  Eigen::VectorXd current;
  Eigen::VectorXd voltage;
  Eigen::VectorXd spikes;

  static LayerState zeros(int n);
};

LayerState lif_step(const LayerState& state, const LifParams& params,
                    const Eigen::VectorXd& weighted_input);

struct NetworkDef {
  bool recurrent = true;
  Eigen::MatrixXd w_in;   // [hidden x inputs]
  Eigen::MatrixXd v_rec;  // [hidden x hidden], empty when feedforward
  Eigen::MatrixXd w_out;  // [outputs x hidden]
  LifParams lif_hidden;
  LifParams lif_out;

  int n_inputs() const { return static_cast<int>(w_in.cols()); }
  int n_hidden() const { return static_cast<int>(w_in.rows()); }
  int n_outputs() const { return static_cast<int>(w_out.rows()); }
  void validate() const;
};

// Single-sample trace; every matrix is [T x n].
struct ForwardTrace {
  Eigen::MatrixXd hidden_current, hidden_voltage, hidden_spikes;
  Eigen::MatrixXd output_current, output_voltage, output_spikes;
  Eigen::VectorXd output_counts;
  double hidden_spike_total = 0.0;

  int n_steps() const { return static_cast<int>(hidden_spikes.rows()); }
};

// Compressed per-step list of active input channels.
struct SpikeRaster {
  int n_steps = 0;
  int n_channels = 0;
  int label = 0;
  std::vector<std::int32_t> offsets;  // n_steps + 1
  std::vector<std::int32_t> channels;

  static SpikeRaster from_tensor(const BinnedSpikeTensor& tensor);
  std::span<const std::int32_t> active(int t) const {
    return {channels.data() + offsets[t], channels.data() + offsets[t + 1]};
  }
  std::int64_t count() const { return static_cast<std::int64_t>(channels.size()); }
  SpikeRaster prefix(int steps) const;
};

enum class SpikeFunction {
  kHeaviside,
  // Spike value is the fast sigmoid (U - threshold) / (1 + scale |U - threshold|).
  // Makes the forward pass differentiable for gradient verification.
  kFastSigmoid,
};

struct ForwardOptions {
  SpikeFunction spike = SpikeFunction::kHeaviside;
  double surrogate_scale = 1.0;
  bool keep_currents = false;
};

// Batched trace. State matrices are [n x (T * B)]; step t of sample b lives
// in column t * B + b.
struct BatchTrace {
  int n_steps = 0;
  int batch = 0;
  ForwardOptions options;
  std::vector<const SpikeRaster*> inputs;
  Eigen::MatrixXd hidden_voltage, hidden_spikes;
  Eigen::MatrixXd output_voltage, output_spikes;
  Eigen::MatrixXd hidden_current, output_current;  // only with keep_currents
  Eigen::MatrixXd output_counts;                  // [B x n_outputs]
  Eigen::MatrixXd hidden_counts;                  // [B x n_hidden]

  Eigen::Index col(int t, int b) const { return static_cast<Eigen::Index>(t) * batch + b; }
  ForwardTrace sample(int b) const;
};

BatchTrace forward_batch(const NetworkDef& net, std::span<const SpikeRaster* const> inputs,
                         const ForwardOptions& options = {});

ForwardTrace forward(const NetworkDef& net, const BinnedSpikeTensor& input);
ForwardTrace forward(const NetworkDef& net, const SpikeRaster& input);

// Argmax of spike counts; ties resolve to the lowest index.
int predict(const Eigen::VectorXd& counts);
int predict(const ForwardTrace& trace);

}  // namespace tactile

#endif  // TACTILE_SNN_HPP_
