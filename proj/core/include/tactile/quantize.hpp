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

// Post-training fixed-point conversion and integer inference with a
// Loihi-style neuron:
//
//   I(t) = I(t-1) * (4096 - dI) / 4096 + 64 * sum_j w_ij s_j(t)
//   U(t) = U(t-1) * (4096 - dU) / 4096 + I(t)
//   spike when U(t) >= theta_q, then U is cleared
//
// Divisions truncate toward zero. A neuron that spiked at t-1 holds U = 0
// for step t, mirroring the reset factor (1 - S(t-1)) of the float model.

#ifndef TACTILE_QUANTIZE_HPP_
#define TACTILE_QUANTIZE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tactile/snn.hpp"

namespace tactile {

using QMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr int kDecayOne = 4096;      // 2^12
inline constexpr int kInputScale = 64;      // 2^6
inline constexpr int kWeightLevels = 256;   // target range for max |w|
inline constexpr int kWeightMin = -256;
inline constexpr int kWeightMax = 254;

struct QuantParams {
  int delta_current = 0;  // dI in [0, 4096]
  int delta_voltage = 0;  // dU in [0, 4096]
  int w_scale = 1;
  std::int64_t threshold = 0;  // theta_q

  void validate() const;
};

struct QuantizedNetwork {
  bool recurrent = true;
  QMatrix w_in;   // [hidden x inputs]
  QMatrix v_rec;  // [hidden x hidden], empty when feedforward
  QMatrix w_out;  // [outputs x hidden]
  QuantParams hidden;
  QuantParams output;
  double time_bin_ms = 0.0;

  int n_inputs() const { return static_cast<int>(w_in.cols()); }
  int n_hidden() const { return static_cast<int>(w_in.rows()); }
  int n_outputs() const { return static_cast<int>(w_out.rows()); }
  // Even weights within [-256, 254], consistent shapes, valid params.
  void validate() const;
};

struct SynOpReport {
  std::int64_t n_samples = 0;
  std::int64_t input_events = 0;
  std::int64_t hidden_spikes = 0;
  std::int64_t output_spikes = 0;
  std::int64_t synops = 0;

  double per_sample(std::int64_t total) const {
    return n_samples ? static_cast<double>(total) / static_cast<double>(n_samples) : 0.0;
  }
  SynOpReport& operator+=(const SynOpReport& o);
  bool operator==(const SynOpReport&) const = default;
};

// int(4096 * (1 - exp(-bin / tau))) clamped to [0, 4096].
int decay_from_tau(double tau_ms, double bin_ms);

// Nearest even integer to x, ties away from zero, clamped to [-256, 254].
std::int32_t quantize_value(double x);

struct QuantizedWeights {
  QMatrix weights;
  int w_scale = 1;
  std::int64_t threshold = 0;
};

// w_scale = int(256 / max|w|); w_q = quantize_value(w * w_scale);
// theta_q = 64 * theta * w_scale.
QuantizedWeights quantize_weights(const Eigen::MatrixXd& w, double threshold);

// Hidden layer scale covers W_in and V_rec jointly; the output layer uses W_out.
QuantizedNetwork quantize_network(const NetworkDef& net);

struct LoihiState {
  std::vector<std::int64_t> current;
  std::vector<std::int64_t> voltage;
  std::vector<std::uint8_t> spikes;

  static LoihiState zeros(int n);
};

// One update. `synaptic_input` holds sum_j w_ij s_j(t) per neuron, before the
// 64x input scaling. Throws SaturationError when I or U leaves int32 range.
void loihi_step(LoihiState& state, const QuantParams& params,
                std::span<const std::int64_t> synaptic_input);

// Convenience form: sums the columns of `weights` selected by `active`.
void loihi_step(LoihiState& state, const QuantParams& params,
                std::span<const std::int32_t> active, const QMatrix& weights);

struct QuantizedResult {
  std::vector<int> predictions;
  Eigen::MatrixXi output_counts;  // [samples x outputs]
  SynOpReport report;
};

// Each sample runs from zero state for its T steps followed by `blank_steps`
// steps without input. Predictions use output spikes of the T input steps;
// synaptic operations are counted over all steps. Every input event costs
// n_hidden operations and every hidden spike n_outputs (+ n_hidden when
// recurrent).
QuantizedResult quantized_forward(const QuantizedNetwork& qnet,
                                  std::span<const SpikeRaster> inputs, int blank_steps = 100);

}  // namespace tactile

#endif  // TACTILE_QUANTIZE_HPP_
