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

#include "tactile/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tactile/error.hpp"

namespace tactile {
namespace {

constexpr std::int64_t kAccMin = std::numeric_limits<std::int32_t>::min();
constexpr std::int64_t kAccMax = std::numeric_limits<std::int32_t>::max();

void check_matrix(const QMatrix& w, const char* name) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const std::int32_t v = w.data()[i];
    if (v % 2 != 0 || v < kWeightMin || v > kWeightMax) {
      throw InvalidInput(std::string(name) + ": weight " + std::to_string(v) +
                         " is not an even integer in [-256, 254]");
    }
  }
}

std::int64_t decay(std::int64_t x, int delta) {
  // C++ integer division truncates toward zero.
  return x * (kDecayOne - delta) / kDecayOne;
}

void check_range(std::int64_t v, const char* what) {
  if (v < kAccMin || v > kAccMax) {
    throw SaturationError(std::string(what) + " " + std::to_string(v) +
                          " exceeds the 32-bit accumulator");
  }
}

void add_columns(const QMatrix& w, std::span<const std::int32_t> active,
                 std::vector<std::int64_t>& acc) {
  for (std::int32_t c : active) {
    const std::int32_t* col = w.col(c).data();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += col[i];
  }
}

}  // namespace

void QuantParams::validate() const {
  if (delta_current < 0 || delta_current > kDecayOne || delta_voltage < 0 ||
      delta_voltage > kDecayOne) {
    throw InvalidInput("decay constants must lie in [0, 4096]");
  }
  if (w_scale < 1) throw InvalidInput("w_scale must be a positive integer");
  if (threshold <= 0) throw InvalidInput("quantized threshold must be positive");
}

void QuantizedNetwork::validate() const {
  const auto h = w_in.rows();
  if (h < 1 || w_in.cols() < 1 || w_out.rows() < 1 || w_out.cols() != h) {
    throw InvalidInput("quantized network has inconsistent layer sizes");
  }
  if (recurrent && (v_rec.rows() != h || v_rec.cols() != h)) {
    throw InvalidInput("v_rec must be [hidden x hidden] for a recurrent network");
  }
  if (!recurrent && v_rec.size() != 0) throw InvalidInput("feedforward network carries v_rec");
  check_matrix(w_in, "w_in");
  check_matrix(v_rec, "v_rec");
  check_matrix(w_out, "w_out");
  hidden.validate();
  output.validate();
}

SynOpReport& SynOpReport::operator+=(const SynOpReport& o) {
  n_samples += o.n_samples;
  input_events += o.input_events;
  hidden_spikes += o.hidden_spikes;
  output_spikes += o.output_spikes;
  synops += o.synops;
  return *this;
}

int decay_from_tau(double tau_ms, double bin_ms) {
  if (!(tau_ms > 0.0) || !(bin_ms > 0.0)) {
    throw InvalidInput("decay_from_tau: tau and bin size must be positive");
  }
  const double d = kDecayOne * (1.0 - std::exp(-bin_ms / tau_ms));
  return std::clamp(static_cast<int>(d), 0, kDecayOne);
}

std::int32_t quantize_value(double x) {
  // Nearest multiple of two; std::round ties away from zero.
  const double q = 2.0 * std::round(x / 2.0);
  return static_cast<std::int32_t>(std::clamp(q, double{kWeightMin}, double{kWeightMax}));
}

QuantizedWeights quantize_weights(const Eigen::MatrixXd& w, double threshold) {
  if (!w.allFinite()) throw InvalidInput("quantize_weights: non-finite weight");
  const double max_abs = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
  if (!(max_abs > 0.0)) throw InvalidInput("quantize_weights: all-zero weights give no scale");
  if (!(threshold > 0.0)) throw InvalidInput("quantize_weights: threshold must be positive");
  QuantizedWeights q;
  const double scale = kWeightLevels / max_abs;
  if (scale >= static_cast<double>(std::numeric_limits<int>::max())) {
    throw InvalidInput("quantize_weights: weights too small to scale");
  }
  q.w_scale = static_cast<int>(scale);
  if (q.w_scale < 1) throw InvalidInput("quantize_weights: max |w| exceeds 256");
  q.weights = w.unaryExpr([&](double v) { return quantize_value(v * q.w_scale); });
  q.threshold = std::llround(kInputScale * threshold * q.w_scale);
  return q;
}

QuantizedNetwork quantize_network(const NetworkDef& net) {
  net.validate();
  QuantizedNetwork q;
  q.recurrent = net.recurrent;
  q.time_bin_ms = net.lif_hidden.time_bin_ms;

  // Joint scale for everything feeding the hidden layer.
  const Eigen::Index h = net.n_hidden();
  Eigen::MatrixXd hidden_in(h, net.n_inputs() + (net.recurrent ? h : 0));
  hidden_in.leftCols(net.n_inputs()) = net.w_in;
  if (net.recurrent) hidden_in.rightCols(h) = net.v_rec;
  QuantizedWeights qh = quantize_weights(hidden_in, net.lif_hidden.threshold);
  q.w_in = qh.weights.leftCols(net.n_inputs());
  if (net.recurrent) q.v_rec = qh.weights.rightCols(h);
  q.hidden = {decay_from_tau(net.lif_hidden.tau_syn_ms, net.lif_hidden.time_bin_ms),
              decay_from_tau(net.lif_hidden.tau_mem_ms, net.lif_hidden.time_bin_ms), qh.w_scale,
              qh.threshold};

  QuantizedWeights qo = quantize_weights(net.w_out, net.lif_out.threshold);
  q.w_out = qo.weights;
  q.output = {decay_from_tau(net.lif_out.tau_syn_ms, net.lif_out.time_bin_ms),
              decay_from_tau(net.lif_out.tau_mem_ms, net.lif_out.time_bin_ms), qo.w_scale,
              qo.threshold};
  return q;
}

LoihiState LoihiState::zeros(int n) {
  return {std::vector<std::int64_t>(n, 0), std::vector<std::int64_t>(n, 0),
          std::vector<std::uint8_t>(n, 0)};
}

void loihi_step(LoihiState& s, const QuantParams& p, std::span<const std::int64_t> input) {
  const std::size_t n = s.current.size();
  if (input.size() != n || s.voltage.size() != n || s.spikes.size() != n) {
    throw InvalidInput("loihi_step: dimension mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t cur = decay(s.current[i], p.delta_current) + kInputScale * input[i];
    check_range(cur, "current");
    std::int64_t v = s.spikes[i] ? 0 : decay(s.voltage[i], p.delta_voltage) + cur;
    check_range(v, "voltage");
    s.current[i] = cur;
    s.spikes[i] = v >= p.threshold;
    s.voltage[i] = s.spikes[i] ? 0 : v;
  }
}

void loihi_step(LoihiState& s, const QuantParams& p, std::span<const std::int32_t> active,
                const QMatrix& weights) {
  if (weights.rows() != static_cast<Eigen::Index>(s.current.size())) {
    throw InvalidInput("loihi_step: weight rows do not match layer size");
  }
  std::vector<std::int64_t> acc(s.current.size(), 0);
  for (std::int32_t c : active) {
    if (c < 0 || c >= weights.cols()) throw InvalidInput("loihi_step: input index out of range");
  }
  add_columns(weights, active, acc);
  loihi_step(s, p, acc);
}

QuantizedResult quantized_forward(const QuantizedNetwork& q, std::span<const SpikeRaster> inputs,
                                  int blank_steps) {
  q.validate();
  if (blank_steps < 0) throw InvalidInput("blank_steps must be >= 0");
  const int nh = q.n_hidden(), no = q.n_outputs();
  const std::int64_t hidden_fanout = no + (q.recurrent ? nh : 0);

  QuantizedResult res;
  res.output_counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(inputs.size()), no);
  std::vector<std::int64_t> acc_h(nh), acc_o(no);
  std::vector<std::int32_t> fired;  // hidden spikes of the previous step
  std::vector<std::int32_t> fired_now;

  for (std::size_t b = 0; b < inputs.size(); ++b) {
    const SpikeRaster& x = inputs[b];
    if (x.n_channels != q.n_inputs()) {
      throw InvalidInput("quantized_forward: input has " + std::to_string(x.n_channels) +
                         " channels, network expects " + std::to_string(q.n_inputs()));
    }
    LoihiState sh = LoihiState::zeros(nh), so = LoihiState::zeros(no);
    fired.clear();
    SynOpReport rep;
    rep.n_samples = 1;
    for (int t = 0; t < x.n_steps + blank_steps; ++t) {
      std::fill(acc_h.begin(), acc_h.end(), 0);
      if (t < x.n_steps) {
        auto active = x.active(t);
        add_columns(q.w_in, active, acc_h);
        rep.input_events += static_cast<std::int64_t>(active.size());
      }
      if (q.recurrent) add_columns(q.v_rec, fired, acc_h);
      loihi_step(sh, q.hidden, acc_h);

      fired_now.clear();
      for (int i = 0; i < nh; ++i)
        if (sh.spikes[i]) fired_now.push_back(i);
      rep.hidden_spikes += static_cast<std::int64_t>(fired_now.size());

      std::fill(acc_o.begin(), acc_o.end(), 0);
      add_columns(q.w_out, fired_now, acc_o);
      loihi_step(so, q.output, acc_o);
      for (int k = 0; k < no; ++k) {
        if (!so.spikes[k]) continue;
        ++rep.output_spikes;
        if (t < x.n_steps) ++res.output_counts(static_cast<Eigen::Index>(b), k);
      }
      fired.swap(fired_now);
    }
    rep.synops = rep.input_events * nh + rep.hidden_spikes * hidden_fanout;
    res.report += rep;

    int best = 0;
    for (int k = 1; k < no; ++k) {
      if (res.output_counts(static_cast<Eigen::Index>(b), k) >
          res.output_counts(static_cast<Eigen::Index>(b), best))
        best = k;
    }
    res.predictions.push_back(best);
  }
  return res;
}

}  // namespace tactile
