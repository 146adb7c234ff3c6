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

#include "tactile/snn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tactile/error.hpp"

namespace tactile {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kDecayTolerance = 1e-12;

// Adds, for every sample b, the columns of `weights` selected by the nonzero
// entries of presynaptic column b, scaled by their value.
void accumulate_sparse(const MatrixXd& weights, const MatrixXd& pre, Eigen::Index pre_col0,
                       MatrixXd& post) {
  const Eigen::Index batch = post.cols();
  for (Eigen::Index b = 0; b < batch; ++b) {
    const double* s = pre.col(pre_col0 + b).data();
    for (Eigen::Index j = 0; j < pre.rows(); ++j) {
      if (s[j] != 0.0) post.col(b).noalias() += s[j] * weights.col(j);
    }
  }
}

void apply_spike(const MatrixXd& u, double threshold, const ForwardOptions& opt,
                 MatrixXd& s) {
  if (opt.spike == SpikeFunction::kHeaviside) {
    s = (u.array() >= threshold).cast<double>();
  } else {
    const double lam = opt.surrogate_scale;
    s = (u.array() - threshold) / (1.0 + lam * (u.array() - threshold).abs());
  }
}

}  // namespace

LifParams LifParams::from_time_constants(double tau_mem_ms, double tau_syn_ms,
                                         double time_bin_ms, double threshold) {
  LifParams p;
  p.tau_mem_ms = tau_mem_ms;
  p.tau_syn_ms = tau_syn_ms;
  p.time_bin_ms = time_bin_ms;
  p.alpha = std::exp(-time_bin_ms / tau_syn_ms);
  p.beta = std::exp(-time_bin_ms / tau_mem_ms);
  p.threshold = threshold;
  p.validate();
  return p;
}

void LifParams::validate() const {
  if (!(tau_mem_ms > 0.0) || !(tau_syn_ms > 0.0) || !(time_bin_ms > 0.0)) {
    throw InvalidInput("LIF time constants and bin size must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
    throw InvalidInput("LIF decay constants must lie in (0, 1)");
  }
  if (std::abs(alpha - std::exp(-time_bin_ms / tau_syn_ms)) > kDecayTolerance ||
      std::abs(beta - std::exp(-time_bin_ms / tau_mem_ms)) > kDecayTolerance) {
    throw InvalidInput("LIF decay constants disagree with time constants");
  }
  if (!(threshold > 0.0)) throw InvalidInput("firing threshold must be positive");
}

LayerState LayerState::zeros(int n) {
  return {VectorXd::Zero(n), VectorXd::Zero(n), VectorXd::Zero(n)};
}

LayerState lif_step(const LayerState& state, const LifParams& params,
                    const VectorXd& weighted_input) {
  if (weighted_input.size() != state.current.size() ||
      state.voltage.size() != state.current.size() ||
      state.spikes.size() != state.current.size()) {
    throw InvalidInput("lif_step: dimension mismatch");
  }
  LayerState next;
  next.current = params.alpha * state.current + weighted_input;
  next.voltage = ((params.beta * state.voltage + next.current).array() *
                  (1.0 - state.spikes.array()))
                     .matrix();
  next.spikes = (next.voltage.array() >= params.threshold).cast<double>().matrix();
  return next;
}

void NetworkDef::validate() const {
  const auto h = w_in.rows();
  if (h < 1 || w_in.cols() < 1 || w_out.rows() < 1) {
    throw InvalidInput("network needs at least one input, hidden and output neuron");
  }
  if (w_out.cols() != h) throw InvalidInput("w_out columns must equal hidden size");
  if (recurrent && (v_rec.rows() != h || v_rec.cols() != h)) {
    throw InvalidInput("v_rec must be [hidden x hidden] for a recurrent network");
  }
  if (!recurrent && v_rec.size() != 0) {
    throw InvalidInput("feedforward network must not carry v_rec");
  }
  if (!w_in.allFinite() || !w_out.allFinite() || (recurrent && !v_rec.allFinite())) {
    throw InvalidInput("network weights must be finite");
  }
  lif_hidden.validate();
  lif_out.validate();
}

SpikeRaster SpikeRaster::from_tensor(const BinnedSpikeTensor& tensor) {
  SpikeRaster r;
  r.n_steps = tensor.n_steps();
  r.n_channels = tensor.n_channels();
  r.label = tensor.label();
  r.offsets.reserve(r.n_steps + 1);
  r.offsets.push_back(0);
  for (int t = 0; t < r.n_steps; ++t) {
    for (int c = 0; c < r.n_channels; ++c) {
      if (tensor(t, c)) r.channels.push_back(c);
    }
    r.offsets.push_back(static_cast<std::int32_t>(r.channels.size()));
  }
  return r;
}

SpikeRaster SpikeRaster::prefix(int steps) const {
  steps = std::clamp(steps, 0, n_steps);
  SpikeRaster r;
  r.n_steps = steps;
  r.n_channels = n_channels;
  r.label = label;
  r.offsets.assign(offsets.begin(), offsets.begin() + steps + 1);
  r.channels.assign(channels.begin(), channels.begin() + r.offsets.back());
  return r;
}

BatchTrace forward_batch(const NetworkDef& net, std::span<const SpikeRaster* const> inputs,
                         const ForwardOptions& options) {
  if (inputs.empty()) throw InvalidInput("forward_batch: empty batch");
  const int n_steps = inputs.front()->n_steps;
  for (const SpikeRaster* in : inputs) {
    if (in->n_channels != net.n_inputs()) {
      throw InvalidInput("input has " + std::to_string(in->n_channels) +
                         " channels, network expects " + std::to_string(net.n_inputs()));
    }
    if (in->n_steps != n_steps) throw InvalidInput("batch samples differ in length");
  }

  const int batch = static_cast<int>(inputs.size());
  const int nh = net.n_hidden(), no = net.n_outputs();
  const LifParams& ph = net.lif_hidden;
  const LifParams& po = net.lif_out;

  BatchTrace tr;
  tr.n_steps = n_steps;
  tr.batch = batch;
  tr.options = options;
  tr.inputs.assign(inputs.begin(), inputs.end());
  const Eigen::Index cols = static_cast<Eigen::Index>(n_steps) * batch;
  tr.hidden_voltage.resize(nh, cols);
  tr.hidden_spikes.resize(nh, cols);
  tr.output_voltage.resize(no, cols);
  tr.output_spikes.resize(no, cols);
  if (options.keep_currents) {
    tr.hidden_current.resize(nh, cols);
    tr.output_current.resize(no, cols);
  }

  MatrixXd ih = MatrixXd::Zero(nh, batch), uh = MatrixXd::Zero(nh, batch);
  MatrixXd sh = MatrixXd::Zero(nh, batch), sh_prev = MatrixXd::Zero(nh, batch);
  MatrixXd io = MatrixXd::Zero(no, batch), uo = MatrixXd::Zero(no, batch);
  MatrixXd so = MatrixXd::Zero(no, batch), so_prev = MatrixXd::Zero(no, batch);

  for (int t = 0; t < n_steps; ++t) {
    ih *= ph.alpha;
    for (int b = 0; b < batch; ++b) {
      for (std::int32_t c : inputs[b]->active(t)) ih.col(b) += net.w_in.col(c);
    }
    if (net.recurrent && t > 0) {
      accumulate_sparse(net.v_rec, tr.hidden_spikes, tr.col(t - 1, 0), ih);
    }
    uh = ((ph.beta * uh + ih).array() * (1.0 - sh_prev.array())).matrix();
    apply_spike(uh, ph.threshold, options, sh);

    io *= po.alpha;
    const Eigen::Index c0 = tr.col(t, 0);
    tr.hidden_spikes.middleCols(c0, batch) = sh;
    accumulate_sparse(net.w_out, tr.hidden_spikes, c0, io);
    uo = ((po.beta * uo + io).array() * (1.0 - so_prev.array())).matrix();
    apply_spike(uo, po.threshold, options, so);

    tr.hidden_voltage.middleCols(c0, batch) = uh;
    tr.output_voltage.middleCols(c0, batch) = uo;
    tr.output_spikes.middleCols(c0, batch) = so;
    if (options.keep_currents) {
      tr.hidden_current.middleCols(c0, batch) = ih;
      tr.output_current.middleCols(c0, batch) = io;
    }
    std::swap(sh, sh_prev);
    std::swap(so, so_prev);
  }

  tr.output_counts = MatrixXd::Zero(batch, no);
  tr.hidden_counts = MatrixXd::Zero(batch, nh);
  for (int t = 0; t < n_steps; ++t) {
    tr.output_counts += tr.output_spikes.middleCols(tr.col(t, 0), batch).transpose();
    tr.hidden_counts += tr.hidden_spikes.middleCols(tr.col(t, 0), batch).transpose();
  }
  return tr;
}

ForwardTrace BatchTrace::sample(int b) const {
  ForwardTrace out;
  const int nh = static_cast<int>(hidden_spikes.rows());
  const int no = static_cast<int>(output_spikes.rows());
  auto gather = [&](const MatrixXd& m, int n) {
    MatrixXd r(n_steps, n);
    if (m.size() == 0) return MatrixXd(0, n);
    for (int t = 0; t < n_steps; ++t) r.row(t) = m.col(col(t, b)).transpose();
    return r;
  };
  out.hidden_current = gather(hidden_current, nh);
  out.hidden_voltage = gather(hidden_voltage, nh);
  out.hidden_spikes = gather(hidden_spikes, nh);
  out.output_current = gather(output_current, no);
  out.output_voltage = gather(output_voltage, no);
  out.output_spikes = gather(output_spikes, no);
  out.output_counts = out.output_spikes.colwise().sum().transpose();
  out.hidden_spike_total = out.hidden_spikes.sum();
  return out;
}

ForwardTrace forward(const NetworkDef& net, const SpikeRaster& input) {
  net.validate();
  const SpikeRaster* one[] = {&input};
  ForwardOptions opt;
  opt.keep_currents = true;
  return forward_batch(net, one, opt).sample(0);
}

ForwardTrace forward(const NetworkDef& net, const BinnedSpikeTensor& input) {
  return forward(net, SpikeRaster::from_tensor(input));
}

int predict(const VectorXd& counts) {
  int best = 0;
  for (int i = 1; i < counts.size(); ++i) {
    if (counts(i) > counts(best)) best = i;
  }
  return best;
}

int predict(const ForwardTrace& trace) { return predict(trace.output_counts); }

}  // namespace tactile
