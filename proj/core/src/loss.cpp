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

// Spike-count losses and backpropagation through time.

#include <cmath>
#include <string>

#include "tactile/error.hpp"
#include "tactile/train.hpp"

namespace tactile {
namespace {

using Eigen::ArrayXXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void check_labels(std::span<const int> labels, Eigen::Index rows, Eigen::Index classes) {
  if (static_cast<Eigen::Index>(labels.size()) != rows) {
    throw InvalidInput("label count does not match batch size");
  }
  for (int y : labels) {
    if (y < 0 || y >= classes) {
      throw InvalidInput("label " + std::to_string(y) + " out of range");
    }
  }
}

// Row-wise softmax with max subtraction.
MatrixXd softmax_rows(const MatrixXd& logits) {
  MatrixXd p = logits;
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    const double mx = p.row(r).maxCoeff();
    p.row(r) = (p.row(r).array() - mx).exp().matrix();
    p.row(r) /= p.row(r).sum();
  }
  return p;
}

// Sum over rows of -log softmax(row)[label], unnormalised.
double cross_entropy_sum(const MatrixXd& counts, std::span<const int> labels) {
  double total = 0.0;
  for (Eigen::Index r = 0; r < counts.rows(); ++r) {
    const double mx = counts.row(r).maxCoeff();
    const double lse = mx + std::log((counts.row(r).array() - mx).exp().sum());
    total += lse - counts(r, labels[r]);
  }
  return total;
}

ArrayXXd surrogate(const MatrixXd& u, double threshold, double scale) {
  return (1.0 + scale * (u.array() - threshold).abs()).square().inverse();
}

}  // namespace

LossBreakdown& LossBreakdown::operator+=(const LossBreakdown& o) {
  cross_entropy += o.cross_entropy;
  reg_l1 += o.reg_l1;
  reg_l2 += o.reg_l2;
  total += o.total;
  return *this;
}

GradientSet GradientSet::zeros_like(const NetworkDef& net) {
  GradientSet g;
  g.w_in = MatrixXd::Zero(net.w_in.rows(), net.w_in.cols());
  g.v_rec = MatrixXd::Zero(net.v_rec.rows(), net.v_rec.cols());
  g.w_out = MatrixXd::Zero(net.w_out.rows(), net.w_out.cols());
  return g;
}

GradientSet& GradientSet::operator+=(const GradientSet& o) {
  w_in += o.w_in;
  v_rec += o.v_rec;
  w_out += o.w_out;
  return *this;
}

bool GradientSet::all_finite() const {
  return w_in.allFinite() && v_rec.allFinite() && w_out.allFinite();
}

double surrogate_grad(double u, double scale) {
  const double d = 1.0 + scale * std::abs(u);
  return 1.0 / (d * d);
}

double loss_cross_entropy(const MatrixXd& counts, std::span<const int> labels) {
  check_labels(labels, counts.rows(), counts.cols());
  if (counts.rows() == 0) return 0.0;
  if (!counts.allFinite()) throw InvalidInput("spike counts must be finite");
  return cross_entropy_sum(counts, labels) / static_cast<double>(counts.rows());
}

double loss_reg_lower(const MatrixXd& hidden_counts, int n_steps, double strength,
                      double threshold) {
  if (hidden_counts.size() == 0 || n_steps <= 0) return 0.0;
  const double n_batch = static_cast<double>(hidden_counts.rows());
  const double n = static_cast<double>(hidden_counts.cols());
  const double hinge =
      ((hidden_counts.array() / n_steps) - threshold).max(0.0).sum();
  return strength / (n_batch + n) * hinge;
}

double loss_reg_upper(const MatrixXd& hidden_counts, double strength, double threshold) {
  if (hidden_counts.size() == 0) return 0.0;
  const double n_batch = static_cast<double>(hidden_counts.rows());
  const VectorXd mean = hidden_counts.rowwise().mean();
  return strength / n_batch * (mean.array() - threshold).max(0.0).square().sum();
}

LossBreakdown evaluate_loss(const BatchTrace& trace, std::span<const int> labels,
                            const TrainConfig& cfg, int batch_norm) {
  check_labels(labels, trace.output_counts.rows(), trace.output_counts.cols());
  const double nb = batch_norm > 0 ? batch_norm : trace.batch;
  const double n = static_cast<double>(trace.hidden_counts.cols());
  LossBreakdown l;
  l.cross_entropy = cross_entropy_sum(trace.output_counts, labels) / nb;
  l.reg_l1 = cfg.reg_lower_strength / (nb + n) *
             ((trace.hidden_counts.array() / trace.n_steps) - cfg.reg_lower_threshold)
                 .max(0.0)
                 .sum();
  const VectorXd mean = trace.hidden_counts.rowwise().mean();
  l.reg_l2 = cfg.reg_upper_strength / nb *
             (mean.array() - cfg.reg_upper_threshold).max(0.0).square().sum();
  l.total = l.cross_entropy + cfg.reg_neurons * l.reg_l1 + cfg.reg_spikes * l.reg_l2;
  return l;
}

GradientSet backward(const NetworkDef& net, const BatchTrace& trace,
                     std::span<const int> labels, const TrainConfig& cfg, int batch_norm,
                     LossBreakdown* loss) {
  if (trace.batch == 0 || trace.hidden_voltage.cols() == 0) {
    throw InvalidInput("backward: missing forward trace");
  }
  if (trace.hidden_voltage.rows() != net.n_hidden() ||
      trace.output_voltage.rows() != net.n_outputs()) {
    throw InvalidInput("backward: trace does not match network");
  }
  check_labels(labels, trace.batch, net.n_outputs());

  const int batch = trace.batch;
  const int n_steps = trace.n_steps;
  const int nh = net.n_hidden(), no = net.n_outputs();
  const double nb = batch_norm > 0 ? batch_norm : batch;
  const double lam = cfg.surrogate_scale;
  const LifParams& ph = net.lif_hidden;
  const LifParams& po = net.lif_out;

  if (loss) *loss = evaluate_loss(trace, labels, cfg, batch_norm);

  // dL/dcount for the outputs: (softmax - onehot) / N_batch, one column per sample.
  MatrixXd g_counts = softmax_rows(trace.output_counts).transpose();
  for (int b = 0; b < batch; ++b) g_counts(labels[b], b) -= 1.0;
  g_counts /= nb;

  // Direct regulariser gradient on each hidden spike, constant over time.
  MatrixXd g_reg = MatrixXd::Zero(nh, batch);
  if (cfg.reg_neurons != 0.0) {
    const double k = cfg.reg_neurons * cfg.reg_lower_strength / (nb + nh) / n_steps;
    g_reg += (k * ((trace.hidden_counts.transpose().array() / n_steps) >
                   cfg.reg_lower_threshold)
                      .cast<double>())
                 .matrix();
  }
  if (cfg.reg_spikes != 0.0) {
    const VectorXd mean = trace.hidden_counts.rowwise().mean();
    for (int b = 0; b < batch; ++b) {
      const double excess = mean(b) - cfg.reg_upper_threshold;
      if (excess > 0.0) {
        g_reg.col(b).array() += cfg.reg_spikes * cfg.reg_upper_strength / nb * 2.0 * excess / nh;
      }
    }
  }

  GradientSet g = GradientSet::zeros_like(net);
  MatrixXd carry_uo = MatrixXd::Zero(no, batch), carry_io = MatrixXd::Zero(no, batch);
  MatrixXd carry_uh = MatrixXd::Zero(nh, batch), carry_ih = MatrixXd::Zero(nh, batch);
  MatrixXd rec_s = MatrixXd::Zero(nh, batch);  // V^T dL/dI_h(t+1)
  MatrixXd g_io(no, batch), g_ih(nh, batch), g_sh(nh, batch);

  for (int t = n_steps - 1; t >= 0; --t) {
    const Eigen::Index c0 = trace.col(t, 0);
    // Output layer.
    const auto uo = trace.output_voltage.middleCols(c0, batch);
    ArrayXXd mask_o = ArrayXXd::Ones(no, batch);
    if (t > 0) mask_o -= trace.output_spikes.middleCols(trace.col(t - 1, 0), batch).array();
    const ArrayXXd g_uo = g_counts.array() * surrogate(uo, po.threshold, lam) + carry_uo.array();
    g_io = (g_uo * mask_o).matrix() + carry_io;
    carry_uo = (g_uo * mask_o * po.beta).matrix();
    carry_io = po.alpha * g_io;

    // dW_out += dI_o(t) S_h(t)^T, exploiting sparse hidden spikes.
    for (int b = 0; b < batch; ++b) {
      const double* s = trace.hidden_spikes.col(c0 + b).data();
      for (int j = 0; j < nh; ++j) {
        if (s[j] != 0.0) g.w_out.col(j).noalias() += s[j] * g_io.col(b);
      }
    }

    // Hidden layer.
    g_sh.noalias() = net.w_out.transpose() * g_io;
    g_sh += g_reg;
    if (net.recurrent) g_sh += rec_s;
    const auto uh = trace.hidden_voltage.middleCols(c0, batch);
    ArrayXXd mask_h = ArrayXXd::Ones(nh, batch);
    if (t > 0) mask_h -= trace.hidden_spikes.middleCols(trace.col(t - 1, 0), batch).array();
    const ArrayXXd g_uh = g_sh.array() * surrogate(uh, ph.threshold, lam) + carry_uh.array();
    g_ih = (g_uh * mask_h).matrix() + carry_ih;
    carry_uh = (g_uh * mask_h * ph.beta).matrix();
    carry_ih = ph.alpha * g_ih;

    for (int b = 0; b < batch; ++b) {
      for (std::int32_t c : trace.inputs[b]->active(t)) g.w_in.col(c) += g_ih.col(b);
    }
    if (net.recurrent && t > 0) {
      const Eigen::Index cp = trace.col(t - 1, 0);
      for (int b = 0; b < batch; ++b) {
        const double* s = trace.hidden_spikes.col(cp + b).data();
        for (int j = 0; j < nh; ++j) {
          if (s[j] != 0.0) g.v_rec.col(j).noalias() += s[j] * g_ih.col(b);
        }
      }
      rec_s.noalias() = net.v_rec.transpose() * g_ih;
    }
  }
  return g;
}

}  // namespace tactile
