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

#include "tactile/train.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>

#include "tactile/error.hpp"

namespace tactile {
namespace {

using Eigen::MatrixXd;

MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, double stddev,
                       std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  MatrixXd m(rows, cols);
  // Fill row-major so the draw order does not depend on storage order.
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = dist(rng);
  return m;
}

std::vector<const SpikeRaster*> gather(std::span<const SpikeRaster> data,
                                       std::span<const int> idx) {
  std::vector<const SpikeRaster*> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(&data[i]);
  return out;
}

}  // namespace

std::optional<HyperParams> reference_hyperparameters(double threshold) {
  HyperParams hp;
  if (threshold == 1.0) {
    hp = {5, 5, 2, 60, 10, 1.0, 1e-2, 1e-6, 4e-3};
  } else if (threshold == 2.0) {
    hp = {15, 3, 8, 50, 10, 1.0, 2e-2, 0.0, 1.5e-3};
  } else if (threshold == 5.0) {
    hp = {10, 3, 4, 70, 10, 1.5, 3.5e-2, 0.0, 1e-3};
  } else if (threshold == 10.0) {
    hp = {10, 5, 2, 70, 10, 4.0, 1.5e-2, 0.0, 1.5e-3};
  } else {
    return std::nullopt;
  }
  return hp;
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw InvalidInput("learning rate must be >= 0");
  if (batch_size < 1) throw InvalidInput("batch_size must be >= 1");
  if (epochs < 0) throw InvalidInput("epochs must be >= 0");
  if (!(surrogate_scale > 0.0)) throw InvalidInput("surrogate scale must be positive");
  if (reg_spikes < 0.0 || reg_neurons < 0.0 || reg_lower_strength < 0.0 ||
      reg_upper_strength < 0.0 || reg_lower_threshold < 0.0 || reg_upper_threshold < 0.0) {
    throw InvalidInput("regularisation parameters must be >= 0");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidInput("test_fraction must be in (0, 1)");
  }
  if (chunk_size < 1) throw InvalidInput("chunk_size must be >= 1");
  if (target_test_accuracy < 0.0 || target_test_accuracy > 1.0) {
    throw InvalidInput("target_test_accuracy must be in [0, 1]");
  }
}

TrainConfig make_train_config(const HyperParams& hp) {
  TrainConfig cfg;
  cfg.surrogate_scale = hp.scale;
  cfg.reg_neurons = hp.reg_neurons;
  cfg.reg_spikes = hp.reg_spikes;
  return cfg;
}

void Adamax::step(NetworkDef& net, const GradientSet& grads) {
  ++t_;
  auto update = [&](MatrixXd& w, const MatrixXd& g, int slot) {
    if (w.size() == 0) return;
    if (static_cast<int>(slots_.size()) <= slot) slots_.resize(slot + 1);
    Moments& mo = slots_[slot];
    if (mo.m.size() == 0) {
      mo.m = MatrixXd::Zero(w.rows(), w.cols());
      mo.u = MatrixXd::Zero(w.rows(), w.cols());
    }
    mo.m = beta1_ * mo.m + (1.0 - beta1_) * g;
    mo.u = (beta2_ * mo.u).cwiseMax((g.array().abs() + eps_).matrix());
    const double step = lr_ / (1.0 - std::pow(beta1_, static_cast<double>(t_)));
    w.array() -= step * mo.m.array() / mo.u.array();
  };
  update(net.w_in, grads.w_in, 0);
  if (net.recurrent) update(net.v_rec, grads.v_rec, 1);
  update(net.w_out, grads.w_out, 2);
}

void Adamax::step(MatrixXd& weights, const MatrixXd& grads, int slot) {
  ++t_;
  if (static_cast<int>(slots_.size()) <= slot) slots_.resize(slot + 1);
  Moments& mo = slots_[slot];
  if (mo.m.size() == 0) {
    mo.m = MatrixXd::Zero(weights.rows(), weights.cols());
    mo.u = MatrixXd::Zero(weights.rows(), weights.cols());
  }
  mo.m = beta1_ * mo.m + (1.0 - beta1_) * grads;
  mo.u = (beta2_ * mo.u).cwiseMax((grads.array().abs() + eps_).matrix());
  const double step = lr_ / (1.0 - std::pow(beta1_, static_cast<double>(t_)));
  weights.array() -= step * mo.m.array() / mo.u.array();
}

NetworkDef init_network(int n_inputs, int n_hidden, int n_outputs, bool recurrent,
                        const HyperParams& hp, std::uint64_t seed) {
  if (n_inputs < 1 || n_hidden < 1 || n_outputs < 1) {
    throw InvalidInput("init_network: layer sizes must be >= 1");
  }
  std::mt19937_64 rng(seed);
  NetworkDef net;
  net.recurrent = recurrent;
  net.w_in = normal_matrix(n_hidden, n_inputs, hp.fwd_weight_scale / std::sqrt(n_inputs), rng);
  if (recurrent) {
    net.v_rec = normal_matrix(n_hidden, n_hidden,
                              hp.fwd_weight_scale * hp.weight_scale_factor / std::sqrt(n_hidden),
                              rng);
  }
  net.w_out = normal_matrix(n_outputs, n_hidden, hp.fwd_weight_scale / std::sqrt(n_hidden), rng);
  const double tau_syn = hp.tau_mem / hp.tau_ratio;
  net.lif_hidden = LifParams::from_time_constants(hp.tau_mem, tau_syn, hp.time_bin_size);
  net.lif_out = net.lif_hidden;
  return net;
}

void stratified_split(std::span<const int> labels, double test_fraction, std::uint64_t seed,
                      std::vector<int>& train, std::vector<int>& test) {
  train.clear();
  test.clear();
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) by_class[labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  for (auto& [label, idx] : by_class) {
    std::shuffle(idx.begin(), idx.end(), rng);
    auto n_test = static_cast<std::size_t>(std::lround(test_fraction * idx.size()));
    if (idx.size() >= 2) n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
    test.insert(test.end(), idx.begin(), idx.begin() + n_test);
    train.insert(train.end(), idx.begin() + n_test, idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
}

double accuracy(const NetworkDef& net, std::span<const SpikeRaster> data,
                std::span<const int> indices, int chunk_size) {
  if (indices.empty()) return 0.0;
  int correct = 0;
  for (std::size_t start = 0; start < indices.size(); start += chunk_size) {
    const std::size_t end = std::min(indices.size(), start + chunk_size);
    auto chunk = gather(data, indices.subspan(start, end - start));
    BatchTrace tr = forward_batch(net, chunk);
    for (int b = 0; b < tr.batch; ++b) {
      if (predict(Eigen::VectorXd(tr.output_counts.row(b).transpose())) == chunk[b]->label) {
        ++correct;
      }
    }
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

TrainResult train(const NetworkDef& initial, std::span<const SpikeRaster> data,
                  const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  initial.validate();
  if (data.empty()) throw InvalidInput("train: empty dataset");

  std::vector<int> labels;
  for (const SpikeRaster& r : data) {
    if (r.label < 0 || r.label >= initial.n_outputs()) {
      throw InvalidInput("train: label outside network outputs");
    }
    labels.push_back(r.label);
  }
  {
    std::map<int, int> counts;
    for (int y : labels) counts[y]++;
    for (auto [y, n] : counts) {
      if (n < 2) throw InvalidInput("train: class " + std::to_string(y) + " has fewer than 2 samples");
    }
  }

  TrainResult result;
  stratified_split(labels, cfg.test_fraction, cfg.seed, result.train_indices,
                   result.test_indices);
  NetworkDef net = initial;
  result.network = net;
  result.best_test_accuracy = accuracy(net, data, result.test_indices, cfg.chunk_size);

  Adamax opt(cfg.learning_rate);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<int> order = result.train_indices;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    LossBreakdown epoch_loss;
    double hidden_spikes = 0.0;
    int n_batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const int nb = static_cast<int>(end - start);
      GradientSet grads = GradientSet::zeros_like(net);
      LossBreakdown batch_loss;
      for (std::size_t c = start; c < end; c += cfg.chunk_size) {
        const std::size_t ce = std::min(end, c + cfg.chunk_size);
        std::span<const int> idx(order.data() + c, ce - c);
        auto chunk = gather(data, idx);
        std::vector<int> y;
        for (const SpikeRaster* r : chunk) y.push_back(r->label);
        BatchTrace tr = forward_batch(net, chunk);
        LossBreakdown l;
        grads += backward(net, tr, y, cfg, nb, &l);
        batch_loss += l;
        hidden_spikes += tr.hidden_counts.sum();
      }
      if (!grads.all_finite()) throw Error("train: non-finite gradient");
      opt.step(net, grads);
      epoch_loss += batch_loss;
      ++n_batches;
    }

    EpochMetrics m;
    m.epoch = epoch + 1;
    if (n_batches > 0) {
      epoch_loss.cross_entropy /= n_batches;
      epoch_loss.reg_l1 /= n_batches;
      epoch_loss.reg_l2 /= n_batches;
      epoch_loss.total /= n_batches;
    }
    m.loss = epoch_loss;
    m.hidden_spike_mean =
        order.empty() ? 0.0 : hidden_spikes / (static_cast<double>(order.size()) * net.n_hidden());
    m.train_accuracy = accuracy(net, data, result.train_indices, cfg.chunk_size);
    m.test_accuracy = accuracy(net, data, result.test_indices, cfg.chunk_size);
    result.history.push_back(m);
    if (m.test_accuracy > result.best_test_accuracy || result.best_epoch < 0) {
      result.best_test_accuracy = m.test_accuracy;
      result.best_epoch = m.epoch;
      result.network = net;
    }
    if (on_epoch) on_epoch(m);
    if (cfg.target_test_accuracy > 0.0 && m.test_accuracy >= cfg.target_test_accuracy) break;
  }
  return result;
}

void write_metrics_csv(std::ostream& os, const std::vector<EpochMetrics>& history) {
  os << "epoch,train_acc,test_acc,L,L1,L2,L_tot,hidden_spike_mean\n";
  os << std::setprecision(17);
  for (const EpochMetrics& m : history) {
    os << m.epoch << ',' << m.train_accuracy << ',' << m.test_accuracy << ','
       << m.loss.cross_entropy << ',' << m.loss.reg_l1 << ',' << m.loss.reg_l2 << ','
       << m.loss.total << ',' << m.hidden_spike_mean << '\n';
  }
}

}  // namespace tactile
