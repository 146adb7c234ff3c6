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

// Surrogate-gradient training of LIF networks: spike-count losses,
// backpropagation through time, the Adamax optimizer, and the training and
// grid-search drivers.

#ifndef TACTILE_TRAIN_HPP_
#define TACTILE_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tactile/snn.hpp"

namespace tactile {

// Hyperparameters named as in the experiment config files.
struct HyperParams {
  double scale = 5.0;  // surrogate steepness lambda
  double time_bin_size = 5.0;  // ms
  int nb_input_copies = 2;
  double tau_mem = 60.0;  // ms
  double tau_ratio = 10.0;  // tau_mem / tau_syn
  double fwd_weight_scale = 1.0;
  double weight_scale_factor = 1e-2;
  double reg_neurons = 1e-6;  // mu_1
  double reg_spikes = 4e-3;   // mu_2
};

// Optimised values per encoding threshold (1, 2, 5, 10). Returns nullopt for
// any other threshold.
std::optional<HyperParams> reference_hyperparameters(double threshold);

struct TrainConfig {
  double learning_rate = 0.0015;
  int batch_size = 128;
  int epochs = 300;
  double surrogate_scale = 5.0;
  double reg_spikes = 0.0;   // mu_2, weight of the upper population term
  double reg_neurons = 0.0;  // mu_1, weight of the lower per-neuron term
  double reg_lower_threshold = 1e-3;  // firing rate per step
  double reg_lower_strength = 1.0;
  double reg_upper_threshold = 100.0;  // mean spike count per neuron
  double reg_upper_strength = 1.0;
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
  // Samples per forward/backward chunk inside a batch. Gradients are summed
  // over chunks in a fixed order, so this does not change results beyond
  // floating-point summation order.
  int chunk_size = 32;
  // Stop once test accuracy reaches this value; 0 disables early stopping.
  double target_test_accuracy = 0.0;

  void validate() const;
};

TrainConfig make_train_config(const HyperParams& hp);

struct LossBreakdown {
  double cross_entropy = 0.0;
  double reg_l1 = 0.0;
  double reg_l2 = 0.0;
  double total = 0.0;

  LossBreakdown& operator+=(const LossBreakdown& o);
};

struct GradientSet {
  Eigen::MatrixXd w_in, v_rec, w_out;

  static GradientSet zeros_like(const NetworkDef& net);
  GradientSet& operator+=(const GradientSet& o);
  bool all_finite() const;
};

// d/du [u / (1 + scale |u|)] = 1 / (1 + scale |u|)^2
double surrogate_grad(double u, double scale);

// Mean over rows of -log softmax(counts_row)[label].
double loss_cross_entropy(const Eigen::MatrixXd& counts, std::span<const int> labels);

// Per-neuron lower hinge on firing rate. `hidden_counts` is [N_batch x N]
// spike counts over `n_steps` steps.
double loss_reg_lower(const Eigen::MatrixXd& hidden_counts, int n_steps, double strength,
                      double threshold);

// Squared hinge on the mean population spike count per sample.
double loss_reg_upper(const Eigen::MatrixXd& hidden_counts, double strength,
                      double threshold);

LossBreakdown evaluate_loss(const BatchTrace& trace, std::span<const int> labels,
                            const TrainConfig& cfg, int batch_norm = 0);

// Gradients of the total loss with respect to every weight matrix. The spike
// nonlinearity's derivative is replaced by surrogate_grad(U - threshold) and
// the reset factor (1 - S(t-1)) is held constant. `batch_norm` is the batch
// size used to normalise the losses (defaults to the trace batch) so a batch
// may be processed in chunks and the gradients summed.
GradientSet backward(const NetworkDef& net, const BatchTrace& trace,
                     std::span<const int> labels, const TrainConfig& cfg,
                     int batch_norm = 0, LossBreakdown* loss = nullptr);

class Adamax {
 public:
  explicit Adamax(double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8)
      : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(NetworkDef& net, const GradientSet& grads);
  // Single-tensor update; `slot` identifies the moment buffers.
  void step(Eigen::MatrixXd& weights, const Eigen::MatrixXd& grads, int slot);
  std::int64_t steps() const { return t_; }

 private:
  struct Moments {
    Eigen::MatrixXd m, u;
  };
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<Moments> slots_;
};

// Weights drawn from Normal(0, fwd_weight_scale / sqrt(fan_in)); recurrent
// weights use fwd_weight_scale * weight_scale_factor.
NetworkDef init_network(int n_inputs, int n_hidden, int n_outputs, bool recurrent,
                        const HyperParams& hp, std::uint64_t seed);

struct EpochMetrics {
  int epoch = 0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  LossBreakdown loss;
  double hidden_spike_mean = 0.0;  // mean hidden spikes per neuron per sample
};

struct TrainResult {
  NetworkDef network;  // weights at the epoch with the best test accuracy
  std::vector<EpochMetrics> history;
  int best_epoch = -1;
  double best_test_accuracy = 0.0;
  std::vector<int> train_indices;
  std::vector<int> test_indices;
};

// Seeded stratified split; every class lands in both parts when it has at
// least two samples.
void stratified_split(std::span<const int> labels, double test_fraction, std::uint64_t seed,
                      std::vector<int>& train, std::vector<int>& test);

double accuracy(const NetworkDef& net, std::span<const SpikeRaster> data,
                std::span<const int> indices, int chunk_size = 64);

using EpochCallback = std::function<void(const EpochMetrics&)>;

TrainResult train(const NetworkDef& initial, std::span<const SpikeRaster> data,
                  const TrainConfig& cfg, const EpochCallback& on_epoch = {});

void write_metrics_csv(std::ostream& os, const std::vector<EpochMetrics>& history);

}  // namespace tactile

#endif  // TACTILE_TRAIN_HPP_
