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
// Randomised invariant checks. Every trial is seeded so failures replay.

#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tactile/dataset.hpp"
#include "tactile/event_codec.hpp"
#include "tactile/quantize.hpp"
#include "tactile/snn.hpp"
#include "tactile/train.hpp"

namespace tactile {
namespace {

constexpr int kTrials = 200;

// Random walk from rest, integer valued within [0, 255].
FrameSequence random_sequence(std::mt19937_64& rng, int taxels, int frames, bool return_home) {
  std::uniform_int_distribution<int> step(-25, 25);
  FrameSequence f;
  f.taxel_values = Eigen::MatrixXd::Zero(taxels, frames);
  for (int i = 0; i < taxels; ++i) {
    for (int k = 1; k < frames; ++k) {
      f.taxel_values(i, k) = std::clamp(f.taxel_values(i, k - 1) + step(rng), 0.0, 255.0);
    }
    if (return_home) f.taxel_values(i, frames - 1) = 0.0;
  }
  return f;
}

EncoderConfig theta(double th) {
  EncoderConfig c;
  c.threshold = th;
  return c;
}

TEST(EncoderProperty, RoundTripErrorBelowThreshold) {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < kTrials; ++trial) {
    const FrameSequence f = random_sequence(rng, 4, 30, false);
    for (double th : {1.0, 2.0, 5.0, 10.0}) {
      const Eigen::MatrixXd r = reconstruct(encode(f, theta(th)), theta(th), 30, 40.0);
      EXPECT_LT((r - f.taxel_values).cwiseAbs().maxCoeff(), th) << "trial " << trial;
    }
  }
}

TEST(EncoderProperty, IntegerSignalsAreLosslessAtUnitThreshold) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < kTrials; ++trial) {
    const FrameSequence f = random_sequence(rng, 3, 25, false);
    const Eigen::MatrixXd r = reconstruct(encode(f, theta(1)), theta(1), 25, 40.0);
    EXPECT_EQ(r, f.taxel_values);
  }
}

TEST(EncoderProperty, PolarityBalanceWhenSignalReturns) {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < kTrials; ++trial) {
    const FrameSequence f = random_sequence(rng, 5, 20, true);
    for (double th : {1.0, 3.0, 7.0}) {
      const EventStream s = encode(f, theta(th));
      std::vector<int> balance(5, 0);
      for (const Event& e : s.events) balance[e.taxel] += e.polarity == Polarity::kOn ? 1 : -1;
      for (int b : balance) EXPECT_LE(std::abs(b), 1);
    }
  }
}

TEST(EncoderProperty, CoarserThresholdsCompressMoreAndReconstructWorse) {
  SynthConfig sc;
  sc.n_classes = 6;
  sc.n_repetitions = 4;
  const Dataset ds = synth_dataset(sc);
  const std::vector<double> th = {1, 2, 5, 10}, bins = {5};
  const auto reps = analyze_encoding(ds.samples, th, bins);
  for (std::size_t i = 1; i < reps.size(); ++i) {
    EXPECT_LE(reps[i].mean_events_per_sample, reps[i - 1].mean_events_per_sample);
    EXPECT_GE(reps[i].compression_ratio, reps[i - 1].compression_ratio);
    EXPECT_GE(reps[i].reconstruction_mse, reps[i - 1].reconstruction_mse);
  }
}

TEST(BinningProperty, CollapseConservation) {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> bin_ms(0.5, 10.0);
  for (int trial = 0; trial < kTrials; ++trial) {
    const FrameSequence f = random_sequence(rng, 4, 20, false);
    const EventStream s = encode(f, theta(2));
    const double bin = bin_ms(rng);
    const BinnedSpikeTensor t = bin_events(s, {bin});
    // Set bits are exactly the distinct (bin, channel) pairs of the kept events.
    std::set<std::pair<int, int>> cells;
    for (const Event& e : s.events) {
      const int step = static_cast<int>(std::floor(e.time_s * 1000.0 / bin));
      if (step < t.n_steps()) cells.insert({step, e.channel()});
    }
    EXPECT_EQ(t.count(), static_cast<std::int64_t>(cells.size()));
    EXPECT_LE(t.count(), static_cast<std::int64_t>(s.events.size()));
    for (int k : {1, 3}) EXPECT_EQ(input_copies(t, k).count(), k * t.count());
  }
}

TEST(LifProperty, ThresholdScaleEquivariance) {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < kTrials; ++trial) {
    HyperParams hp;
    hp.fwd_weight_scale = 3.0;
    hp.weight_scale_factor = 0.4;
    const NetworkDef net = init_network(5, 6, 3, true, hp, 200 + trial);
    // Powers of two keep the scaled arithmetic exact.
    const double c = std::exp2(std::round(std::log2(scale(rng))));
    NetworkDef scaled = net;
    scaled.w_in *= c;
    scaled.v_rec *= c;
    scaled.lif_hidden.threshold *= c;
    // The output layer sees the same hidden spikes, so only its own scale matters.
    scaled.w_out *= c;
    scaled.lif_out.threshold *= c;
    const SpikeRaster x = oracle::random_raster(30, 5, 0.3, 0, rng);
    const ForwardTrace a = forward(net, x), b = forward(scaled, x);
    EXPECT_EQ(a.hidden_spikes, b.hidden_spikes);
    EXPECT_EQ(a.output_spikes, b.output_spikes);
  }
}

TEST(LifProperty, SilenceWithoutInput) {
  for (int trial = 0; trial < 10; ++trial) {
    HyperParams hp;
    const NetworkDef net = init_network(5, 6, 3, trial % 2 == 0, hp, 300 + trial);
    const ForwardTrace tr =
        forward(net, SpikeRaster::from_tensor(BinnedSpikeTensor(50, 5, 1.0, 0)));
    EXPECT_TRUE(tr.hidden_spikes.isZero());
    EXPECT_TRUE(tr.output_spikes.isZero());
    EXPECT_TRUE(tr.hidden_voltage.isZero());
  }
}

TEST(LifProperty, ResetAndDecayIdentities) {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u(-2.0, 3.0);
  for (int trial = 0; trial < kTrials; ++trial) {
    const LifParams p = LifParams::from_time_constants(20.0 + trial, 4.0, 1.0 + trial % 5);
    LayerState s = LayerState::zeros(6);
    for (int t = 0; t < 30; ++t) {
      Eigen::VectorXd in(6);
      for (int i = 0; i < 6; ++i) in(i) = u(rng);
      const LayerState next = lif_step(s, p, in);
      for (int i = 0; i < 6; ++i) {
        EXPECT_DOUBLE_EQ(next.current(i), p.alpha * s.current(i) + in(i));
        if (s.spikes(i) == 1.0) {
          EXPECT_EQ(next.voltage(i), 0.0);
        } else {
          EXPECT_DOUBLE_EQ(next.voltage(i), p.beta * s.voltage(i) + next.current(i));
        }
        EXPECT_EQ(next.spikes(i), next.voltage(i) >= p.threshold ? 1.0 : 0.0);
      }
      s = next;
    }
  }
}

TEST(LifProperty, ForwardIsDeterministic) {
  std::mt19937_64 rng(106);
  HyperParams hp;
  hp.fwd_weight_scale = 3.0;
  const NetworkDef net = init_network(8, 10, 4, true, hp, 1);
  const SpikeRaster x = oracle::random_raster(80, 8, 0.2, 0, rng);
  const ForwardTrace a = forward(net, x), b = forward(net, x);
  EXPECT_EQ(a.hidden_voltage, b.hidden_voltage);
  EXPECT_EQ(a.output_counts, b.output_counts);
}

TEST(GradientProperty, RandomTinyNetsMatchFiniteDifferences) {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> gain(1.0, 4.0), lam(0.5, 10.0);
  double worst = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const int t_n = 3 + trial % 4;
    HyperParams hp;
    hp.fwd_weight_scale = gain(rng);
    hp.tau_mem = 5.0 + trial;
    hp.tau_ratio = 2.0 + trial % 3;
    NetworkDef net = init_network(2 + trial % 2, 2 + trial % 3, 2, trial % 3 != 0, hp, trial);
    if (net.recurrent) net.v_rec = Eigen::MatrixXd::Random(net.n_hidden(), net.n_hidden());
    std::vector<SpikeRaster> xs = {oracle::random_raster(t_n, net.n_inputs(), 0.5, 0, rng),
                                   oracle::random_raster(t_n, net.n_inputs(), 0.5, 1, rng)};
    const std::vector<int> y = {0, 1};
    TrainConfig cfg;
    cfg.surrogate_scale = lam(rng);
    cfg.reg_neurons = 0.2;
    cfg.reg_spikes = 0.2;
    cfg.reg_lower_threshold = 0.01;
    cfg.reg_upper_threshold = 0.05;
    oracle::SmoothLoss loss(t_n, cfg.surrogate_scale);
    loss(net, xs, y, cfg, true);
    std::vector<const SpikeRaster*> ptr = {&xs[0], &xs[1]};
    ForwardOptions fo;
    fo.spike = SpikeFunction::kFastSigmoid;
    fo.surrogate_scale = cfg.surrogate_scale;
    const GradientSet g = backward(net, forward_batch(net, ptr, fo), y, cfg);
    // Five-point stencil with a wide step keeps round-off near 1e-11, and the
    // error is taken norm-wise per matrix since single entries can be ~1e-7.
    auto check = [&](Eigen::MatrixXd NetworkDef::*w, const Eigen::MatrixXd& grad) {
      Eigen::MatrixXd fd(grad.rows(), grad.cols());
      constexpr double h = 1e-5;
      for (Eigen::Index i = 0; i < (net.*w).size(); ++i) {
        auto at = [&](double d) {
          NetworkDef q = net;
          (q.*w).data()[i] += d;
          return loss(q, xs, y, cfg, false);
        };
        fd.data()[i] = (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
      }
      const double scale = std::max(fd.norm(), grad.norm());
      if (scale > 0) worst = std::max(worst, (fd - grad).norm() / scale);
    };
    check(&NetworkDef::w_in, g.w_in);
    check(&NetworkDef::w_out, g.w_out);
    if (net.recurrent) check(&NetworkDef::v_rec, g.v_rec);
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(LossProperty, TotalIsWeightedSumOfTerms) {
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> mu(0.0, 0.1);
  for (int trial = 0; trial < kTrials; ++trial) {
    HyperParams hp;
    hp.fwd_weight_scale = 3.0;
    const NetworkDef net = init_network(6, 8, 3, true, hp, 400 + trial);
    std::vector<SpikeRaster> xs;
    std::vector<int> y;
    for (int b = 0; b < 3; ++b) {
      xs.push_back(oracle::random_raster(20, 6, 0.3, b, rng));
      y.push_back(b);
    }
    std::vector<const SpikeRaster*> ptr;
    for (const auto& x : xs) ptr.push_back(&x);
    TrainConfig cfg;
    cfg.reg_neurons = mu(rng);
    cfg.reg_spikes = mu(rng);
    cfg.reg_upper_threshold = 0.5;
    const BatchTrace tr = forward_batch(net, ptr);
    const LossBreakdown l = evaluate_loss(tr, y, cfg);
    EXPECT_NEAR(l.total, l.cross_entropy + cfg.reg_neurons * l.reg_l1 + cfg.reg_spikes * l.reg_l2,
                1e-12);
    EXPECT_NEAR(l.cross_entropy, loss_cross_entropy(tr.output_counts, y), 1e-12);
    LossBreakdown from_backward;
    backward(net, tr, y, cfg, 0, &from_backward);
    EXPECT_NEAR(from_backward.total, l.total, 1e-12);
  }
}

TEST(QuantProperty, WeightErrorBoundedByOneStep) {
  std::mt19937_64 rng(109);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> spread(1e-3, 50.0);
  for (int trial = 0; trial < kTrials; ++trial) {
    Eigen::MatrixXd w(12, 9);
    const double s = spread(rng);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = s * n(rng);
    const QuantizedWeights q = quantize_weights(w, 1.0);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const std::int32_t v = q.weights.data()[i];
      EXPECT_EQ(v % 2, 0);
      // The top code 254 saturates; everything below is within one step.
      if (v == kWeightMax) continue;
      EXPECT_LE(std::abs(static_cast<double>(v) / q.w_scale - w.data()[i]), 1.0 / q.w_scale);
    }
  }
}

TEST(QuantProperty, IntegerInferenceIsBitExact) {
  std::mt19937_64 rng(110);
  for (int trial = 0; trial < 10; ++trial) {
    HyperParams hp;
    hp.fwd_weight_scale = 4.0;
    hp.weight_scale_factor = 0.3;
    const QuantizedNetwork q = quantize_network(init_network(8, 12, 4, true, hp, 500 + trial));
    std::vector<SpikeRaster> xs;
    for (int b = 0; b < 3; ++b) xs.push_back(oracle::random_raster(40, 8, 0.25, 0, rng));
    const QuantizedResult a = quantized_forward(q, xs), b = quantized_forward(q, xs);
    EXPECT_EQ(a.predictions, b.predictions);
    EXPECT_EQ(a.output_counts, b.output_counts);
    EXPECT_EQ(a.report, b.report);
    const oracle::QuantTally ref = oracle::quantized_tally(q, xs, 100);
    EXPECT_EQ(a.report.synops, ref.synops);
    EXPECT_EQ(a.predictions, ref.predictions);
  }
}

}  // namespace
}  // namespace tactile
