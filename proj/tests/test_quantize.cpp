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
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tactile/error.hpp"
#include "tactile/quantize.hpp"
#include "tactile/train.hpp"

namespace tactile {
namespace {

QuantParams plain(int d_i, int d_u, std::int64_t theta = 1 << 20) {
  return {d_i, d_u, 1, theta};
}

NetworkDef small_net(bool recurrent, std::uint64_t seed, int ni = 6, int nh = 8, int no = 3) {
  HyperParams hp;
  hp.fwd_weight_scale = 4.0;
  hp.weight_scale_factor = 0.5;
  hp.time_bin_size = 2.0;
  hp.tau_mem = 20.0;
  return init_network(ni, nh, no, recurrent, hp, seed);
}

TEST(Decay, ReferenceValues) {
  EXPECT_EQ(decay_from_tau(60.0, 5.0), 327);
  EXPECT_EQ(decay_from_tau(5.0, 5.0), 2589);
  EXPECT_EQ(decay_from_tau(1e300, 1.0), 0);
  EXPECT_THROW(decay_from_tau(0.0, 1.0), InvalidInput);
  EXPECT_THROW(decay_from_tau(1.0, -1.0), InvalidInput);
}

TEST(Weights, ScaleAndThreshold) {
  const Eigen::MatrixXd w = (Eigen::MatrixXd(1, 3) << 0.5, -0.25, 0.0).finished();
  const QuantizedWeights q = quantize_weights(w, 1.0);
  EXPECT_EQ(q.w_scale, 512);
  EXPECT_EQ(q.threshold, 32768);
  EXPECT_EQ(q.weights(0, 1), -128);
  EXPECT_EQ(q.weights(0, 2), 0);
  EXPECT_EQ(q.weights(0, 0), 254);  // 256 is past the top of the range
  EXPECT_THROW(quantize_weights(Eigen::MatrixXd::Zero(2, 2), 1.0), InvalidInput);
}

TEST(Weights, RoundsToEvenTiesAwayFromZero) {
  EXPECT_EQ(quantize_value(3.0), 4);
  EXPECT_EQ(quantize_value(-3.0), -4);
  EXPECT_EQ(quantize_value(2.9), 2);
  EXPECT_EQ(quantize_value(5.1), 6);
  EXPECT_EQ(quantize_value(-1.0), -2);
  EXPECT_EQ(quantize_value(0.99), 0);
  EXPECT_EQ(quantize_value(-300.0), -256);
}

TEST(Step, SingleInputSpike) {
  LoihiState s = LoihiState::zeros(1);
  const std::vector<std::int64_t> in = {2};
  loihi_step(s, plain(0, 0), in);
  EXPECT_EQ(s.current[0], 128);
  EXPECT_EQ(s.voltage[0], 128);
}

TEST(Step, CurrentDecayTruncates) {
  LoihiState s = LoihiState::zeros(1);
  s.current[0] = 1000;
  const std::vector<std::int64_t> zero = {0};
  loihi_step(s, plain(327, 4096), zero);
  EXPECT_EQ(s.current[0], 920);
  s = LoihiState::zeros(1);
  s.current[0] = -1000;
  loihi_step(s, plain(327, 4096), zero);
  EXPECT_EQ(s.current[0], -920);
}

TEST(Step, FullDecayClearsState) {
  LoihiState s = LoihiState::zeros(2);
  s.current = {5000, -300};
  s.voltage = {100, -7};
  const std::vector<std::int64_t> zero = {0, 0};
  loihi_step(s, plain(4096, 4096), zero);
  EXPECT_EQ(s.current, (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(s.voltage, (std::vector<std::int64_t>{0, 0}));
}

TEST(Step, SpikeResetsAndHoldsOneStep) {
  LoihiState s = LoihiState::zeros(1);
  const QuantParams p = plain(0, 0, 100);
  const std::vector<std::int64_t> in = {2};
  loihi_step(s, p, in);  // U = 128
  EXPECT_EQ(s.spikes[0], 1);
  EXPECT_EQ(s.voltage[0], 0);
  loihi_step(s, p, in);  // held at 0 even though I = 256
  EXPECT_EQ(s.spikes[0], 0);
  EXPECT_EQ(s.voltage[0], 0);
  loihi_step(s, p, in);
  EXPECT_EQ(s.spikes[0], 1);
}

TEST(Step, SaturationIsReported) {
  LoihiState s = LoihiState::zeros(1);
  s.current[0] = std::numeric_limits<std::int32_t>::max() - 10;
  const std::vector<std::int64_t> in = {254};
  EXPECT_THROW(loihi_step(s, plain(0, 0), in), SaturationError);
}

TEST(Network, HiddenScaleCoversRecurrentWeights) {
  NetworkDef net = small_net(true, 3);
  net.v_rec(0, 0) = 10.0;
  const QuantizedNetwork q = quantize_network(net);
  EXPECT_EQ(q.hidden.w_scale, 25);
  EXPECT_EQ(q.v_rec(0, 0), 250);
  EXPECT_EQ(q.output.w_scale, static_cast<int>(256.0 / net.w_out.cwiseAbs().maxCoeff()));
  EXPECT_EQ(q.hidden.delta_voltage, decay_from_tau(20.0, 2.0));
  EXPECT_NO_THROW(q.validate());
}

TEST(Network, ValidateRejectsOddWeights) {
  QuantizedNetwork q = quantize_network(small_net(false, 1));
  q.w_in(0, 0) = 3;
  EXPECT_THROW(q.validate(), InvalidInput);
}

TEST(Forward, ZeroInputIsSilent) {
  const QuantizedNetwork q = quantize_network(small_net(true, 2));
  std::vector<SpikeRaster> xs = {SpikeRaster::from_tensor(BinnedSpikeTensor(30, 6, 1.0, 0))};
  const QuantizedResult r = quantized_forward(q, xs);
  EXPECT_EQ(r.report.synops, 0);
  EXPECT_EQ(r.predictions[0], 0);
}

TEST(Forward, MatchesTallyOracle) {
  std::mt19937_64 rng(4);
  for (bool rec : {false, true}) {
    for (int trial = 0; trial < 5; ++trial) {
      const QuantizedNetwork q = quantize_network(small_net(rec, 10 + trial));
      std::vector<SpikeRaster> xs;
      for (int b = 0; b < 4; ++b) xs.push_back(oracle::random_raster(25, 6, 0.3, 0, rng));
      const QuantizedResult r = quantized_forward(q, xs, 7);
      const oracle::QuantTally ref = oracle::quantized_tally(q, xs, 7);
      EXPECT_EQ(r.predictions, ref.predictions);
      EXPECT_EQ(r.report.input_events, ref.input_events);
      EXPECT_EQ(r.report.hidden_spikes, ref.hidden_spikes);
      EXPECT_EQ(r.report.synops, ref.synops);
      EXPECT_GT(ref.hidden_spikes, 0);
    }
  }
}

TEST(Forward, FeedforwardCountingIdentity) {
  std::mt19937_64 rng(9);
  const QuantizedNetwork q = quantize_network(small_net(false, 8, 6, 8, 28));
  std::vector<SpikeRaster> xs = {oracle::random_raster(30, 6, 0.3, 0, rng)};
  const SynOpReport r = quantized_forward(q, xs).report;
  EXPECT_EQ(r.synops, r.input_events * 8 + r.hidden_spikes * 28);
}

TEST(Forward, RecurrentCostsMoreOnSameInput) {
  std::mt19937_64 rng(10);
  const NetworkDef rec = small_net(true, 5);
  NetworkDef ff = rec;
  ff.recurrent = false;
  ff.v_rec.resize(0, 0);
  std::vector<SpikeRaster> xs;
  for (int b = 0; b < 3; ++b) xs.push_back(oracle::random_raster(30, 6, 0.3, 0, rng));
  const SynOpReport a = quantized_forward(quantize_network(rec), xs).report;
  const SynOpReport b = quantized_forward(quantize_network(ff), xs).report;
  EXPECT_EQ(a.input_events, b.input_events);
  EXPECT_GT(a.synops, b.synops);
}

TEST(Forward, BlankTailDoesNotVote) {
  std::mt19937_64 rng(3);
  const QuantizedNetwork q = quantize_network(small_net(true, 6));
  std::vector<SpikeRaster> xs = {oracle::random_raster(20, 6, 0.4, 0, rng)};
  const QuantizedResult a = quantized_forward(q, xs, 0), b = quantized_forward(q, xs, 100);
  EXPECT_EQ(a.output_counts, b.output_counts);
  EXPECT_GE(b.report.synops, a.report.synops);
}

TEST(Forward, RejectsChannelMismatch) {
  std::mt19937_64 rng(3);
  const QuantizedNetwork q = quantize_network(small_net(true, 6));
  std::vector<SpikeRaster> xs = {oracle::random_raster(5, 4, 0.4, 0, rng)};
  EXPECT_THROW(quantized_forward(q, xs), InvalidInput);
}

}  // namespace
}  // namespace tactile
