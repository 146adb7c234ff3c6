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

// Throughput of the hot paths at the reference network size: 450 hidden
// neurons, threshold 2 input (192 channels, 450 steps of 3 ms).

#include <vector>

#include <benchmark/benchmark.h>

#include "tactile/dataset.hpp"
#include "tactile/event_codec.hpp"
#include "tactile/pipeline.hpp"
#include "tactile/quantize.hpp"
#include "tactile/snn.hpp"
#include "tactile/train.hpp"

namespace {

using namespace tactile;

struct Fixture {
  Dataset ds;
  InputSetup setup;
  HyperParams hp;
  std::vector<SpikeRaster> data;
  NetworkDef net;

  Fixture() {
    SynthConfig sc;
    sc.n_classes = 4;
    sc.n_repetitions = 8;
    ds = synth_dataset(sc);
    hp = *reference_hyperparameters(2.0);
    setup = {2.0, hp.time_bin_size, hp.nb_input_copies};
    data = encode_dataset(ds, setup);
    net = init_network(setup.n_channels(ds.n_taxels()), 450, 4, true, hp, 1);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_Encode(benchmark::State& state) {
  const auto& f = fixture();
  EncoderConfig cfg;
  cfg.threshold = 2.0;
  for (auto _ : state) {
    for (const auto& s : f.ds.samples) benchmark::DoNotOptimize(encode(s, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.ds.samples.size()));
}
BENCHMARK(BM_Encode);

void BM_ForwardBatch(benchmark::State& state) {
  const auto& f = fixture();
  const int b = static_cast<int>(state.range(0));
  std::vector<const SpikeRaster*> in;
  for (int i = 0; i < b; ++i) in.push_back(&f.data[i % f.data.size()]);
  for (auto _ : state) benchmark::DoNotOptimize(forward_batch(f.net, in));
  state.SetItemsProcessed(state.iterations() * b);
}
BENCHMARK(BM_ForwardBatch)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Backward(benchmark::State& state) {
  const auto& f = fixture();
  const int b = static_cast<int>(state.range(0));
  std::vector<const SpikeRaster*> in;
  std::vector<int> labels;
  for (int i = 0; i < b; ++i) {
    in.push_back(&f.data[i % f.data.size()]);
    labels.push_back(in.back()->label);
  }
  TrainConfig cfg = make_train_config(f.hp);
  for (auto _ : state) {
    const BatchTrace tr = forward_batch(f.net, in);
    benchmark::DoNotOptimize(backward(f.net, tr, labels, cfg));
  }
  state.SetItemsProcessed(state.iterations() * b);
}
BENCHMARK(BM_Backward)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_QuantizedForward(benchmark::State& state) {
  const auto& f = fixture();
  const QuantizedNetwork q = quantize_network(f.net);
  for (auto _ : state) benchmark::DoNotOptimize(quantized_forward(q, f.data));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.data.size()));
}
BENCHMARK(BM_QuantizedForward)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
