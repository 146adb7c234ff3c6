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

#include "tactile/grid_search.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "tactile/error.hpp"
#include "tactile/pipeline.hpp"

namespace tactile {
namespace {

struct RunOutcome {
  double best_test_accuracy;
  int best_epoch;
  double final_train_accuracy;
};

RunOutcome train_once(const Dataset& ds, double threshold, const HyperParams& hp, bool recurrent,
                      int n_hidden, int n_outputs, TrainConfig tc) {
  InputSetup in;
  in.threshold = threshold;
  in.time_bin_ms = hp.time_bin_size;
  in.nb_input_copies = hp.nb_input_copies;
  const std::vector<SpikeRaster> data = encode_dataset(ds, in);
  const int outputs = n_outputs > 0 ? n_outputs : ds.n_classes();
  const NetworkDef net =
      init_network(in.n_channels(ds.n_taxels()), n_hidden, outputs, recurrent, hp, tc.seed);
  tc.surrogate_scale = hp.scale;
  tc.reg_neurons = hp.reg_neurons;
  tc.reg_spikes = hp.reg_spikes;
  const TrainResult r = train(net, data, tc);
  return {r.best_test_accuracy, r.best_epoch,
          r.history.empty() ? 0.0 : r.history.back().train_accuracy};
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace

HyperParams base_hyperparameters(double threshold) {
  return reference_hyperparameters(threshold).value_or(HyperParams{});
}

GridSearchResult grid_search(const Dataset& ds, const GridSearchConfig& cfg,
                             const GridCallback& on_point) {
  if (cfg.thresholds.empty() || cfg.bin_sizes_ms.empty() || cfg.input_copies.empty()) {
    throw InvalidInput("grid_search: empty grid");
  }
  GridSearchResult res;
  for (double th : cfg.thresholds) {
    const auto ref = reference_hyperparameters(th);
    std::size_t best = res.points.size();
    for (double bin : cfg.bin_sizes_ms) {
      for (int copies : cfg.input_copies) {
        HyperParams hp = base_hyperparameters(th);
        hp.time_bin_size = bin;
        hp.nb_input_copies = copies;
        const RunOutcome o =
            train_once(ds, th, hp, cfg.recurrent, cfg.n_hidden, cfg.n_outputs, cfg.train);
        GridPoint p;
        p.threshold = th;
        p.time_bin_ms = bin;
        p.nb_input_copies = copies;
        p.best_test_accuracy = o.best_test_accuracy;
        p.best_epoch = o.best_epoch;
        p.final_train_accuracy = o.final_train_accuracy;
        p.reference_optimum = ref && ref->time_bin_size == bin && ref->nb_input_copies == copies;
        res.points.push_back(p);
        if (p.best_test_accuracy > res.points[best].best_test_accuracy) {
          best = res.points.size() - 1;
        }
        if (on_point) on_point(p);
      }
    }
    res.best.push_back(best);
  }
  return res;
}

void write_grid_csv(std::ostream& os, const GridSearchResult& r) {
  os << "threshold,time_bin_size,nb_input_copies,best_test_acc,best_epoch,final_train_acc,"
        "reference_optimum,best_for_threshold\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    const GridPoint& p = r.points[i];
    bool best = false;
    for (std::size_t b : r.best) best = best || b == i;
    os << p.threshold << ',' << p.time_bin_ms << ',' << p.nb_input_copies << ','
       << p.best_test_accuracy << ',' << p.best_epoch << ',' << p.final_train_accuracy << ','
       << (p.reference_optimum ? 1 : 0) << ',' << (best ? 1 : 0) << '\n';
  }
}

std::vector<RandomTrial> random_search(const Dataset& ds, const RandomSearchConfig& cfg,
                                       const std::function<void(const RandomTrial&)>& on_trial) {
  if (cfg.trials < 1) throw InvalidInput("random_search: trials must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> bins(1, 10), copies(1, 10);
  std::bernoulli_distribution coin(0.5);
  std::vector<RandomTrial> out;
  for (int i = 0; i < cfg.trials; ++i) {
    RandomTrial t;
    HyperParams& hp = t.params;
    hp.scale = log_uniform(rng, 1.0, 20.0);
    hp.time_bin_size = bins(rng);
    hp.nb_input_copies = copies(rng);
    hp.tau_mem = log_uniform(rng, 10.0, 100.0);
    hp.tau_ratio = log_uniform(rng, 2.0, 20.0);
    hp.fwd_weight_scale = log_uniform(rng, 0.5, 5.0);
    hp.weight_scale_factor = log_uniform(rng, 1e-3, 1e-1);
    hp.reg_neurons = coin(rng) ? 0.0 : log_uniform(rng, 1e-7, 1e-5);
    hp.reg_spikes = log_uniform(rng, 1e-4, 1e-2);
    TrainConfig tc = cfg.train;
    tc.seed = cfg.train.seed + static_cast<std::uint64_t>(i);
    const RunOutcome o =
        train_once(ds, cfg.threshold, hp, cfg.recurrent, cfg.n_hidden, cfg.n_outputs, tc);
    t.best_test_accuracy = o.best_test_accuracy;
    t.best_epoch = o.best_epoch;
    out.push_back(t);
    if (on_trial) on_trial(t);
  }
  return out;
}

void write_random_search_csv(std::ostream& os, const std::vector<RandomTrial>& trials) {
  os << "trial,scale,time_bin_size,nb_input_copies,tau_mem,tau_ratio,fwd_weight_scale,"
        "weight_scale_factor,reg_neurons,reg_spikes,best_test_acc,best_epoch\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const HyperParams& h = trials[i].params;
    os << i << ',' << h.scale << ',' << h.time_bin_size << ',' << h.nb_input_copies << ','
       << h.tau_mem << ',' << h.tau_ratio << ',' << h.fwd_weight_scale << ','
       << h.weight_scale_factor << ',' << h.reg_neurons << ',' << h.reg_spikes << ','
       << trials[i].best_test_accuracy << ',' << trials[i].best_epoch << '\n';
  }
}

}  // namespace tactile
