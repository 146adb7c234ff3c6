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

// Hyperparameter sweeps: a grid over time_bin_size x nb_input_copies per
// encoding threshold, and a seeded random search over the full space.

#ifndef TACTILE_GRID_SEARCH_HPP_
#define TACTILE_GRID_SEARCH_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "tactile/dataset.hpp"
#include "tactile/train.hpp"

namespace tactile {

struct GridSearchConfig {
  std::vector<double> thresholds = {1, 2, 5, 10};
  std::vector<double> bin_sizes_ms = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<int> input_copies = {1, 2, 4, 8};
  bool recurrent = true;
  int n_hidden = 450;
  int n_outputs = 0;  // 0 uses the dataset's class count
  // Epochs, batch size, learning rate, seed and split come from here; the
  // regularisation and surrogate terms come from the per-threshold
  // hyperparameters.
  TrainConfig train;
};

struct GridPoint {
  double threshold = 0.0;
  double time_bin_ms = 0.0;
  int nb_input_copies = 0;
  double best_test_accuracy = 0.0;
  int best_epoch = -1;
  double final_train_accuracy = 0.0;
  bool reference_optimum = false;  // matches the published optimum for this threshold
};

struct GridSearchResult {
  std::vector<GridPoint> points;  // threshold-major, then bin, then copies
  // Index into points of the best entry per threshold, in threshold order.
  std::vector<std::size_t> best;
};

// Base hyperparameters for a threshold: the published set when one exists,
// otherwise the defaults of HyperParams.
HyperParams base_hyperparameters(double threshold);

using GridCallback = std::function<void(const GridPoint&)>;

GridSearchResult grid_search(const Dataset& ds, const GridSearchConfig& cfg,
                             const GridCallback& on_point = {});

void write_grid_csv(std::ostream& os, const GridSearchResult& result);

struct RandomSearchConfig {
  double threshold = 2.0;
  int trials = 10;
  std::uint64_t seed = 0;
  bool recurrent = true;
  int n_hidden = 450;
  int n_outputs = 0;
  TrainConfig train;
};

struct RandomTrial {
  HyperParams params;
  double best_test_accuracy = 0.0;
  int best_epoch = -1;
};

// Samples every hyperparameter independently (log-uniform for scales and
// regularisers, integers for bins and copies) and trains once per trial.
std::vector<RandomTrial> random_search(const Dataset& ds, const RandomSearchConfig& cfg,
                                       const std::function<void(const RandomTrial&)>& on_trial = {});

void write_random_search_csv(std::ostream& os, const std::vector<RandomTrial>& trials);

}  // namespace tactile

#endif  // TACTILE_GRID_SEARCH_HPP_
