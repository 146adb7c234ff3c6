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

// End-to-end experiments: encode, bin, train over several seeds, quantize,
// evaluate, and write reports. Also time-to-classify and the JSON report
// writers shared with the command-line tool.

#ifndef TACTILE_EXPERIMENT_HPP_
#define TACTILE_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tactile/baselines.hpp"
#include "tactile/config.hpp"
#include "tactile/dataset.hpp"
#include "tactile/event_codec.hpp"
#include "tactile/quantize.hpp"
#include "tactile/train.hpp"

namespace tactile {

inline constexpr int kReportSchemaVersion = 1;

struct TtcPoint {
  double fraction = 0.0;
  int n_steps = 0;
  double accuracy = 0.0;
};

struct TtcResult {
  double ttc = 1.0;  // smallest probed fraction within tolerance of full accuracy
  double full_accuracy = 0.0;
  std::vector<TtcPoint> curve;
};

// Accuracy on prefixes of round(p * T) steps (at least one) for
// p = step, 2 * step, ..., 1. `tolerance` is an absolute accuracy gap.
TtcResult compute_ttc(const NetworkDef& net, std::span<const SpikeRaster> data,
                      std::span<const int> indices, double step = 0.05, double tolerance = 0.01);

struct ExperimentConfig {
  std::string dataset = "synthetic";  // a dataset file, or "synthetic"
  SynthConfig synth;
  std::vector<double> thresholds = {2.0};
  // Keys from HyperParams set in the config file override the per-threshold
  // published values for every threshold.
  std::vector<std::pair<std::string, double>> hyper_overrides;
  bool recurrent = true;
  int n_hidden = 450;
  int n_outputs = 0;  // 0 uses the dataset's class count
  TrainConfig train;
  int n_seeds = 1;
  std::uint64_t seed = 0;
  bool quantize = true;
  int blank_steps = 100;
  double ttc_step = 0.05;
  double ttc_tolerance = 0.01;
  bool analyze_encoding = true;
  std::string output_dir;  // empty writes nothing
  bool dry_run = false;

  void validate() const;
  HyperParams hyperparameters(double threshold) const;
};

// Every key accepted in an experiment config file.
const std::set<std::string>& experiment_config_keys();
ExperimentConfig experiment_config_from(const Config& c);
// Key-value snapshot of every setting, for reports.
std::vector<std::pair<std::string, std::string>> config_snapshot(const ExperimentConfig& cfg);

struct ThresholdResult {
  double threshold = 0.0;
  HyperParams hyper;
  std::vector<double> float_accuracy;      // best test accuracy per seed
  std::vector<double> quantized_accuracy;  // per seed, when quantizing
  double float_mean = 0.0, float_std = 0.0;
  double quantized_mean = 0.0, quantized_std = 0.0;
  TtcResult ttc;        // first seed
  SynOpReport synops;   // first seed, test split
  std::vector<EpochMetrics> history;  // first seed
  bool has_encoding = false;
  EncodingReport encoding;
};

struct ExperimentResult {
  int schema_version = kReportSchemaVersion;
  bool dry_run = false;
  std::string dataset_source;
  std::uint32_t dataset_checksum = 0;
  int n_samples = 0;
  int n_classes = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<ThresholdResult> thresholds;
};

// Runs the pipeline. Errors are rethrown as StageError naming the stage
// (config, data, encode, train, quantize, evaluate, report).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Mean and population standard deviation.
void mean_std(std::span<const double> v, double& mean, double& std);

// JSON writers. Every float is written with 17 significant digits.
std::string experiment_json(const ExperimentResult& r);
std::string encoding_json(std::span<const EncodingReport> reports);
std::string synops_json(const SynOpReport& r, double accuracy, int n_classes);
std::string ttc_json(const TtcResult& r);
std::string cv_json(const std::string& mode, const CvResult& r);

void write_ttc_csv(std::ostream& os, const TtcResult& r);
void write_encoding_csv(std::ostream& os, std::span<const EncodingReport> reports);
void write_curve_csv(std::ostream& os, std::span<const CurvePoint> curve);

}  // namespace tactile

#endif  // TACTILE_EXPERIMENT_HPP_
