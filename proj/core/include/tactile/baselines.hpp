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

// Linear one-vs-rest baselines: feature extraction, standardisation, PCA,
// hinge-loss training and stratified k-fold cross-validation.

#ifndef TACTILE_BASELINES_HPP_
#define TACTILE_BASELINES_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tactile/dataset.hpp"

namespace tactile {

struct FeatureMatrix {
  Eigen::MatrixXd x;  // [samples x features]
  std::vector<int> labels;

  void validate() const;
};

// Per-taxel temporal mean.
Eigen::VectorXd time_collapse(const FrameSequence& seq);

// Frames flattened frame-major; `n_frames` < 0 keeps every frame, otherwise
// only the first n_frames.
FeatureMatrix raw_features(const Dataset& ds, int n_frames = -1);
FeatureMatrix collapsed_features(const Dataset& ds);
// ON and OFF event counts per taxel (2 * n_taxels columns).
FeatureMatrix event_count_features(const Dataset& ds, double threshold);
// Binned event tensors flattened step-major.
FeatureMatrix event_bin_features(const Dataset& ds, double threshold, double bin_ms);

struct Standardizer {
  Eigen::RowVectorXd mean, scale;  // constant columns get scale 1

  static Standardizer fit(const Eigen::MatrixXd& x);
  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const;
};

struct PcaBasis {
  Eigen::RowVectorXd mean;
  Eigen::MatrixXd components;  // [features x k], columns by descending variance
  Eigen::VectorXd eigenvalues;  // all eigenvalues, descending
  Eigen::VectorXd explained_variance_ratio;  // of the kept components
};

// Eigendecomposition of the sample covariance. Each component is signed so
// its largest-magnitude coordinate is positive. Requires
// 1 <= k <= min(rows - 1, cols).
PcaBasis pca_fit(const Eigen::MatrixXd& x, int k);
Eigen::MatrixXd pca_transform(const Eigen::MatrixXd& x, const PcaBasis& basis);

struct LinearConfig {
  int epochs = 300;
  double learning_rate = 0.1;  // decays as lr / sqrt(1 + epoch)
  double l2 = 1e-3;            // penalty on weights, C ~ 1 / (l2 * n)
  bool standardize = true;
  int pca_components = 0;      // 0 disables PCA
};

struct LinearModel {
  std::vector<int> classes;     // sorted distinct training labels
  Eigen::MatrixXd weights;      // [classes x features after preprocessing]
  Eigen::VectorXd bias;
  std::optional<Standardizer> standardizer;
  std::optional<PcaBasis> pca;

  Eigen::MatrixXd preprocess(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd margins(const Eigen::MatrixXd& x) const;
};

LinearModel linear_fit(const Eigen::MatrixXd& x, std::span<const int> labels,
                       const LinearConfig& cfg = {});
// Argmax margin; ties go to the lowest class.
std::vector<int> linear_predict(const LinearModel& model, const Eigen::MatrixXd& x);

// Seeded stratified fold assignment, one fold id per sample.
std::vector<int> stratified_kfold(std::span<const int> labels, int folds, std::uint64_t seed);

struct CvResult {
  std::vector<double> fold_accuracy;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over folds
};

CvResult cross_validate(const FeatureMatrix& features, const LinearConfig& cfg, int folds,
                        std::uint64_t seed);

struct CurvePoint {
  int n_frames = 0;
  double time_s = 0.0;
  CvResult cv;
};

// Cross-validated accuracy on the first n frames for n = step, 2*step, ...,
// up to every frame (the last point always uses the full sequence).
std::vector<CurvePoint> incremental_frames_curve(const Dataset& ds, const LinearConfig& cfg,
                                                 int folds, std::uint64_t seed, int step = 1);

}  // namespace tactile

#endif  // TACTILE_BASELINES_HPP_
