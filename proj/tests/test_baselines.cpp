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
#include <random>
#include <set>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "tactile/baselines.hpp"
#include "tactile/dataset.hpp"
#include "tactile/error.hpp"

namespace tactile {
namespace {

FeatureMatrix blobs(int per_class, double gap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  FeatureMatrix f;
  f.x.resize(3 * per_class, 4);
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < per_class; ++r) {
      for (int j = 0; j < 4; ++j) f.x(c * per_class + r, j) = n(rng) + (j == c ? gap : 0.0);
      f.labels.push_back(c);
    }
  }
  return f;
}

TEST(Pca, FullRankReconstructsCenteredInput) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd x(10, 5);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
  const PcaBasis b = pca_fit(x, 5);
  const Eigen::MatrixXd z = pca_transform(x, b);
  const Eigen::MatrixXd back = z * b.components.transpose();
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  EXPECT_LT((back - centered).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(b.explained_variance_ratio.sum(), 1.0, 1e-12);
}

TEST(Pca, ComponentsAreOrthonormalAndSorted) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd x(30, 6);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < 6; ++j) x(i, j) = n(rng) * (j + 1);
  const PcaBasis b = pca_fit(x, 3);
  const Eigen::MatrixXd g = b.components.transpose() * b.components;
  EXPECT_LT((g - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
  for (Eigen::Index i = 1; i < b.eigenvalues.size(); ++i)
    EXPECT_GE(b.eigenvalues(i - 1), b.eigenvalues(i));
  // The projected variance equals the eigenvalue.
  const Eigen::MatrixXd z = pca_transform(x, b);
  for (int k = 0; k < 3; ++k) {
    const double var = (z.col(k).array() - z.col(k).mean()).square().sum() / (x.rows() - 1);
    EXPECT_NEAR(var, b.eigenvalues(k), 1e-9 * b.eigenvalues(0));
  }
  EXPECT_THROW(pca_fit(x, 0), InvalidInput);
  EXPECT_THROW(pca_fit(x, 7), InvalidInput);
}

TEST(Pca, WideInputMatchesCovarianceRoute) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd x(8, 40);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = n(rng) * (1.0 + 0.1 * j);
  const PcaBasis b = pca_fit(x, 4);
  ASSERT_EQ(b.components.rows(), 40);
  ASSERT_EQ(b.eigenvalues.size(), 40);
  const Eigen::MatrixXd g = b.components.transpose() * b.components;
  EXPECT_LT((g - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);

  const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.transpose() * c / 7.0);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(b.eigenvalues(k), es.eigenvalues()(39 - k), 1e-9);
    EXPECT_NEAR(std::abs(b.components.col(k).dot(es.eigenvectors().col(39 - k))), 1.0, 1e-9);
  }
  EXPECT_NEAR(b.eigenvalues.tail(32).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  EXPECT_THROW(pca_fit(x, 8), InvalidInput);
}

TEST(Standardizer, UnitVarianceAndConstantColumns) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 5, 2, 5, 3, 5, 4, 5;
  const Standardizer s = Standardizer::fit(x);
  const Eigen::MatrixXd z = s.transform(x);
  EXPECT_NEAR(z.col(0).mean(), 0.0, 1e-15);
  EXPECT_NEAR(z.col(0).squaredNorm() / 4, 1.0, 1e-12);
  EXPECT_TRUE(z.col(1).isZero());
}

TEST(Linear, SeparableBlobsCrossValidatePerfectly) {
  const FeatureMatrix f = blobs(20, 12.0, 3);
  const CvResult r = cross_validate(f, LinearConfig{}, 5, 0);
  EXPECT_EQ(r.fold_accuracy.size(), 5u);
  EXPECT_EQ(r.mean, 1.0);
  EXPECT_EQ(r.std, 0.0);
}

TEST(Linear, PredictsTrainingLabelsNotIndices) {
  FeatureMatrix f = blobs(10, 12.0, 4);
  for (int& y : f.labels) y = 10 + 5 * y;
  const LinearModel m = linear_fit(f.x, f.labels);
  EXPECT_EQ(m.classes, (std::vector<int>{10, 15, 20}));
  EXPECT_EQ(linear_predict(m, f.x), f.labels);
}

TEST(Kfold, StratifiedAndSeeded) {
  std::vector<int> labels;
  for (int c = 0; c < 4; ++c)
    for (int r = 0; r < 10; ++r) labels.push_back(c);
  const auto folds = stratified_kfold(labels, 5, 7);
  EXPECT_EQ(folds, stratified_kfold(labels, 5, 7));
  for (int k = 0; k < 5; ++k) {
    std::vector<int> per(4, 0);
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (folds[i] == k) ++per[labels[i]];
    for (int n : per) EXPECT_EQ(n, 2);
  }
  EXPECT_THROW(stratified_kfold(labels, 1, 0), InvalidInput);
}

TEST(Features, Shapes) {
  SynthConfig sc;
  sc.n_classes = 2;
  sc.n_repetitions = 4;
  const Dataset ds = synth_dataset(sc);
  EXPECT_EQ(raw_features(ds).x.cols(), 12 * 54);
  EXPECT_EQ(raw_features(ds, 10).x.cols(), 12 * 10);
  EXPECT_EQ(collapsed_features(ds).x.cols(), 12);
  EXPECT_EQ(event_count_features(ds, 1.0).x.cols(), 24);
  EXPECT_EQ(event_bin_features(ds, 1.0, 5.0).x.cols(), 270 * 24);
  const Eigen::VectorXd m = time_collapse(ds.samples[0]);
  EXPECT_NEAR(m(3), ds.samples[0].taxel_values.row(3).mean(), 1e-12);
}

TEST(Features, DisjointTaxelClassesSeparate) {
  SynthConfig sc;
  sc.n_classes = 2;
  sc.n_repetitions = 10;
  sc.templates = {{1, 2}, {5, 6}};
  const Dataset ds = synth_dataset(sc);
  LinearConfig lc;
  EXPECT_EQ(cross_validate(collapsed_features(ds), lc, 5, 0).mean, 1.0);
}

TEST(Curve, EndsAtFullLength) {
  SynthConfig sc;
  sc.n_classes = 3;
  sc.n_repetitions = 6;
  const Dataset ds = synth_dataset(sc);
  LinearConfig lc;
  lc.epochs = 50;
  const auto curve = incremental_frames_curve(ds, lc, 3, 0, 20);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(curve[0].n_frames, 20);
  EXPECT_EQ(curve.back().n_frames, 54);
  EXPECT_NEAR(curve.back().time_s, 1.35, 1e-12);
}

}  // namespace
}  // namespace tactile
