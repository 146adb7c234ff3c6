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

#include "tactile/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <Eigen/Eigenvalues>

#include "tactile/error.hpp"

namespace tactile {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void require_samples(const Dataset& ds) {
  if (ds.samples.empty()) throw InvalidInput("dataset has no samples");
}

MatrixXd take_rows(const MatrixXd& x, std::span<const int> idx) {
  MatrixXd out(static_cast<Eigen::Index>(idx.size()), x.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(i) = x.row(idx[i]);
  return out;
}

double population_std(const std::vector<double>& v, double mean) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double a : v) s += (a - mean) * (a - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

void FeatureMatrix::validate() const {
  if (x.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw InvalidInput("feature rows do not match label count");
  }
  if (!x.allFinite()) throw InvalidInput("features contain non-finite values");
}

VectorXd time_collapse(const FrameSequence& seq) {
  if (seq.n_frames() == 0) return VectorXd::Zero(seq.n_taxels());
  return seq.taxel_values.rowwise().mean();
}

FeatureMatrix raw_features(const Dataset& ds, int n_frames) {
  require_samples(ds);
  const int nt = ds.n_taxels();
  int nf = ds.samples.front().n_frames();
  for (const auto& s : ds.samples) nf = std::min(nf, s.n_frames());
  if (n_frames >= 0) {
    if (n_frames < 1 || n_frames > nf) throw InvalidInput("frame prefix out of range");
    nf = n_frames;
  }
  FeatureMatrix f;
  f.x.resize(static_cast<Eigen::Index>(ds.samples.size()), static_cast<Eigen::Index>(nf) * nt);
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& v = ds.samples[i].taxel_values;
    // Column-major [taxels x frames] is already frame-major when flattened.
    f.x.row(i) = Eigen::Map<const Eigen::RowVectorXd>(v.data(), static_cast<Eigen::Index>(nf) * nt);
    f.labels.push_back(ds.samples[i].label);
  }
  return f;
}

FeatureMatrix collapsed_features(const Dataset& ds) {
  require_samples(ds);
  FeatureMatrix f;
  f.x.resize(static_cast<Eigen::Index>(ds.samples.size()), ds.n_taxels());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    f.x.row(i) = time_collapse(ds.samples[i]).transpose();
    f.labels.push_back(ds.samples[i].label);
  }
  return f;
}

FeatureMatrix event_count_features(const Dataset& ds, double threshold) {
  require_samples(ds);
  EncoderConfig enc;
  enc.threshold = threshold;
  FeatureMatrix f;
  f.x = MatrixXd::Zero(static_cast<Eigen::Index>(ds.samples.size()), 2 * ds.n_taxels());
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    for (const Event& e : encode(ds.samples[i], enc).events) f.x(i, e.channel()) += 1.0;
    f.labels.push_back(ds.samples[i].label);
  }
  return f;
}

FeatureMatrix event_bin_features(const Dataset& ds, double threshold, double bin_ms) {
  require_samples(ds);
  EncoderConfig enc;
  enc.threshold = threshold;
  FeatureMatrix f;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const BinnedSpikeTensor t = bin_events(encode(ds.samples[i], enc), {bin_ms});
    const Eigen::Index n = static_cast<Eigen::Index>(t.n_steps()) * t.n_channels();
    if (i == 0) f.x.resize(static_cast<Eigen::Index>(ds.samples.size()), n);
    if (n != f.x.cols()) throw InvalidInput("samples bin to different lengths");
    // Row-major bits flatten step-major.
    f.x.row(i) = Eigen::Map<const Eigen::Matrix<std::uint8_t, 1, Eigen::Dynamic>>(
                     t.bits().data(), n)
                     .cast<double>();
    f.labels.push_back(ds.samples[i].label);
  }
  return f;
}

Standardizer Standardizer::fit(const MatrixXd& x) {
  if (x.rows() == 0) throw InvalidInput("cannot standardise an empty matrix");
  Standardizer s;
  s.mean = x.colwise().mean();
  const MatrixXd c = x.rowwise() - s.mean;
  s.scale = (c.array().square().colwise().sum() / static_cast<double>(x.rows())).sqrt();
  for (Eigen::Index j = 0; j < s.scale.size(); ++j) {
    if (!(s.scale(j) > 1e-12)) s.scale(j) = 1.0;
  }
  return s;
}

MatrixXd Standardizer::transform(const MatrixXd& x) const {
  if (x.cols() != mean.size()) throw InvalidInput("standardiser feature count mismatch");
  return ((x.rowwise() - mean).array().rowwise() / scale.array()).matrix();
}

PcaBasis pca_fit(const MatrixXd& x, int k) {
  const Eigen::Index limit = std::min<Eigen::Index>(x.rows() - 1, x.cols());
  if (k < 1 || k > limit) {
    throw InvalidInput("pca_fit: k=" + std::to_string(k) + " outside [1, " +
                       std::to_string(limit) + "]");
  }
  PcaBasis b;
  b.mean = x.colwise().mean();
  const MatrixXd c = x.rowwise() - b.mean;
  const double dof = static_cast<double>(x.rows() - 1);
  // Wide data (event-bin features run to tens of thousands of columns) goes
  // through the rows x rows Gram matrix, which shares the nonzero spectrum.
  const bool wide = x.cols() > x.rows();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(wide ? MatrixXd(c * c.transpose() / dof)
                                                  : MatrixXd(c.transpose() * c / dof));
  if (es.info() != Eigen::Success) throw Error("pca_fit: eigendecomposition failed");
  // Eigen returns ascending order.
  const Eigen::Index m = es.eigenvalues().size();
  b.eigenvalues = VectorXd::Zero(x.cols());
  b.eigenvalues.head(m) = es.eigenvalues().reverse();
  b.components.resize(x.cols(), k);
  for (int j = 0; j < k; ++j) {
    VectorXd v = es.eigenvectors().col(m - 1 - j);
    if (wide) {
      v = c.transpose() * v;
      const double norm = v.norm();
      if (norm > 0) v /= norm;
    }
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    b.components.col(j) = v;
  }
  const double total = b.eigenvalues.cwiseMax(0.0).sum();
  b.explained_variance_ratio =
      total > 0 ? VectorXd(b.eigenvalues.head(k).cwiseMax(0.0) / total) : VectorXd::Zero(k);
  return b;
}

MatrixXd pca_transform(const MatrixXd& x, const PcaBasis& b) {
  if (x.cols() != b.mean.size()) throw InvalidInput("pca_transform: feature count mismatch");
  return (x.rowwise() - b.mean) * b.components;
}

MatrixXd LinearModel::preprocess(const MatrixXd& x) const {
  MatrixXd z = standardizer ? standardizer->transform(x) : x;
  if (pca) z = pca_transform(z, *pca);
  return z;
}

MatrixXd LinearModel::margins(const MatrixXd& x) const {
  MatrixXd s = preprocess(x) * weights.transpose();
  s.rowwise() += bias.transpose();
  return s;
}

LinearModel linear_fit(const MatrixXd& x, std::span<const int> labels, const LinearConfig& cfg) {
  if (x.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw InvalidInput("linear_fit: label count mismatch");
  }
  if (!x.allFinite()) throw InvalidInput("linear_fit: non-finite features");
  if (cfg.epochs < 0 || !(cfg.learning_rate > 0.0) || cfg.l2 < 0.0 || cfg.pca_components < 0) {
    throw InvalidInput("linear_fit: invalid configuration");
  }
  LinearModel m;
  m.classes.assign(labels.begin(), labels.end());
  std::sort(m.classes.begin(), m.classes.end());
  m.classes.erase(std::unique(m.classes.begin(), m.classes.end()), m.classes.end());
  if (m.classes.size() < 2) throw InvalidInput("linear_fit: need at least two classes");

  MatrixXd z = x;
  if (cfg.standardize) {
    m.standardizer = Standardizer::fit(z);
    z = m.standardizer->transform(z);
  }
  if (cfg.pca_components > 0) {
    const int k = static_cast<int>(std::min<Eigen::Index>(
        cfg.pca_components, std::min<Eigen::Index>(z.rows() - 1, z.cols())));
    m.pca = pca_fit(z, k);
    z = pca_transform(z, *m.pca);
  }

  const Eigen::Index n = z.rows(), d = z.cols();
  const Eigen::Index nc = static_cast<Eigen::Index>(m.classes.size());
  MatrixXd y = -MatrixXd::Ones(n, nc);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto it = std::lower_bound(m.classes.begin(), m.classes.end(), labels[i]);
    y(i, it - m.classes.begin()) = 1.0;
  }
  m.weights = MatrixXd::Zero(nc, d);
  m.bias = VectorXd::Zero(nc);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    MatrixXd s = z * m.weights.transpose();
    s.rowwise() += m.bias.transpose();
    // Subgradient of mean hinge: -y where y * s < 1.
    const MatrixXd g = -((y.array() * s.array() < 1.0).cast<double>() * y.array()).matrix() /
                       static_cast<double>(n);
    const double lr = cfg.learning_rate / std::sqrt(1.0 + epoch);
    m.weights -= lr * (g.transpose() * z + cfg.l2 * m.weights);
    m.bias -= lr * g.colwise().sum().transpose();
  }
  return m;
}

std::vector<int> linear_predict(const LinearModel& model, const MatrixXd& x) {
  const MatrixXd s = model.margins(x);
  std::vector<int> out(static_cast<std::size_t>(s.rows()));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < s.cols(); ++c)
      if (s(i, c) > s(i, best)) best = c;
    out[i] = model.classes[best];
  }
  return out;
}

std::vector<int> stratified_kfold(std::span<const int> labels, int folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidInput("need at least two folds");
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) by_class[labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<int> fold(labels.size(), 0);
  // Continue the round-robin across classes so fold sizes stay balanced.
  int next = 0;
  for (auto& [label, idx] : by_class) {
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i : idx) {
      fold[i] = next;
      next = (next + 1) % folds;
    }
  }
  return fold;
}

CvResult cross_validate(const FeatureMatrix& f, const LinearConfig& cfg, int folds,
                        std::uint64_t seed) {
  f.validate();
  if (static_cast<int>(f.labels.size()) < folds) {
    throw InvalidInput("fewer samples than folds");
  }
  const std::vector<int> fold = stratified_kfold(f.labels, folds, seed);
  CvResult r;
  for (int k = 0; k < folds; ++k) {
    std::vector<int> tr, te;
    for (int i = 0; i < static_cast<int>(fold.size()); ++i) (fold[i] == k ? te : tr).push_back(i);
    std::vector<int> ytr, yte;
    for (int i : tr) ytr.push_back(f.labels[i]);
    for (int i : te) yte.push_back(f.labels[i]);
    const LinearModel m = linear_fit(take_rows(f.x, tr), ytr, cfg);
    const std::vector<int> pred = linear_predict(m, take_rows(f.x, te));
    int correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == yte[i];
    r.fold_accuracy.push_back(te.empty() ? 0.0 : static_cast<double>(correct) / te.size());
  }
  double sum = 0.0;
  for (double a : r.fold_accuracy) sum += a;
  r.mean = sum / folds;
  r.std = population_std(r.fold_accuracy, r.mean);
  return r;
}

std::vector<CurvePoint> incremental_frames_curve(const Dataset& ds, const LinearConfig& cfg,
                                                 int folds, std::uint64_t seed, int step) {
  require_samples(ds);
  if (step < 1) throw InvalidInput("curve step must be >= 1");
  int nf = ds.samples.front().n_frames();
  for (const auto& s : ds.samples) nf = std::min(nf, s.n_frames());
  std::vector<int> lengths;
  for (int n = step; n < nf; n += step) lengths.push_back(n);
  lengths.push_back(nf);
  std::vector<CurvePoint> curve;
  for (int n : lengths) {
    CurvePoint p;
    p.n_frames = n;
    p.time_s = n / ds.sampling_rate_hz;
    p.cv = cross_validate(raw_features(ds, n), cfg, folds, seed);
    curve.push_back(std::move(p));
  }
  return curve;
}

}  // namespace tactile
