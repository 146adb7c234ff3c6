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

// Reference implementations used as test oracles. Each one is a plain scalar
// loop written from the model equations, independent of the library code.

#ifndef TACTILE_TESTS_ORACLES_HPP_
#define TACTILE_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "tactile/event_codec.hpp"
#include "tactile/quantize.hpp"
#include "tactile/snn.hpp"
#include "tactile/train.hpp"

namespace tactile::oracle {

struct SimpleEvent {
  std::int64_t tick;
  int taxel;
  bool on;
};

// Walks the linearly interpolated signal tick by tick and fires whenever it
// has drifted a full threshold from the tracked level.
inline std::vector<SimpleEvent> brute_force_encode(const Eigen::MatrixXd& x, double theta,
                                                   int res) {
  std::vector<SimpleEvent> out;
  for (int i = 0; i < x.rows(); ++i) {
    double level = x(i, 0);
    for (int k = 0; k + 1 < x.cols(); ++k) {
      for (int j = 1; j <= res; ++j) {
        const double v = x(i, k) + (x(i, k + 1) - x(i, k)) * j / res;
        while (v >= level + theta - 1e-9) {
          level += theta;
          out.push_back({static_cast<std::int64_t>(k) * res + j, i, true});
        }
        while (v <= level - theta + 1e-9) {
          level -= theta;
          out.push_back({static_cast<std::int64_t>(k) * res + j, i, false});
        }
      }
    }
  }
  return out;
}

// Hidden and output spike rasters of a Heaviside network, [T][n].
struct ScalarTrace {
  std::vector<std::vector<double>> hidden, output;
  std::vector<double> counts;
};

inline ScalarTrace scalar_forward(const NetworkDef& n, const SpikeRaster& x) {
  const int nh = n.n_hidden(), no = n.n_outputs();
  std::vector<double> ih(nh, 0), uh(nh, 0), sh(nh, 0), io(no, 0), uo(no, 0), so(no, 0);
  ScalarTrace tr;
  tr.counts.assign(no, 0.0);
  for (int t = 0; t < x.n_steps; ++t) {
    std::vector<double> in(nh, 0.0);
    for (int i = 0; i < nh; ++i) {
      for (int c : x.active(t)) in[i] += n.w_in(i, c);
      if (n.recurrent)
        for (int j = 0; j < nh; ++j) in[i] += n.v_rec(i, j) * sh[j];
    }
    for (int i = 0; i < nh; ++i) {
      ih[i] = n.lif_hidden.alpha * ih[i] + in[i];
      uh[i] = (n.lif_hidden.beta * uh[i] + ih[i]) * (1.0 - sh[i]);
    }
    for (int i = 0; i < nh; ++i) sh[i] = uh[i] >= n.lif_hidden.threshold ? 1.0 : 0.0;
    for (int k = 0; k < no; ++k) {
      double s = 0;
      for (int i = 0; i < nh; ++i) s += n.w_out(k, i) * sh[i];
      io[k] = n.lif_out.alpha * io[k] + s;
      uo[k] = (n.lif_out.beta * uo[k] + io[k]) * (1.0 - so[k]);
    }
    for (int k = 0; k < no; ++k) {
      so[k] = uo[k] >= n.lif_out.threshold ? 1.0 : 0.0;
      tr.counts[k] += so[k];
    }
    tr.hidden.push_back(sh);
    tr.output.push_back(so);
  }
  return tr;
}

// Total training loss of a smoothed network (fast-sigmoid spikes) with the
// reset masks either recorded from this run or replayed from an earlier one.
// Replaying keeps the loss differentiable for finite differences, matching
// the detached reset of the analytic gradient.
class SmoothLoss {
 public:
  SmoothLoss(int n_steps, double scale) : t_(n_steps), lam_(scale) {}

  double operator()(const NetworkDef& n, const std::vector<SpikeRaster>& xs,
                    const std::vector<int>& y, const TrainConfig& cfg, bool record) {
    const int b_n = static_cast<int>(xs.size()), nh = n.n_hidden(), no = n.n_outputs();
    if (record) {
      mh_.assign(b_n, std::vector<std::vector<double>>(t_, std::vector<double>(nh)));
      mo_.assign(b_n, std::vector<std::vector<double>>(t_, std::vector<double>(no)));
    }
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(b_n, no), hc = Eigen::MatrixXd::Zero(b_n, nh);
    for (int b = 0; b < b_n; ++b) {
      std::vector<double> ih(nh, 0), uh(nh, 0), sh(nh, 0), io(no, 0), uo(no, 0), so(no, 0);
      for (int t = 0; t < t_; ++t) {
        std::vector<double> in(nh, 0);
        for (int i = 0; i < nh; ++i) {
          for (int c : xs[b].active(t)) in[i] += n.w_in(i, c);
          if (n.recurrent)
            for (int j = 0; j < nh; ++j) in[i] += n.v_rec(i, j) * sh[j];
        }
        std::vector<double> next(nh);
        for (int i = 0; i < nh; ++i) {
          ih[i] = n.lif_hidden.alpha * ih[i] + in[i];
          const double m = t == 0 ? 1.0 : record ? 1.0 - sh[i] : mh_[b][t][i];
          if (record) mh_[b][t][i] = m;
          uh[i] = (n.lif_hidden.beta * uh[i] + ih[i]) * m;
          const double u = uh[i] - n.lif_hidden.threshold;
          next[i] = u / (1.0 + lam_ * std::abs(u));
          hc(b, i) += next[i];
        }
        sh = next;
        for (int k = 0; k < no; ++k) {
          double s = 0;
          for (int i = 0; i < nh; ++i) s += n.w_out(k, i) * sh[i];
          io[k] = n.lif_out.alpha * io[k] + s;
          const double m = t == 0 ? 1.0 : record ? 1.0 - so[k] : mo_[b][t][k];
          if (record) mo_[b][t][k] = m;
          uo[k] = (n.lif_out.beta * uo[k] + io[k]) * m;
          const double u = uo[k] - n.lif_out.threshold;
          so[k] = u / (1.0 + lam_ * std::abs(u));
          counts(b, k) += so[k];
        }
      }
    }
    // Softmax cross-entropy, per-neuron rate hinge and population count
    // hinge, written out longhand.
    double ce = 0;
    for (int b = 0; b < b_n; ++b) {
      const double mx = counts.row(b).maxCoeff();
      double z = 0;
      for (int k = 0; k < no; ++k) z += std::exp(counts(b, k) - mx);
      ce += -(counts(b, y[b]) - mx - std::log(z));
    }
    ce /= b_n;
    double l1 = 0;
    for (int b = 0; b < b_n; ++b)
      for (int i = 0; i < nh; ++i) l1 += std::max(0.0, hc(b, i) / t_ - cfg.reg_lower_threshold);
    l1 *= cfg.reg_lower_strength / (b_n + nh);
    double l2 = 0;
    for (int b = 0; b < b_n; ++b) {
      const double h = std::max(0.0, hc.row(b).sum() / nh - cfg.reg_upper_threshold);
      l2 += h * h;
    }
    l2 *= cfg.reg_upper_strength / b_n;
    return ce + cfg.reg_neurons * l1 + cfg.reg_spikes * l2;
  }

 private:
  int t_;
  double lam_;
  std::vector<std::vector<std::vector<double>>> mh_, mo_;
};

struct QuantTally {
  std::vector<int> predictions;
  std::int64_t input_events = 0, hidden_spikes = 0, synops = 0;
};

// Integer inference with the synaptic operations tallied step by step: each
// emitted spike adds one operation per target neuron.
inline QuantTally quantized_tally(const QuantizedNetwork& q, const std::vector<SpikeRaster>& xs,
                                  int blank) {
  const int nh = q.n_hidden(), no = q.n_outputs();
  auto decay = [](std::int64_t v, int d) { return v * (4096 - d) / 4096; };
  QuantTally out;
  for (const SpikeRaster& x : xs) {
    std::vector<std::int64_t> ih(nh, 0), uh(nh, 0), io(no, 0), uo(no, 0);
    std::vector<int> sh(nh, 0), so(no, 0), counts(no, 0);
    for (int t = 0; t < x.n_steps + blank; ++t) {
      std::vector<std::int64_t> in(nh, 0);
      if (t < x.n_steps) {
        for (int c : x.active(t)) {
          ++out.input_events;
          for (int i = 0; i < nh; ++i) {
            in[i] += q.w_in(i, c);
            ++out.synops;
          }
        }
      }
      if (q.recurrent) {
        for (int j = 0; j < nh; ++j) {
          if (!sh[j]) continue;
          for (int i = 0; i < nh; ++i) in[i] += q.v_rec(i, j);
        }
      }
      for (int i = 0; i < nh; ++i) {
        ih[i] = decay(ih[i], q.hidden.delta_current) + 64 * in[i];
        uh[i] = sh[i] ? 0 : decay(uh[i], q.hidden.delta_voltage) + ih[i];
        sh[i] = uh[i] >= q.hidden.threshold;
        if (sh[i]) uh[i] = 0;
      }
      std::vector<std::int64_t> ino(no, 0);
      for (int j = 0; j < nh; ++j) {
        if (!sh[j]) continue;
        ++out.hidden_spikes;
        for (int k = 0; k < no; ++k) {
          ino[k] += q.w_out(k, j);
          ++out.synops;
        }
        // Recurrent synapses are charged when the spike is sent, even if the
        // run ends before they are read.
        if (q.recurrent) out.synops += nh;
      }
      for (int k = 0; k < no; ++k) {
        io[k] = decay(io[k], q.output.delta_current) + 64 * ino[k];
        uo[k] = so[k] ? 0 : decay(uo[k], q.output.delta_voltage) + io[k];
        so[k] = uo[k] >= q.output.threshold;
        if (so[k]) uo[k] = 0;
        if (so[k] && t < x.n_steps) ++counts[k];
      }
    }
    int best = 0;
    for (int k = 1; k < no; ++k)
      if (counts[k] > counts[best]) best = k;
    out.predictions.push_back(best);
  }
  return out;
}

inline SpikeRaster random_raster(int n_steps, int n_channels, double p, int label,
                                 std::mt19937_64& rng) {
  std::bernoulli_distribution on(p);
  BinnedSpikeTensor t(n_steps, n_channels, 1.0, label);
  for (int s = 0; s < n_steps; ++s)
    for (int c = 0; c < n_channels; ++c)
      if (on(rng)) t.set(s, c);
  return SpikeRaster::from_tensor(t);
}

}  // namespace tactile::oracle

#endif  // TACTILE_TESTS_ORACLES_HPP_
