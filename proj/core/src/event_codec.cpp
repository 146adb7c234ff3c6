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

#include "tactile/event_codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "tactile/error.hpp"

namespace tactile {
namespace {

// Bin boundaries are computed in floating point; this slack keeps an event
// that sits exactly on a boundary in the later bin.
constexpr double kBinSlack = 1e-9;

// Timestamp of sub-frame tick `tick` counted from frame 0. Frame times use the
// same expression with tick = k * resolution, so an event on a frame boundary
// compares equal to that frame's time.
double tick_time(std::int64_t tick, int resolution, double rate_hz) {
  return static_cast<double>(tick) / (static_cast<double>(resolution) * rate_hz);
}

double interpolate(double a, double b, int j, int resolution) {
  return a + (b - a) * j / resolution;
}

// Smallest tick j in [1, resolution] at which the rising segment a->b reaches
// `level`. Caller guarantees interpolate(a, b, resolution) >= level.
int first_tick_at_or_above(double a, double b, double level, int resolution) {
  double guess = std::ceil((level - a) / (b - a) * resolution);
  int j = static_cast<int>(std::clamp(guess, 1.0, static_cast<double>(resolution)));
  while (j > 1 && interpolate(a, b, j - 1, resolution) >= level) --j;
  while (j < resolution && interpolate(a, b, j, resolution) < level) ++j;
  return j;
}

int first_tick_at_or_below(double a, double b, double level, int resolution) {
  double guess = std::ceil((a - level) / (a - b) * resolution);
  int j = static_cast<int>(std::clamp(guess, 1.0, static_cast<double>(resolution)));
  while (j > 1 && interpolate(a, b, j - 1, resolution) <= level) --j;
  while (j < resolution && interpolate(a, b, j, resolution) > level) ++j;
  return j;
}

int bin_steps(double duration_s, double bin_ms) {
  return static_cast<int>(std::floor(duration_s * 1000.0 / bin_ms + kBinSlack));
}

}  // namespace

void EncoderConfig::validate() const {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw InvalidInput("encoder threshold must be positive, got " +
                       std::to_string(threshold));
  }
  if (interpolation_resolution < 1) {
    throw InvalidInput("interpolation_resolution must be >= 1");
  }
}

void EventStream::validate() const {
  if (n_taxels < 1) throw InvalidInput("event stream needs n_taxels >= 1");
  double prev = 0.0;
  for (const Event& e : events) {
    if (e.taxel < 0 || e.taxel >= n_taxels) {
      throw InvalidInput("event taxel " + std::to_string(e.taxel) + " out of range");
    }
    if (!(e.time_s >= 0.0) || e.time_s > duration_s) {
      throw InvalidInput("event time " + std::to_string(e.time_s) +
                         " outside [0, duration]");
    }
    if (e.time_s < prev) throw InvalidInput("events are not time-sorted");
    prev = e.time_s;
  }
}

BinnedSpikeTensor::BinnedSpikeTensor(int n_steps, int n_channels, double bin_ms,
                                     int label)
    : bits_(Bits::Zero(n_steps, n_channels)), bin_ms_(bin_ms), label_(label) {}

std::int64_t BinnedSpikeTensor::count() const {
  return bits_.cast<std::int64_t>().sum();
}

std::vector<int> BinnedSpikeTensor::active(int t) const {
  std::vector<int> out;
  for (int c = 0; c < n_channels(); ++c) {
    if (bits_(t, c)) out.push_back(c);
  }
  return out;
}

BinnedSpikeTensor BinnedSpikeTensor::prefix(int n_steps) const {
  n_steps = std::clamp(n_steps, 0, this->n_steps());
  BinnedSpikeTensor out(n_steps, n_channels(), bin_ms_, label_);
  out.bits_ = bits_.topRows(n_steps);
  return out;
}

EventStream encode(const FrameSequence& seq, const EncoderConfig& cfg) {
  cfg.validate();
  if (seq.n_taxels() < 1 || seq.n_frames() < 1) {
    throw InvalidInput("frame sequence must have at least one taxel and one frame");
  }
  if (!seq.taxel_values.allFinite()) {
    throw InvalidInput("frame sequence contains non-finite values");
  }
  if (!(seq.sampling_rate_hz > 0.0)) {
    throw InvalidInput("sampling rate must be positive");
  }

  const int res = cfg.interpolation_resolution;
  const double theta = cfg.threshold;
  EventStream out;
  out.n_taxels = seq.n_taxels();
  out.duration_s = seq.duration_s();
  out.label = seq.label;

  for (int taxel = 0; taxel < seq.n_taxels(); ++taxel) {
    double level = seq.taxel_values(taxel, 0);
    for (int k = 0; k + 1 < seq.n_frames(); ++k) {
      const double a = seq.taxel_values(taxel, k);
      const double b = seq.taxel_values(taxel, k + 1);
      const double end = interpolate(a, b, res, res);
      const std::int64_t base = static_cast<std::int64_t>(k) * res;
      if (b > a) {
        while (end >= level + theta) {
          level += theta;
          int j = first_tick_at_or_above(a, b, level, res);
          out.events.push_back({tick_time(base + j, res, seq.sampling_rate_hz),
                                taxel, Polarity::kOn});
        }
      } else if (b < a) {
        while (end <= level - theta) {
          level -= theta;
          int j = first_tick_at_or_below(a, b, level, res);
          out.events.push_back({tick_time(base + j, res, seq.sampling_rate_hz),
                                taxel, Polarity::kOff});
        }
      }
    }
  }
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const Event& x, const Event& y) { return x.time_s < y.time_s; });
  return out;
}

Eigen::MatrixXd reconstruct(const EventStream& stream, const EncoderConfig& cfg,
                            int n_frames, double sampling_rate_hz) {
  cfg.validate();
  stream.validate();
  const int res = cfg.interpolation_resolution;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(stream.n_taxels, n_frames);
  Eigen::VectorXd level = Eigen::VectorXd::Zero(stream.n_taxels);
  std::size_t next = 0;
  for (int k = 0; k < n_frames; ++k) {
    const double frame_time =
        tick_time(static_cast<std::int64_t>(k) * res, res, sampling_rate_hz);
    while (next < stream.events.size() && stream.events[next].time_s <= frame_time) {
      const Event& e = stream.events[next++];
      level(e.taxel) += e.polarity == Polarity::kOn ? cfg.threshold : -cfg.threshold;
    }
    out.col(k) = level;
  }
  return out;
}

Eigen::MatrixXd reconstruct_binned(const BinnedSpikeTensor& tensor, double threshold,
                                   int n_frames, double sampling_rate_hz) {
  const int n_taxels = tensor.n_channels() / 2;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_taxels, n_frames);
  Eigen::VectorXd level = Eigen::VectorXd::Zero(n_taxels);
  int t = 0;
  for (int k = 0; k < n_frames; ++k) {
    const double frame_ms = 1000.0 * k / sampling_rate_hz;
    while (t < tensor.n_steps() && t * tensor.time_bin_size_ms() <= frame_ms + kBinSlack) {
      for (int c = 0; c < 2 * n_taxels; ++c) {
        if (tensor(t, c)) level(c / 2) += (c % 2 == 0) ? threshold : -threshold;
      }
      ++t;
    }
    out.col(k) = level;
  }
  return out;
}

double mse(const Eigen::MatrixXd& original, const Eigen::MatrixXd& reconstructed) {
  if (original.rows() != reconstructed.rows() || original.cols() != reconstructed.cols()) {
    throw InvalidInput("mse: shape mismatch");
  }
  if (original.size() == 0) return 0.0;
  return (original - reconstructed).squaredNorm() / static_cast<double>(original.size());
}

BinnedSpikeTensor bin_events(const EventStream& stream, const BinningConfig& cfg) {
  if (!(cfg.time_bin_size_ms > 0.0)) throw InvalidInput("bin size must be positive");
  const int n_steps = bin_steps(stream.duration_s, cfg.time_bin_size_ms);
  BinnedSpikeTensor out(n_steps, stream.n_channels(), cfg.time_bin_size_ms, stream.label);
  for (const Event& e : stream.events) {
    const double pos = e.time_s * 1000.0 / cfg.time_bin_size_ms + kBinSlack;
    const auto t = static_cast<std::int64_t>(std::floor(pos));
    if (t < 0 || t >= n_steps) continue;
    out.set(static_cast<int>(t), e.channel());
  }
  return out;
}

BinnedSpikeTensor input_copies(const BinnedSpikeTensor& tensor, int nb_input_copies) {
  if (nb_input_copies < 1) throw InvalidInput("nb_input_copies must be >= 1");
  const int c = tensor.n_channels();
  BinnedSpikeTensor out(tensor.n_steps(), c * nb_input_copies, tensor.time_bin_size_ms(),
                        tensor.label());
  for (int t = 0; t < tensor.n_steps(); ++t) {
    for (int ch = 0; ch < c; ++ch) {
      if (!tensor(t, ch)) continue;
      for (int copy = 0; copy < nb_input_copies; ++copy) out.set(t, copy * c + ch);
    }
  }
  return out;
}

std::vector<double> inter_spike_intervals(const EventStream& stream) {
  std::vector<double> last(stream.n_channels(), -1.0);
  std::vector<double> isis;
  for (const Event& e : stream.events) {
    double& prev = last[e.channel()];
    if (prev >= 0.0) isis.push_back(e.time_s - prev);
    prev = e.time_s;
  }
  return isis;
}

std::vector<EncodingReport> analyze_encoding(std::span<const FrameSequence> dataset,
                                             std::span<const double> thresholds,
                                             std::span<const double> bin_sizes_ms,
                                             const AnalysisOptions& opts) {
  if (thresholds.empty()) throw InvalidInput("analyze_encoding: no thresholds");
  if (std::find(thresholds.begin(), thresholds.end(), 1.0) == thresholds.end()) {
    throw InvalidInput("analyze_encoding: threshold 1 is required as reference");
  }
  if (dataset.empty()) throw InvalidInput("analyze_encoding: empty dataset");
  const double n = static_cast<double>(dataset.size());

  struct PerThreshold {
    double mean_events = 0.0;
    double mse = 0.0;
    std::vector<double> isis;
    std::vector<EventStream> streams;
  };
  auto run = [&](double theta) {
    PerThreshold r;
    EncoderConfig cfg{theta, opts.interpolation_resolution};
    double total = 0.0;
    for (const FrameSequence& seq : dataset) {
      EventStream s = encode(seq, cfg);
      total += static_cast<double>(s.events.size());
      r.mse += mse(seq.taxel_values,
                   reconstruct(s, cfg, seq.n_frames(), seq.sampling_rate_hz));
      auto isi = inter_spike_intervals(s);
      r.isis.insert(r.isis.end(), isi.begin(), isi.end());
      r.streams.push_back(std::move(s));
    }
    r.mean_events = total / n;
    r.mse /= n;
    return r;
  };

  const double reference_events = run(1.0).mean_events;
  const auto n_isi_bins = static_cast<std::size_t>(
      std::max(1.0, std::ceil(opts.isi_max_s / opts.isi_bin_width_s)));

  std::vector<EncodingReport> reports;
  for (double theta : thresholds) {
    PerThreshold r = run(theta);
    std::vector<IsiBin> hist;
    std::int64_t below_1ms = 0;
    if (!r.isis.empty()) {
      hist.resize(n_isi_bins);
      for (std::size_t i = 0; i < n_isi_bins; ++i) {
        hist[i].lower_s = static_cast<double>(i) * opts.isi_bin_width_s;
      }
      for (double isi : r.isis) {
        auto idx = static_cast<std::size_t>(isi / opts.isi_bin_width_s);
        hist[std::min(idx, n_isi_bins - 1)].count++;
        if (isi < 1e-3) ++below_1ms;
      }
    }
    auto ratio = [&](double events) {
      return events > 0.0 ? reference_events / events : 0.0;
    };
    for (double bin : bin_sizes_ms) {
      EncodingReport rep;
      rep.threshold = theta;
      rep.bin_size_ms = bin;
      rep.mean_events_per_sample = r.mean_events;
      rep.compression_ratio = ratio(r.mean_events);
      rep.reconstruction_mse = r.mse;
      rep.isi_histogram = hist;
      rep.isi_count = static_cast<std::int64_t>(r.isis.size());
      rep.isi_below_1ms_fraction =
          r.isis.empty() ? 0.0 : static_cast<double>(below_1ms) / r.isis.size();

      double binned_total = 0.0;
      double binned_mse = 0.0;
      for (std::size_t i = 0; i < dataset.size(); ++i) {
        BinnedSpikeTensor b = bin_events(r.streams[i], BinningConfig{bin});
        binned_total += static_cast<double>(b.count());
        binned_mse += mse(dataset[i].taxel_values,
                          reconstruct_binned(b, theta, dataset[i].n_frames(),
                                             dataset[i].sampling_rate_hz));
      }
      rep.mean_events_after_binning = binned_total / n;
      rep.compression_ratio_after_binning = ratio(rep.mean_events_after_binning);
      rep.reconstruction_mse_after_binning = binned_mse / n;
      rep.events_lost_fraction =
          r.mean_events > 0.0 ? 1.0 - rep.mean_events_after_binning / r.mean_events : 0.0;
      reports.push_back(std::move(rep));
    }
  }
  return reports;
}

}  // namespace tactile
