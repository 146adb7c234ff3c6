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

// Sigma-delta event encoding of frame-based taxel recordings, reconstruction
// from events, clock-driven time binning, and encoding-quality statistics.

#ifndef TACTILE_EVENT_CODEC_HPP_
#define TACTILE_EVENT_CODEC_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace tactile {

// One recorded sample. Rows are taxels, columns are frames.
struct FrameSequence {
  Eigen::MatrixXd taxel_values;
  double sampling_rate_hz = 40.0;
  int label = 0;

  int n_taxels() const { return static_cast<int>(taxel_values.rows()); }
  int n_frames() const { return static_cast<int>(taxel_values.cols()); }
  // Recording length: one frame period per frame.
  double duration_s() const { return n_frames() / sampling_rate_hz; }
};

struct EncoderConfig {
  double threshold = 1.0;
  // Sub-frame ticks used to place event timestamps between two frames.
  int interpolation_resolution = 1000;

  void validate() const;
};

enum class Polarity : std::uint8_t { kOn = 0, kOff = 1 };

struct Event {
  double time_s = 0.0;
  int taxel = 0;
  Polarity polarity = Polarity::kOn;

  // Channel index in the 2 * n_taxels layout: 2 * taxel + polarity.
  int channel() const { return 2 * taxel + static_cast<int>(polarity); }
  friend bool operator==(const Event&, const Event&) = default;
};

struct EventStream {
  std::vector<Event> events;
  double duration_s = 0.0;
  int n_taxels = 0;
  int label = 0;

  int n_channels() const { return 2 * n_taxels; }
  // Throws InvalidInput if ordering, time range or taxel bounds are violated.
  void validate() const;
};

struct BinningConfig {
  double time_bin_size_ms = 1.0;
};

// Binary raster [T x channels], row-major so one time step is contiguous.
class BinnedSpikeTensor {
 public:
  using Bits =
      Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BinnedSpikeTensor() = default;
  BinnedSpikeTensor(int n_steps, int n_channels, double bin_ms, int label);

  int n_steps() const { return static_cast<int>(bits_.rows()); }
  int n_channels() const { return static_cast<int>(bits_.cols()); }
  double time_bin_size_ms() const { return bin_ms_; }
  int label() const { return label_; }
  void set_label(int label) { label_ = label; }

  std::uint8_t operator()(int t, int c) const { return bits_(t, c); }
  void set(int t, int c) { bits_(t, c) = 1; }
  const Bits& bits() const { return bits_; }

  std::int64_t count() const;
  // Channel indices that are set at step t, ascending.
  std::vector<int> active(int t) const;
  // Same tensor truncated to the first n_steps rows.
  BinnedSpikeTensor prefix(int n_steps) const;

  friend bool operator==(const BinnedSpikeTensor& a, const BinnedSpikeTensor& b) {
    return a.bits_ == b.bits_ && a.label_ == b.label_;
  }

 private:
  Bits bits_;
  double bin_ms_ = 1.0;
  int label_ = 0;
};

struct IsiBin {
  double lower_s = 0.0;
  std::int64_t count = 0;
};

struct EncodingReport {
  double threshold = 1.0;
  double bin_size_ms = 0.0;
  double mean_events_per_sample = 0.0;
  double compression_ratio = 1.0;
  double reconstruction_mse = 0.0;
  double mean_events_after_binning = 0.0;
  double compression_ratio_after_binning = 1.0;
  double reconstruction_mse_after_binning = 0.0;
  double events_lost_fraction = 0.0;
  double isi_below_1ms_fraction = 0.0;
  std::int64_t isi_count = 0;
  std::vector<IsiBin> isi_histogram;
};

EventStream encode(const FrameSequence& seq, const EncoderConfig& cfg);

// Piecewise-constant reconstruction sampled at frame times, starting from 0.
Eigen::MatrixXd reconstruct(const EventStream& stream, const EncoderConfig& cfg,
                            int n_frames, double sampling_rate_hz);

// Reconstruction from a binned raster. A set bit contributes at the start of
// its bin.
Eigen::MatrixXd reconstruct_binned(const BinnedSpikeTensor& tensor,
                                   double threshold, int n_frames,
                                   double sampling_rate_hz);

double mse(const Eigen::MatrixXd& original, const Eigen::MatrixXd& reconstructed);

BinnedSpikeTensor bin_events(const EventStream& stream, const BinningConfig& cfg);

BinnedSpikeTensor input_copies(const BinnedSpikeTensor& tensor, int nb_input_copies);

// Inter-event intervals per channel, in seconds.
std::vector<double> inter_spike_intervals(const EventStream& stream);

struct AnalysisOptions {
  int interpolation_resolution = 1000;
  double isi_bin_width_s = 1e-3;
  double isi_max_s = 0.5;
};

// One report per (threshold, bin size) pair. Thresholds must contain 1.
std::vector<EncodingReport> analyze_encoding(
    std::span<const FrameSequence> dataset, std::span<const double> thresholds,
    std::span<const double> bin_sizes_ms, const AnalysisOptions& opts = {});

}  // namespace tactile

#endif  // TACTILE_EVENT_CODEC_HPP_
