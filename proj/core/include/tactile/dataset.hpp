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

// Tactile recording datasets: on-disk adapters and a synthetic generator.
//
// Binary layout (little-endian), see docs/formats.md:
//   "TBRD", u32 version, f64 sampling_rate_hz, u32 n_classes,
//   n_classes x (u16 length, bytes) class names, u32 n_samples, then per
//   sample: u8 label, u16 n_taxels, u32 n_frames, n_frames * n_taxels bytes
//   (frame-major: all taxels of frame 0, then frame 1, ...).
//
// CSV layout: header "sample,label,taxel_0,...,taxel_{n-1}", one row per
// frame, rows of one sample contiguous and in frame order. The label column
// holds either an integer class index or a class name.

#ifndef TACTILE_DATASET_HPP_
#define TACTILE_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tactile/event_codec.hpp"

namespace tactile {

struct Dataset {
  std::vector<FrameSequence> samples;
  std::vector<std::string> class_names;
  double sampling_rate_hz = 40.0;
  std::string source;
  std::uint32_t checksum = 0;  // CRC-32 of the file the dataset was read from

  int n_classes() const { return static_cast<int>(class_names.size()); }
  int n_taxels() const { return samples.empty() ? 0 : samples.front().n_taxels(); }
  // Throws InvalidInput on inconsistent shapes, rates, labels or values.
  void validate() const;
  std::vector<int> labels() const;
};

enum class DatasetFormat { kAuto, kBinary, kCsv };

Dataset load_dataset(const std::string& path, DatasetFormat format = DatasetFormat::kAuto,
                     double csv_sampling_rate_hz = 40.0);
void save_dataset(const Dataset& ds, const std::string& path,
                  DatasetFormat format = DatasetFormat::kAuto);

// Braille letters a..z and space as raised-dot sets (dots numbered 1..6:
// 1-3 down the left column, 4-6 down the right column).
const std::vector<std::vector<int>>& braille_alphabet();
std::string braille_letter_name(int index);

struct SynthConfig {
  int n_classes = 10;
  int n_repetitions = 50;
  std::uint64_t seed = 0;
  // Dot templates per class; empty means braille_alphabet() order, then
  // seeded random dot sets past the alphabet.
  std::vector<std::vector<int>> templates;
  bool include_no_contact = false;  // appends an all-rest class

  int n_taxels = 12;
  double sampling_rate_hz = 40.0;
  double duration_s = 1.35;
  double slide_speed_mm_s = 20.0;
  double start_position_mm = -14.0;
  double start_jitter_mm = 1.0;
  double lateral_jitter_mm = 0.25;
  double dot_spacing_mm = 2.5;
  double contact_width_mm = 1.0;
  double peak_value = 20.0;
  double amplitude_jitter = 0.08;
  double noise_std = 0.3;
};

Dataset synth_dataset(const SynthConfig& cfg);

}  // namespace tactile

#endif  // TACTILE_DATASET_HPP_
