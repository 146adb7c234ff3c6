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

// Synthetic sliding-fingertip recordings. A fingertip with a grid of taxels
// slides at constant speed over a raised-dot cell; each taxel reads the sum
// of Gaussian contact bumps of the dots beneath it.

#include <algorithm>
#include <cmath>
#include <random>

#include "tactile/dataset.hpp"
#include "tactile/error.hpp"

namespace tactile {
namespace {

struct Point {
  double x, y;
};

// Taxel offsets from the fingertip centre: 3 rows across the slide, as many
// columns along it as needed.
std::vector<Point> taxel_layout(int n_taxels) {
  const int rows = 3;
  const int cols = (n_taxels + rows - 1) / rows;
  std::vector<Point> out;
  for (int i = 0; i < n_taxels; ++i) {
    const int r = i % rows, c = i / rows;
    out.push_back({(c - (cols - 1) / 2.0) * 3.0, (1 - r) * 3.0});
  }
  return out;
}

Point dot_position(int dot, double spacing) {
  // Dots 1-3 left column top to bottom, 4-6 right column.
  const int col = (dot - 1) / 3, row = (dot - 1) % 3;
  return {col * spacing, (1 - row) * spacing};
}

}  // namespace

const std::vector<std::vector<int>>& braille_alphabet() {
  static const std::vector<std::vector<int>> kLetters = {
      {1},          {1, 2},       {1, 4},       {1, 4, 5},    {1, 5},
      {1, 2, 4},    {1, 2, 4, 5}, {1, 2, 5},    {2, 4},       {2, 4, 5},
      {1, 3},       {1, 2, 3},    {1, 3, 4},    {1, 3, 4, 5}, {1, 3, 5},
      {1, 2, 3, 4}, {1, 2, 3, 4, 5}, {1, 2, 3, 5}, {2, 3, 4},  {2, 3, 4, 5},
      {1, 3, 6},    {1, 2, 3, 6}, {2, 4, 5, 6}, {1, 3, 4, 6}, {1, 3, 4, 5, 6},
      {1, 3, 5, 6}, {}};
  return kLetters;
}

std::string braille_letter_name(int index) {
  if (index >= 0 && index < 26) return std::string(1, static_cast<char>('A' + index));
  if (index == 26) return "Space";
  return "C" + std::to_string(index);
}

Dataset synth_dataset(const SynthConfig& cfg) {
  if (cfg.n_classes < 1 || cfg.n_repetitions < 1 || cfg.n_taxels < 1) {
    throw InvalidInput("synth_dataset: classes, repetitions and taxels must be >= 1");
  }
  std::mt19937_64 rng(cfg.seed);

  std::vector<std::vector<int>> templates = cfg.templates;
  if (templates.empty()) {
    const auto& abc = braille_alphabet();
    std::uniform_int_distribution<int> coin(0, 1);
    for (int c = 0; c < cfg.n_classes; ++c) {
      if (c < static_cast<int>(abc.size())) {
        templates.push_back(abc[c]);
        continue;
      }
      std::vector<int> dots;
      for (int d = 1; d <= 6; ++d)
        if (coin(rng)) dots.push_back(d);
      templates.push_back(dots);
    }
  }
  if (static_cast<int>(templates.size()) != cfg.n_classes) {
    throw InvalidInput("synth_dataset: template count must equal n_classes");
  }

  Dataset ds;
  ds.sampling_rate_hz = cfg.sampling_rate_hz;
  ds.source = "synthetic";
  for (int c = 0; c < cfg.n_classes; ++c) {
    ds.class_names.push_back(cfg.templates.empty() ? braille_letter_name(c)
                                                   : "T" + std::to_string(c));
  }
  if (cfg.include_no_contact) ds.class_names.push_back("NoContact");

  const int n_frames =
      static_cast<int>(std::lround(cfg.duration_s * cfg.sampling_rate_hz));
  const auto layout = taxel_layout(cfg.n_taxels);
  const double two_w2 = 2.0 * cfg.contact_width_mm * cfg.contact_width_mm;
  std::normal_distribution<double> normal(0.0, 1.0);

  auto make = [&](const std::vector<int>& dots, int label, bool contact) {
    FrameSequence seq;
    seq.label = label;
    seq.sampling_rate_hz = cfg.sampling_rate_hz;
    seq.taxel_values = Eigen::MatrixXd::Zero(cfg.n_taxels, n_frames);
    const double x0 = cfg.start_position_mm + cfg.start_jitter_mm * normal(rng);
    const double y0 = cfg.lateral_jitter_mm * normal(rng);
    const double amp = cfg.peak_value * (1.0 + cfg.amplitude_jitter * normal(rng));
    for (int f = 0; f < n_frames; ++f) {
      const double xf = x0 + cfg.slide_speed_mm_s * f / cfg.sampling_rate_hz;
      for (int t = 0; t < cfg.n_taxels; ++t) {
        double p = 0.0;
        if (contact) {
          for (int d : dots) {
            const Point dp = dot_position(d, cfg.dot_spacing_mm);
            const double dx = xf + layout[t].x - dp.x;
            const double dy = y0 + layout[t].y - dp.y;
            p += amp * std::exp(-(dx * dx + dy * dy) / two_w2);
          }
        }
        const double noisy = p + cfg.noise_std * normal(rng);
        seq.taxel_values(t, f) = std::clamp(std::round(noisy), 0.0, 255.0);
      }
    }
    return seq;
  };

  for (int rep = 0; rep < cfg.n_repetitions; ++rep) {
    for (int c = 0; c < cfg.n_classes; ++c) ds.samples.push_back(make(templates[c], c, true));
    if (cfg.include_no_contact) ds.samples.push_back(make({}, cfg.n_classes, false));
  }
  return ds;
}

}  // namespace tactile
