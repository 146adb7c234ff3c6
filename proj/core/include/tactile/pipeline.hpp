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

// Frames to network input: encode, bin, replicate.

#ifndef TACTILE_PIPELINE_HPP_
#define TACTILE_PIPELINE_HPP_

#include <vector>

#include "tactile/dataset.hpp"
#include "tactile/snn.hpp"

namespace tactile {

struct InputSetup {
  double threshold = 1.0;
  double time_bin_ms = 5.0;
  int nb_input_copies = 1;
  int interpolation_resolution = 1000;

  void validate() const;
  int n_channels(int n_taxels) const { return 2 * n_taxels * nb_input_copies; }
};

SpikeRaster encode_sample(const FrameSequence& seq, const InputSetup& setup);
std::vector<SpikeRaster> encode_dataset(const Dataset& ds, const InputSetup& setup);

}  // namespace tactile

#endif  // TACTILE_PIPELINE_HPP_
