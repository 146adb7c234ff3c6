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

#include "tactile/pipeline.hpp"

#include "tactile/error.hpp"

namespace tactile {

void InputSetup::validate() const {
  if (!(threshold > 0.0)) throw InvalidInput("encoding threshold must be positive");
  if (!(time_bin_ms > 0.0)) throw InvalidInput("time bin must be positive");
  if (nb_input_copies < 1) throw InvalidInput("nb_input_copies must be >= 1");
  if (interpolation_resolution < 1) throw InvalidInput("interpolation resolution must be >= 1");
}

SpikeRaster encode_sample(const FrameSequence& seq, const InputSetup& setup) {
  EncoderConfig enc;
  enc.threshold = setup.threshold;
  enc.interpolation_resolution = setup.interpolation_resolution;
  BinnedSpikeTensor t = bin_events(encode(seq, enc), {setup.time_bin_ms});
  if (setup.nb_input_copies > 1) t = input_copies(t, setup.nb_input_copies);
  return SpikeRaster::from_tensor(t);
}

std::vector<SpikeRaster> encode_dataset(const Dataset& ds, const InputSetup& setup) {
  setup.validate();
  std::vector<SpikeRaster> out;
  out.reserve(ds.samples.size());
  for (const FrameSequence& s : ds.samples) out.push_back(encode_sample(s, setup));
  for (const SpikeRaster& r : out) {
    if (r.n_steps != out.front().n_steps) {
      throw InvalidInput("samples bin to different lengths; use equal-length recordings");
    }
  }
  return out;
}

}  // namespace tactile
