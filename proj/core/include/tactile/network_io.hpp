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

// Model files. Both float and quantized networks are stored as Containers
// with these datasets (see docs/formats.md):
//
//   model/kind            i64  1 = float, 2 = quantized
//   model/recurrent       i64  0 or 1
//   weights/w_in          [hidden x inputs]   f64 (float) or i64 (quantized)
//   weights/v_rec         [hidden x hidden]   only when recurrent
//   weights/w_out         [outputs x hidden]
//   lif_hidden/*, lif_out/*   f64 tau_mem_ms, tau_syn_ms, time_bin_ms,
//                             alpha, beta, threshold, u_rest, resistance
//   quant_hidden/*, quant_out/*  i64 delta_current, delta_voltage, w_scale,
//                                threshold (quantized models only)
//
// Optional metadata written by the command-line tool:
//   input/threshold, input/time_bin_ms      f64
//   input/nb_input_copies                   i64
//   split/seed                              i64
//   split/test_fraction                     f64

#ifndef TACTILE_NETWORK_IO_HPP_
#define TACTILE_NETWORK_IO_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "tactile/container.hpp"
#include "tactile/pipeline.hpp"
#include "tactile/quantize.hpp"
#include "tactile/snn.hpp"

namespace tactile {

enum class ModelKind { kFloat = 1, kQuantized = 2 };

Container to_container(const NetworkDef& net);
Container to_container(const QuantizedNetwork& net, const NetworkDef* source = nullptr);
NetworkDef network_from_container(const Container& c);
QuantizedNetwork quantized_from_container(const Container& c);
ModelKind model_kind(const Container& c);

void put_input_setup(Container& c, const InputSetup& s);
std::optional<InputSetup> get_input_setup(const Container& c);

struct SplitInfo {
  std::uint64_t seed = 0;
  double test_fraction = 0.2;
};
void put_split(Container& c, const SplitInfo& s);
std::optional<SplitInfo> get_split(const Container& c);

void save_network(const NetworkDef& net, const std::string& path);
NetworkDef load_network(const std::string& path);
void save_quantized(const QuantizedNetwork& net, const std::string& path);
QuantizedNetwork load_quantized(const std::string& path);

}  // namespace tactile

#endif  // TACTILE_NETWORK_IO_HPP_
