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

// Event stream serialization. See docs/formats.md for the byte layout.
//
// Text form, one stream per block:
//   # stream label=<int> n_taxels=<int> duration_s=<real>
//   <time_s> <taxel> <ON|OFF>
//   ...
// Binary form: "TEVS", u32 version, u64 stream count, then per stream
//   i32 label, u32 n_taxels, f64 duration_s, u64 n_events and n_events
//   records of (f64 time_s, u16 taxel, u8 polarity). Little-endian, packed.

#ifndef TACTILE_EVENT_IO_HPP_
#define TACTILE_EVENT_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "tactile/event_codec.hpp"

namespace tactile {

void write_events_text(std::ostream& os, const std::vector<EventStream>& streams);
std::vector<EventStream> read_events_text(std::istream& is,
                                          const std::string& source = "<stream>");

void write_events_binary(std::ostream& os, const std::vector<EventStream>& streams);
std::vector<EventStream> read_events_binary(std::istream& is,
                                            const std::string& source = "<stream>");

// Dispatch on extension: ".txt" is text, anything else binary.
void save_events(const std::string& path, const std::vector<EventStream>& streams);
std::vector<EventStream> load_events(const std::string& path);

}  // namespace tactile

#endif  // TACTILE_EVENT_IO_HPP_
