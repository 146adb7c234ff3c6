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

#include "tactile/event_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "binary_io.hpp"
#include "tactile/error.hpp"

namespace tactile {
namespace {

constexpr char kMagic[5] = "TEVS";
constexpr std::uint32_t kVersion = 1;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_events_text(std::ostream& os, const std::vector<EventStream>& streams) {
  os << std::setprecision(17);
  for (const EventStream& s : streams) {
    os << "# stream label=" << s.label << " n_taxels=" << s.n_taxels
       << " duration_s=" << s.duration_s << '\n';
    for (const Event& e : s.events) {
      os << e.time_s << ' ' << e.taxel << ' '
         << (e.polarity == Polarity::kOn ? "ON" : "OFF") << '\n';
    }
  }
}

std::vector<EventStream> read_events_text(std::istream& is, const std::string& source) {
  std::vector<EventStream> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string word;
      hs >> word;
      if (word != "stream") continue;
      EventStream s;
      bool has_taxels = false, has_duration = false;
      while (hs >> word) {
        auto eq = word.find('=');
        if (eq == std::string::npos) throw ParseError(source, where + ": bad header field");
        std::string key = word.substr(0, eq), value = word.substr(eq + 1);
        try {
          if (key == "label") {
            s.label = std::stoi(value);
          } else if (key == "n_taxels") {
            s.n_taxels = std::stoi(value);
            has_taxels = true;
          } else if (key == "duration_s") {
            s.duration_s = std::stod(value);
            has_duration = true;
          }
        } catch (const std::exception&) {
          throw ParseError(source, where + ": bad value for " + key);
        }
      }
      if (!has_taxels || !has_duration) {
        throw ParseError(source, where + ": stream header needs n_taxels and duration_s");
      }
      out.push_back(std::move(s));
      continue;
    }
    if (out.empty()) throw ParseError(source, where + ": event before stream header");
    std::istringstream ls(line);
    Event e;
    std::string pol;
    if (!(ls >> e.time_s >> e.taxel >> pol)) {
      throw ParseError(source, where + ": expected '<time_s> <taxel> <polarity>'");
    }
    if (pol == "ON" || pol == "0") {
      e.polarity = Polarity::kOn;
    } else if (pol == "OFF" || pol == "1") {
      e.polarity = Polarity::kOff;
    } else {
      throw ParseError(source, where + ": unknown polarity '" + pol + "'");
    }
    out.back().events.push_back(e);
  }
  for (const EventStream& s : out) {
    try {
      s.validate();
    } catch (const InvalidInput& err) {
      throw ParseError(source, err.what());
    }
  }
  return out;
}

void write_events_binary(std::ostream& os, const std::vector<EventStream>& streams) {
  binio::put_magic(os, kMagic);
  binio::put<std::uint32_t>(os, kVersion);
  binio::put<std::uint64_t>(os, streams.size());
  for (const EventStream& s : streams) {
    binio::put<std::int32_t>(os, s.label);
    binio::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.n_taxels));
    binio::put<double>(os, s.duration_s);
    binio::put<std::uint64_t>(os, s.events.size());
    for (const Event& e : s.events) {
      binio::put<double>(os, e.time_s);
      binio::put<std::uint16_t>(os, static_cast<std::uint16_t>(e.taxel));
      binio::put<std::uint8_t>(os, static_cast<std::uint8_t>(e.polarity));
    }
  }
}

std::vector<EventStream> read_events_binary(std::istream& is, const std::string& source) {
  binio::expect_magic(is, kMagic, source);
  auto version = binio::get<std::uint32_t>(is, source);
  if (version != kVersion) throw ParseError(source, "unsupported event file version");
  auto n_streams = binio::get<std::uint64_t>(is, source);
  std::vector<EventStream> out;
  for (std::uint64_t i = 0; i < n_streams; ++i) {
    EventStream s;
    s.label = binio::get<std::int32_t>(is, source);
    s.n_taxels = static_cast<int>(binio::get<std::uint32_t>(is, source));
    s.duration_s = binio::get<double>(is, source);
    auto n_events = binio::get<std::uint64_t>(is, source);
    s.events.reserve(n_events);
    for (std::uint64_t k = 0; k < n_events; ++k) {
      Event e;
      e.time_s = binio::get<double>(is, source);
      e.taxel = binio::get<std::uint16_t>(is, source);
      auto pol = binio::get<std::uint8_t>(is, source);
      if (pol > 1) throw ParseError(source, "bad polarity byte");
      e.polarity = static_cast<Polarity>(pol);
      s.events.push_back(e);
    }
    try {
      s.validate();
    } catch (const InvalidInput& err) {
      throw ParseError(source, err.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

void save_events(const std::string& path, const std::vector<EventStream>& streams) {
  const bool text = ends_with(path, ".txt");
  std::ofstream os(path, text ? std::ios::out : std::ios::out | std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  if (text) {
    write_events_text(os, streams);
  } else {
    write_events_binary(os, streams);
  }
}

std::vector<EventStream> load_events(const std::string& path) {
  const bool text = ends_with(path, ".txt");
  std::ifstream is(path, text ? std::ios::in : std::ios::in | std::ios::binary);
  if (!is) throw ParseError(path, "cannot open");
  return text ? read_events_text(is, path) : read_events_binary(is, path);
}

}  // namespace tactile
