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

#include "tactile/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "binary_io.hpp"
#include "tactile/error.hpp"

namespace tactile {
namespace {

constexpr char kMagic[5] = "TBRD";
constexpr std::uint32_t kVersion = 1;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

DatasetFormat resolve(const std::string& path, DatasetFormat f) {
  if (f != DatasetFormat::kAuto) return f;
  return ends_with(path, ".csv") ? DatasetFormat::kCsv : DatasetFormat::kBinary;
}

std::string read_all(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError(path, "cannot open");
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::uint32_t crc32_of(const std::string& bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

Dataset parse_binary(const std::string& bytes, const std::string& path) {
  if (bytes.empty()) throw ParseError(path, "empty file");
  std::istringstream is(bytes);
  binio::expect_magic(is, kMagic, path);
  if (binio::get<std::uint32_t>(is, path) != kVersion) {
    throw ParseError(path, "unsupported dataset version");
  }
  Dataset ds;
  ds.sampling_rate_hz = binio::get<double>(is, path);
  auto n_classes = binio::get<std::uint32_t>(is, path);
  for (std::uint32_t i = 0; i < n_classes; ++i) {
    ds.class_names.push_back(binio::get_string(is, path));
  }
  auto n_samples = binio::get<std::uint32_t>(is, path);
  ds.samples.reserve(n_samples);
  for (std::uint32_t s = 0; s < n_samples; ++s) {
    FrameSequence seq;
    seq.label = binio::get<std::uint8_t>(is, path);
    int n_taxels = binio::get<std::uint16_t>(is, path);
    auto n_frames = binio::get<std::uint32_t>(is, path);
    std::string frames(static_cast<std::size_t>(n_taxels) * n_frames, '\0');
    if (!frames.empty() && !is.read(frames.data(), static_cast<std::streamsize>(frames.size()))) {
      throw ParseError(path, "truncated sample " + std::to_string(s));
    }
    seq.sampling_rate_hz = ds.sampling_rate_hz;
    seq.taxel_values.resize(n_taxels, n_frames);
    std::size_t k = 0;
    for (std::uint32_t f = 0; f < n_frames; ++f)
      for (int t = 0; t < n_taxels; ++t)
        seq.taxel_values(t, f) = static_cast<unsigned char>(frames[k++]);
    ds.samples.push_back(std::move(seq));
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw ParseError(path, "trailing bytes after last sample");
  }
  return ds;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ls(line);
  while (std::getline(ls, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  return out;
}

bool is_integer(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  return i < s.size() && std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                                     [](unsigned char c) { return std::isdigit(c); });
}

Dataset parse_csv(const std::string& bytes, const std::string& path, double rate) {
  std::istringstream is(bytes);
  std::string line;
  if (!std::getline(is, line) || line.empty()) throw ParseError(path, "empty file");
  auto header = split_csv(line);
  if (header.size() < 3 || header[0] != "sample" || header[1] != "label") {
    throw ParseError(path, "header must start with 'sample,label' and list taxel columns");
  }
  const std::size_t n_taxels = header.size() - 2;

  struct Raw {
    std::string id, label;
    std::vector<std::vector<double>> frames;
  };
  std::vector<Raw> raws;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv(line);
    if (f.size() != header.size()) {
      throw ParseError(path, "line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(header.size()) + " fields");
    }
    if (raws.empty() || raws.back().id != f[0]) {
      raws.push_back({f[0], f[1], {}});
    } else if (raws.back().label != f[1]) {
      throw ParseError(path, "line " + std::to_string(line_no) + ": label changes within sample");
    }
    std::vector<double> frame(n_taxels);
    for (std::size_t t = 0; t < n_taxels; ++t) {
      try {
        std::size_t used = 0;
        frame[t] = std::stod(f[t + 2], &used);
        if (used != f[t + 2].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(path, "line " + std::to_string(line_no) + ": bad value '" +
                                   f[t + 2] + "'");
      }
    }
    raws.back().frames.push_back(std::move(frame));
  }
  if (raws.empty()) throw ParseError(path, "no samples");

  Dataset ds;
  ds.sampling_rate_hz = rate;
  const bool numeric = std::all_of(raws.begin(), raws.end(),
                                   [](const Raw& r) { return is_integer(r.label); });
  std::map<std::string, int> index;
  if (numeric) {
    int max_label = 0;
    for (const Raw& r : raws) max_label = std::max(max_label, std::stoi(r.label));
    for (int c = 0; c <= max_label; ++c) ds.class_names.push_back(std::to_string(c));
  } else {
    std::set<std::string> names;
    for (const Raw& r : raws) names.insert(r.label);
    for (const std::string& n : names) {
      index[n] = static_cast<int>(ds.class_names.size());
      ds.class_names.push_back(n);
    }
  }
  for (const Raw& r : raws) {
    FrameSequence seq;
    seq.sampling_rate_hz = rate;
    seq.label = numeric ? std::stoi(r.label) : index.at(r.label);
    seq.taxel_values.resize(static_cast<Eigen::Index>(n_taxels),
                            static_cast<Eigen::Index>(r.frames.size()));
    for (std::size_t f = 0; f < r.frames.size(); ++f)
      for (std::size_t t = 0; t < n_taxels; ++t)
        seq.taxel_values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(f)) =
            r.frames[f][t];
    ds.samples.push_back(std::move(seq));
  }
  return ds;
}

}  // namespace

void Dataset::validate() const {
  if (samples.empty()) throw InvalidInput("dataset has no samples");
  const int taxels = samples.front().n_taxels();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const FrameSequence& s = samples[i];
    const std::string where = "sample " + std::to_string(i) + ": ";
    if (s.n_taxels() != taxels) throw InvalidInput(where + "inconsistent taxel count");
    if (s.n_frames() < 1) throw InvalidInput(where + "no frames");
    if (s.sampling_rate_hz != sampling_rate_hz) {
      throw InvalidInput(where + "inconsistent sampling rate");
    }
    if (s.label < 0 || s.label >= n_classes()) throw InvalidInput(where + "label out of range");
    if (!s.taxel_values.allFinite() || s.taxel_values.minCoeff() < 0.0 ||
        s.taxel_values.maxCoeff() > 255.0) {
      throw InvalidInput(where + "values outside [0, 255]");
    }
  }
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

Dataset load_dataset(const std::string& path, DatasetFormat format,
                     double csv_sampling_rate_hz) {
  const std::string bytes = read_all(path);
  Dataset ds = resolve(path, format) == DatasetFormat::kCsv
                   ? parse_csv(bytes, path, csv_sampling_rate_hz)
                   : parse_binary(bytes, path);
  try {
    ds.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(path, e.what());
  }
  ds.source = path;
  ds.checksum = crc32_of(bytes);
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& path, DatasetFormat format) {
  ds.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  if (resolve(path, format) == DatasetFormat::kCsv) {
    os << "sample,label";
    for (int t = 0; t < ds.n_taxels(); ++t) os << ",taxel_" << t;
    os << '\n';
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
      const FrameSequence& s = ds.samples[i];
      for (int f = 0; f < s.n_frames(); ++f) {
        os << i << ',' << s.label;
        for (int t = 0; t < s.n_taxels(); ++t) os << ',' << s.taxel_values(t, f);
        os << '\n';
      }
    }
    return;
  }
  binio::put_magic(os, kMagic);
  binio::put<std::uint32_t>(os, kVersion);
  binio::put<double>(os, ds.sampling_rate_hz);
  binio::put<std::uint32_t>(os, static_cast<std::uint32_t>(ds.class_names.size()));
  for (const auto& n : ds.class_names) binio::put_string(os, n);
  binio::put<std::uint32_t>(os, static_cast<std::uint32_t>(ds.samples.size()));
  for (const FrameSequence& s : ds.samples) {
    binio::put<std::uint8_t>(os, static_cast<std::uint8_t>(s.label));
    binio::put<std::uint16_t>(os, static_cast<std::uint16_t>(s.n_taxels()));
    binio::put<std::uint32_t>(os, static_cast<std::uint32_t>(s.n_frames()));
    for (int f = 0; f < s.n_frames(); ++f)
      for (int t = 0; t < s.n_taxels(); ++t)
        binio::put<std::uint8_t>(os, static_cast<std::uint8_t>(std::lround(s.taxel_values(t, f))));
  }
}

}  // namespace tactile
