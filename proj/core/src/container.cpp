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

#include "tactile/container.hpp"

#include <fstream>

#include "binary_io.hpp"
#include "tactile/error.hpp"

namespace tactile {
namespace {
constexpr char kMagic[5] = "TCNT";
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 32;
}  // namespace

void Container::put(const std::string& name, double value) {
  Entry e;
  e.dtype = DType::kF64;
  e.f64 = {value};
  entries_[name] = std::move(e);
}

void Container::put(const std::string& name, const Eigen::MatrixXd& m) {
  Entry e;
  e.dtype = DType::kF64;
  e.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  e.f64.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) e.f64.push_back(m(r, c));
  entries_[name] = std::move(e);
}

void Container::put_int(const std::string& name, std::int64_t value) {
  Entry e;
  e.dtype = DType::kI64;
  e.i64 = {value};
  entries_[name] = std::move(e);
}

void Container::put_int(const std::string& name, const IntMatrix& m) {
  Entry e;
  e.dtype = DType::kI64;
  e.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  e.i64.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) e.i64.push_back(m(r, c));
  entries_[name] = std::move(e);
}

std::vector<std::string> Container::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

const Container::Entry& Container::at(const std::string& name, DType want) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw InvalidInput("container has no dataset '" + name + "'");
  if (it->second.dtype != want) {
    throw InvalidInput("dataset '" + name + "' has unexpected type");
  }
  return it->second;
}

double Container::get_scalar(const std::string& name) const {
  const Entry& e = at(name, DType::kF64);
  if (!e.dims.empty() || e.f64.size() != 1) {
    throw InvalidInput("dataset '" + name + "' is not a scalar");
  }
  return e.f64[0];
}

Eigen::MatrixXd Container::get_matrix(const std::string& name) const {
  const Entry& e = at(name, DType::kF64);
  if (e.dims.size() != 2) throw InvalidInput("dataset '" + name + "' is not a matrix");
  Eigen::MatrixXd m(e.dims[0], e.dims[1]);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = e.f64[k++];
  return m;
}

std::int64_t Container::get_int(const std::string& name) const {
  const Entry& e = at(name, DType::kI64);
  if (!e.dims.empty() || e.i64.size() != 1) {
    throw InvalidInput("dataset '" + name + "' is not a scalar");
  }
  return e.i64[0];
}

Container::IntMatrix Container::get_int_matrix(const std::string& name) const {
  const Entry& e = at(name, DType::kI64);
  if (e.dims.size() != 2) throw InvalidInput("dataset '" + name + "' is not a matrix");
  IntMatrix m(e.dims[0], e.dims[1]);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = e.i64[k++];
  return m;
}

void Container::write(std::ostream& os) const {
  binio::put_magic(os, kMagic);
  binio::put<std::uint32_t>(os, kVersion);
  binio::put<std::uint32_t>(os, static_cast<std::uint32_t>(entries_.size()));
  for (const auto& [name, e] : entries_) {
    binio::put_string(os, name);
    binio::put<std::uint8_t>(os, static_cast<std::uint8_t>(e.dtype));
    binio::put<std::uint8_t>(os, static_cast<std::uint8_t>(e.dims.size()));
    for (std::uint64_t d : e.dims) binio::put<std::uint64_t>(os, d);
    if (e.dtype == DType::kF64) {
      for (double v : e.f64) binio::put<double>(os, v);
    } else {
      for (std::int64_t v : e.i64) binio::put<std::int64_t>(os, v);
    }
  }
}

Container Container::read(std::istream& is, const std::string& source) {
  binio::expect_magic(is, kMagic, source);
  if (binio::get<std::uint32_t>(is, source) != kVersion) {
    throw ParseError(source, "unsupported container version");
  }
  Container c;
  auto n = binio::get<std::uint32_t>(is, source);
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string name = binio::get_string(is, source);
    Entry e;
    auto dtype = binio::get<std::uint8_t>(is, source);
    if (dtype != 1 && dtype != 2) throw ParseError(source, "unknown dtype for " + name);
    e.dtype = static_cast<DType>(dtype);
    auto rank = binio::get<std::uint8_t>(is, source);
    std::uint64_t count = 1;
    for (int d = 0; d < rank; ++d) {
      e.dims.push_back(binio::get<std::uint64_t>(is, source));
      count *= e.dims.back();
      if (count > kMaxElements) throw ParseError(source, "dataset too large: " + name);
    }
    if (e.dtype == DType::kF64) {
      e.f64.resize(count);
      for (auto& v : e.f64) v = binio::get<double>(is, source);
    } else {
      e.i64.resize(count);
      for (auto& v : e.i64) v = binio::get<std::int64_t>(is, source);
    }
    c.entries_[name] = std::move(e);
  }
  return c;
}

void Container::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  write(os);
}

Container Container::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError(path, "cannot open");
  return read(is, path);
}

}  // namespace tactile
