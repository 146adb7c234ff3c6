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

// A small self-describing file of named, typed n-d datasets.
//
// Layout (little-endian): "TCNT", u32 version, u32 dataset count, then per
// dataset: u16 name length, name bytes, u8 dtype (1 = f64, 2 = i64), u8 rank,
// u64 extent per dimension, row-major payload. Datasets are written in name
// order so identical contents produce identical bytes.

#ifndef TACTILE_CONTAINER_HPP_
#define TACTILE_CONTAINER_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tactile {

class Container {
 public:
  using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

  void put(const std::string& name, double value);
  void put(const std::string& name, const Eigen::MatrixXd& m);
  void put_int(const std::string& name, std::int64_t value);
  void put_int(const std::string& name, const IntMatrix& m);

  bool contains(const std::string& name) const { return entries_.count(name) > 0; }
  std::vector<std::string> names() const;

  double get_scalar(const std::string& name) const;
  Eigen::MatrixXd get_matrix(const std::string& name) const;
  std::int64_t get_int(const std::string& name) const;
  IntMatrix get_int_matrix(const std::string& name) const;

  void write(std::ostream& os) const;
  static Container read(std::istream& is, const std::string& source = "<stream>");
  void save(const std::string& path) const;
  static Container load(const std::string& path);

 private:
  enum class DType : std::uint8_t { kF64 = 1, kI64 = 2 };
  struct Entry {
    DType dtype = DType::kF64;
    std::vector<std::uint64_t> dims;
    std::vector<double> f64;
    std::vector<std::int64_t> i64;
  };
  const Entry& at(const std::string& name, DType want) const;

  std::map<std::string, Entry> entries_;
};

}  // namespace tactile

#endif  // TACTILE_CONTAINER_HPP_
