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

// Key-value configuration files.
//
//   # comment
//   [train]              optional section; keys below become "train.<key>"
//   epochs = 100
//   thresholds = 1, 2, 5, 10
//   name = "quoted strings keep inner spaces"
//
// Environment variables named TACTILE_<KEY> override file values. The key is
// lower-cased and "__" maps to "." so TACTILE_TRAIN__EPOCHS sets
// train.epochs.

#ifndef TACTILE_CONFIG_HPP_
#define TACTILE_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace tactile {

inline constexpr const char* kEnvPrefix = "TACTILE_";

class Config {
 public:
  static Config parse(std::istream& is, const std::string& source = "<stream>");
  static Config load(const std::string& path);

  // Applies TACTILE_* variables from the process environment.
  void apply_env(const std::string& prefix = kEnvPrefix);
  // Same, from an explicit list of NAME=VALUE strings.
  void apply_env(const std::vector<std::string>& entries, const std::string& prefix = kEnvPrefix);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;

  // Throws InvalidInput naming the first key not in `known`.
  void check_known(const std::set<std::string>& known) const;

 private:
  std::map<std::string, std::string> values_;
  std::string source_ = "<config>";
};

std::vector<double> parse_double_list(const std::string& text);

}  // namespace tactile

#endif  // TACTILE_CONFIG_HPP_
