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

#include "tactile/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "tactile/error.hpp"

extern char** environ;

namespace tactile {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw InvalidInput("config key '" + key + "': '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double("list", item));
  }
  return out;
}

Config Config::parse(std::istream& is, const std::string& source) {
  Config c;
  c.source_ = source;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = line;
    // Comments start at '#' outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] == '"') quoted = !quoted;
      if (t[i] == '#' && !quoted) {
        t.resize(i);
        break;
      }
    }
    t = trim(t);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError(source, "line " + std::to_string(lineno) + ": bad section");
      section = lower(trim(t.substr(1, t.size() - 2)));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(source, "line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = lower(trim(t.substr(0, eq)));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ParseError(source, "line " + std::to_string(lineno) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
      value = value.substr(1, value.size() - 2);
    }
    c.values_[section.empty() ? key : section + "." + key] = value;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open config file");
  return parse(in, path);
}

void Config::apply_env(const std::string& prefix) {
  std::vector<std::string> entries;
  for (char** e = environ; e && *e; ++e) entries.emplace_back(*e);
  apply_env(entries, prefix);
}

void Config::apply_env(const std::vector<std::string>& entries, const std::string& prefix) {
  for (const std::string& e : entries) {
    if (e.compare(0, prefix.size(), prefix) != 0) continue;
    const auto eq = e.find('=');
    if (eq == std::string::npos || eq <= prefix.size()) continue;
    std::string key = lower(e.substr(prefix.size(), eq - prefix.size()));
    for (std::size_t p; (p = key.find("__")) != std::string::npos;) key.replace(p, 2, ".");
    values_[key] = e.substr(eq + 1);
  }
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_double(key, it->second);
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const double v = to_double(key, it->second);
  if (v != std::floor(v)) throw InvalidInput("config key '" + key + "' must be an integer");
  return static_cast<std::int64_t>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string v = lower(trim(it->second));
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InvalidInput("config key '" + key + "' must be a boolean");
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double_list(it->second);
}

std::vector<int> Config::get_ints(const std::string& key, const std::vector<int>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<int> out;
  for (double v : parse_double_list(it->second)) {
    if (v != std::floor(v)) throw InvalidInput("config key '" + key + "' must hold integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void Config::check_known(const std::set<std::string>& known) const {
  for (const auto& [k, v] : values_) {
    if (!known.count(k)) throw InvalidInput(source_ + ": unknown config key '" + k + "'");
  }
}

}  // namespace tactile
