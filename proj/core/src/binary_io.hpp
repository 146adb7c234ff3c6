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

// Little-endian scalar reads/writes on iostreams. Internal to the library.

#ifndef TACTILE_SRC_BINARY_IO_HPP_
#define TACTILE_SRC_BINARY_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "tactile/error.hpp"

namespace tactile::binio {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

template <typename T>
void put(std::ostream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  os.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& is, const std::string& path) {
  static_assert(std::is_trivially_copyable_v<T>);
  char buf[sizeof(T)];
  if (!is.read(buf, sizeof(T))) throw ParseError(path, "unexpected end of file");
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

inline void put_magic(std::ostream& os, const char (&magic)[5]) { os.write(magic, 4); }

inline void expect_magic(std::istream& is, const char (&magic)[5], const std::string& path) {
  char buf[4];
  if (!is.read(buf, 4)) throw ParseError(path, "file too short for header");
  if (std::memcmp(buf, magic, 4) != 0) {
    throw ParseError(path, std::string("bad magic, expected ") + magic);
  }
}

inline void put_string(std::ostream& os, const std::string& s) {
  put<std::uint16_t>(os, static_cast<std::uint16_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string get_string(std::istream& is, const std::string& path) {
  auto n = get<std::uint16_t>(is, path);
  std::string s(n, '\0');
  if (n > 0 && !is.read(s.data(), n)) throw ParseError(path, "truncated string");
  return s;
}

}  // namespace tactile::binio

#endif  // TACTILE_SRC_BINARY_IO_HPP_
