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

#ifndef TACTILE_ERROR_HPP_
#define TACTILE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tactile {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data violates a documented precondition (out of range values,
// non-finite samples, inconsistent shapes).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A file could not be parsed. Carries the offending path.
class ParseError : public Error {
 public:
  ParseError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Fixed-point state left the representable accumulator range.
class SaturationError : public Error {
 public:
  using Error::Error;
};

// Failure inside an experiment stage; the message is prefixed with the stage.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

namespace detail {
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidInput(msg);
}
}  // namespace detail

}  // namespace tactile

#endif  // TACTILE_ERROR_HPP_
