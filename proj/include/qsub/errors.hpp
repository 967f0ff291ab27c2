// Copyright 2026 The qsub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qsub {

/** Base class for every error raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** Operands have incompatible widths, arities or matrix shapes. */
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/** An argument violates a documented precondition (e.g. composite modulus). */
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/** A dense computation would exceed the configured dimension cap. */
class CapExceeded : public Error {
 public:
  CapExceeded(std::size_t requested, std::size_t cap)
      : Error(
            "dimension " + std::to_string(requested) + " exceeds cap " +
            std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}
  std::size_t requested() const { return requested_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

/** Malformed textual input. `line()` is 1-based, 0 when not line oriented. */
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(
            line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qsub
