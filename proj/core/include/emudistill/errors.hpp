// Copyright 2026 The emudistill Authors
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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace emudistill {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A state, channel or parameter set violates a physicality constraint.
class PhysicalityError : public Error {
  public:
    using Error::Error;
};

/// Invalid configuration: bad noise model, rule, grid, count, ...
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Ill-conditioned or undefined numerical result.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// File-level I/O failure (cannot open, cannot write).
class IoError : public Error {
  public:
    using Error::Error;
};

/// Malformed record or covariance file.
///
/// `record_index` is the zero-based index of the first record that could not be
/// decoded; `byte_offset` is its position in the file (or line number for text
/// formats, see `what()`).
class ParseError : public Error {
  public:
    ParseError(const std::string &message, std::uint64_t record_index, std::uint64_t byte_offset)
        : Error(message), record_index_(record_index), byte_offset_(byte_offset) {
    }
    std::uint64_t record_index() const noexcept {
        return record_index_;
    }
    std::uint64_t byte_offset() const noexcept {
        return byte_offset_;
    }

  private:
    std::uint64_t record_index_;
    std::uint64_t byte_offset_;
};

}  // namespace emudistill
