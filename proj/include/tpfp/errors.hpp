// Copyright 2026 The tpfpu Authors
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

#ifndef TPFP_ERRORS_HPP
#define TPFP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tpfp {

/// Caller violated a precondition (width mismatch, bad format geometry...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested operation is not available in this format or configuration.
class UnsupportedOperation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A keyed table (energy, presets, formats) has no entry for the key.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Assembly or config text could not be parsed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace tpfp

#endif  // TPFP_ERRORS_HPP
