// Copyright 2026 The Bloomier Authors.
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

#ifndef BLOOMIER_ERROR_H_
#define BLOOMIER_ERROR_H_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace bloomier {

// Caller supplied parameters or data that violate a precondition
// (duplicate keys, out-of-range values, contradictory parameters).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A randomized construction ran out of its retry budget.
class BuildFailure : public std::runtime_error {
 public:
  BuildFailure(const std::string& what, uint64_t attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  uint64_t attempts() const { return attempts_; }

 private:
  uint64_t attempts_;
};

// Malformed serialized filter. `offset` is the byte position at which
// decoding stopped.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

class UnsupportedScheme : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive or trial-division routines refuse inputs above their budget.
class UnsupportedSize : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownKey : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace bloomier

#endif  // BLOOMIER_ERROR_H_
