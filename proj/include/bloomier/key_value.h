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

#ifndef BLOOMIER_KEY_VALUE_H_
#define BLOOMIER_KEY_VALUE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace bloomier {

// One (x, f(x)) pair of the stored function. Keys are arbitrary bytes.
struct KeyValue {
  std::string key;
  uint64_t value = 0;

  friend bool operator==(const KeyValue&, const KeyValue&) = default;
};

// Query answer: a value in [0, 2^k), or std::nullopt for the ⊥ symbol.
using QueryResult = std::optional<uint64_t>;

// Throws InputError on duplicate keys or on values >= 2^k.
void check_pairs(std::span<const KeyValue> pairs, unsigned k);

inline uint64_t value_limit(unsigned k) {
  return k >= 64 ? ~uint64_t{0} : uint64_t{1} << k;
}

}  // namespace bloomier

#endif  // BLOOMIER_KEY_VALUE_H_
