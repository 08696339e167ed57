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

#include "bloomier/key_value.h"

#include <functional>
#include <limits>
#include <string_view>
#include <vector>

#include "bloomier/error.h"

namespace bloomier {

void check_pairs(std::span<const KeyValue> pairs, unsigned k) {
  const uint64_t limit = value_limit(k);
  for (const auto& [key, value] : pairs) {
    if (k < 64 && value >= limit) {
      throw InputError("value " + std::to_string(value) + " does not fit in " +
                       std::to_string(k) + " bits");
    }
  }
  if (pairs.size() >= std::numeric_limits<uint32_t>::max()) {
    throw UnsupportedSize("too many keys for one filter");
  }
  // Open addressing over key indices; slots hold index + 1, 0 is empty.
  size_t capacity = 16;
  while (capacity < 2 * pairs.size()) capacity *= 2;
  std::vector<uint32_t> slots(capacity, 0);
  const std::hash<std::string_view> hasher;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const std::string_view key = pairs[i].key;
    for (size_t at = hasher(key) & (capacity - 1);; at = (at + 1) & (capacity - 1)) {
      if (slots[at] == 0) {
        slots[at] = static_cast<uint32_t>(i + 1);
        break;
      }
      if (pairs[slots[at] - 1].key == key) throw InputError("duplicate key: " + pairs[i].key);
    }
  }
}

}  // namespace bloomier
