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

#include "bloomier/corpus.h"

#include "bloomier/hashing.h"

namespace bloomier {

std::vector<KeyValue> synthetic_corpus(uint64_t n, unsigned k, uint64_t seed) {
  std::vector<KeyValue> pairs;
  pairs.reserve(n);
  const uint64_t range = value_limit(k);
  for (uint64_t i = 0; i < n; ++i) {
    const uint64_t r = derive_seed(seed, 0x636f72707573, i);
    pairs.push_back(KeyValue{"key_" + std::to_string(i), k >= 64 ? r : reduce_range(r, range)});
  }
  return pairs;
}

std::string probe_key(uint64_t seed, uint64_t i) {
  return "probe_" + std::to_string(seed) + "_" + std::to_string(i);
}

}  // namespace bloomier
