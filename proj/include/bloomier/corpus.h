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

#ifndef BLOOMIER_CORPUS_H_
#define BLOOMIER_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "bloomier/key_value.h"

namespace bloomier {

// Keys "key_<i>" for i in [0, n) with values uniform in [0, 2^k), fully
// determined by `seed`.
std::vector<KeyValue> synthetic_corpus(uint64_t n, unsigned k, uint64_t seed);

// The i-th probe key of stream `seed`: "probe_<seed>_<i>". Never of the
// form produced by synthetic_corpus.
std::string probe_key(uint64_t seed, uint64_t i);

}  // namespace bloomier

#endif  // BLOOMIER_CORPUS_H_
