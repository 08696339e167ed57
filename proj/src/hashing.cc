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

#include "bloomier/hashing.h"

#include <sodium.h>

#include <limits>

#include "bloomier/error.h"

namespace bloomier {
namespace {

void store_le64(unsigned char* out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

uint64_t load_le64(const unsigned char* in) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in[i];
  return v;
}

}  // namespace

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t parent, uint64_t stream, uint64_t index) {
  return splitmix64(splitmix64(parent ^ splitmix64(stream)) + index);
}

KeyedHash::KeyedHash(const HashSpec& spec) : spec_(spec) {
  if (spec.range == 0) throw InputError("hash range must be positive");
  const uint64_t k0 = splitmix64(spec.master_seed ^ 0x6a09e667f3bcc908ULL);
  const uint64_t k1 =
      splitmix64(k0 + (static_cast<uint64_t>(spec.function_index) << 1 | 1));
  store_le64(key_.data(), splitmix64(k0 ^ k1));
  store_le64(key_.data() + 8, k1);
}

uint64_t KeyedHash::raw(std::string_view key) const {
  unsigned char out[crypto_shorthash_siphash24_BYTES];
  crypto_shorthash_siphash24(out, reinterpret_cast<const unsigned char*>(key.data()),
                             key.size(), key_.data());
  return load_le64(out);
}

uint64_t KeyedHash::operator()(std::string_view key) const {
  return reduce_range(raw(key), spec_.range);
}

uint64_t hash_key(const HashSpec& spec, std::string_view key) {
  return KeyedHash(spec)(key);
}

std::string encode_u64_key(uint64_t value) {
  std::string out(8, '\0');
  store_le64(reinterpret_cast<unsigned char*>(out.data()), value);
  return out;
}

HashBlock derive_block(uint64_t master_seed, uint64_t block_index, size_t s,
                       uint64_t coefficient_range, uint64_t column_range) {
  if (s == 0) throw InputError("hash block needs s >= 1");
  const uint64_t first = 1 + 2 * s * block_index;
  if (first + 2 * s - 1 > std::numeric_limits<uint32_t>::max()) {
    throw InputError("hash block index out of range");
  }
  HashBlock block;
  block.block_index = block_index;
  block.members.reserve(2 * s);
  for (size_t t = 0; t < 2 * s; ++t) {
    const uint64_t range = t < s ? coefficient_range : column_range;
    block.members.emplace_back(
        HashSpec{master_seed, static_cast<uint32_t>(first + t), range});
  }
  return block;
}

}  // namespace bloomier
