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

#ifndef BLOOMIER_HASHING_H_
#define BLOOMIER_HASHING_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bloomier {

// Identifies one member of the seeded hash family: the function indexed by
// `function_index` under `master_seed`, reduced to {0, ..., range - 1}.
struct HashSpec {
  uint64_t master_seed = 0;
  uint32_t function_index = 0;
  uint64_t range = 1;

  friend bool operator==(const HashSpec&, const HashSpec&) = default;
};

// A HashSpec with its SipHash-2-4 key material expanded once. The key is
// derived by mixing (master_seed, function_index); evaluation then depends
// only on the key bytes and the range.
class KeyedHash {
 public:
  KeyedHash() = default;
  // Throws InputError if spec.range == 0.
  explicit KeyedHash(const HashSpec& spec);

  uint64_t operator()(std::string_view key) const;
  // Full 64-bit output before range reduction.
  uint64_t raw(std::string_view key) const;

  const HashSpec& spec() const { return spec_; }
  uint64_t range() const { return spec_.range; }

 private:
  HashSpec spec_;
  std::array<unsigned char, 16> key_{};
};

uint64_t hash_key(const HashSpec& spec, std::string_view key);

// Multiply-shift reduction floor(h * range / 2^64).
inline uint64_t reduce_range(uint64_t h, uint64_t range) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(h) * range) >> 64);
}

// Little-endian 8-byte encoding used for integer keys.
std::string encode_u64_key(uint64_t value);

uint64_t splitmix64(uint64_t x);

// Derives an independent 64-bit seed from a parent seed and a stream label.
// Used for per-attempt, per-rebuild and per-bucket seeds.
uint64_t derive_seed(uint64_t parent, uint64_t stream, uint64_t index);

// One block B_j of 2s functions. Members [0, s) produce coefficients
// (range = field modulus), members [s, 2s) produce columns (range = table
// length). Function index 0 is left for the block-independent h0.
struct HashBlock {
  uint64_t block_index = 0;
  std::vector<KeyedHash> members;

  size_t s() const { return members.size() / 2; }
  const KeyedHash& coefficient(size_t t) const { return members[t]; }
  const KeyedHash& column(size_t t) const { return members[s() + t]; }
};

HashBlock derive_block(uint64_t master_seed, uint64_t block_index, size_t s,
                       uint64_t coefficient_range, uint64_t column_range);

}  // namespace bloomier

#endif  // BLOOMIER_HASHING_H_
