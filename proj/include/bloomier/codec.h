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

#ifndef BLOOMIER_CODEC_H_
#define BLOOMIER_CODEC_H_

// Filter image layout (all integers little-endian):
//
//   bytes 0..3   magic "BLF1"
//   byte  4      version (1)
//   byte  5      scheme: 1 graph, 2 sparse, 3 bucketed
//   bytes 6..77  nine u64 header fields:
//                n, table_len, modulus, q, k, s, seed, aux, count
//   payload
//
// graph:    table_len = vertex count, modulus = m, q = 0, s = 0,
//           aux = accepted attempt index, count = 0;
//           payload = table_len entries of ceil(log2 m) bits.
// sparse:   table_len = q, modulus = p, aux = m_bits, count = blocks r;
//           payload = q entries of m_bits bits.
// bucketed: table_len = total entries over all buckets, modulus = 0, q = 0,
//           seed = bucket hash seed, aux = m_bits, count = bucket count b;
//           payload = for each bucket, five u64 (n_i, q_i, p_i, seed_i, r_i)
//           followed by that bucket's q_i entries of m_bits bits.
//
// Entries are written most significant bit first, back to back, and every
// table is zero-padded to a byte boundary.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bloomier/bucketed_filter.h"
#include "bloomier/graph_filter.h"
#include "bloomier/key_value.h"
#include "bloomier/sparse_filter.h"

namespace bloomier {

inline constexpr char kFilterMagic[4] = {'B', 'L', 'F', '1'};
inline constexpr uint8_t kFilterVersion = 1;
inline constexpr size_t kHeaderBytes = 6 + 9 * 8;
inline constexpr size_t kBucketHeaderBytes = 5 * 8;

enum class Scheme : uint8_t { kGraph = 1, kSparse = 2, kBucketed = 3 };

using AnyFilter = std::variant<GraphFilter, SparseFilter, BucketedFilter>;

std::string encode(const GraphFilter& filter);
std::string encode(const SparseFilter& filter);
std::string encode(const BucketedFilter& filter);
std::string encode(const AnyFilter& filter);

// Throws FormatError (bad magic, version, truncation, inconsistent header)
// or UnsupportedScheme.
AnyFilter decode(std::string_view bytes);

QueryResult query(const AnyFilter& filter, std::string_view key);
Scheme scheme_of(const AnyFilter& filter);
const char* scheme_name(Scheme scheme);
uint64_t key_count(const AnyFilter& filter);

struct ImageSummary {
  Scheme scheme;
  uint64_t n = 0;
  uint64_t table_entries = 0;
  uint64_t table_bits = 0;   // sum of entries * width, before padding
  uint64_t payload_bytes = 0;
};

// Parses and validates the header and payload sizes without building a
// filter.
ImageSummary inspect(std::string_view bytes);

// Key/value corpora: UTF-8 text, one "key<TAB>value" per line, value a
// decimal integer below 2^k. Blank lines are skipped; a trailing '\r' is
// ignored. Throws InputError naming the line on malformed input or
// duplicate keys.
std::vector<KeyValue> read_tsv(std::istream& in, unsigned k);
void write_tsv(std::ostream& out, std::span<const KeyValue> pairs);

}  // namespace bloomier

#endif  // BLOOMIER_CODEC_H_
