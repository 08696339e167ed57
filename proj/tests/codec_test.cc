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


#include "bloomier/codec.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bloomier/corpus.h"
#include "bloomier/error.h"
#include "bloomier/field.h"

namespace bloomier {
namespace {

std::vector<KeyValue> corpus(uint64_t n) { return synthetic_corpus(n, 8, n + 1); }

void expect_same_answers(const AnyFilter& a, const AnyFilter& b,
                         const std::vector<KeyValue>& pairs) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const std::string key = pairs.empty() || i % 2 ? probe_key(99, i)
                                                   : pairs[rng() % pairs.size()].key;
    ASSERT_EQ(query(a, key), query(b, key)) << key;
  }
}

uint64_t read_u64(const std::string& bytes, size_t at) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[at + i]);
  return v;
}

TEST(CodecTest, HeaderLayout) {
  const auto pairs = corpus(100);
  const GraphFilter f = GraphFilter::build(pairs, GraphParams{}, 7);
  const std::string bytes = encode(f);
  EXPECT_EQ(bytes.substr(0, 4), "BLF1");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 1);
  EXPECT_EQ(read_u64(bytes, 6), 100u);      // n
  EXPECT_EQ(read_u64(bytes, 14), 250u);     // table entries
  EXPECT_EQ(read_u64(bytes, 22), 65536u);   // modulus
  EXPECT_EQ(read_u64(bytes, 38), 8u);       // k
  EXPECT_EQ(read_u64(bytes, 54), 7u);       // seed
  EXPECT_EQ(bytes.size(), kHeaderBytes + 500);
  const ImageSummary summary = inspect(bytes);
  EXPECT_EQ(summary.scheme, Scheme::kGraph);
  EXPECT_EQ(summary.table_bits, 4000u);
  EXPECT_EQ(summary.payload_bytes, 500u);
}

TEST(CodecTest, PackingIsMostSignificantBitFirst) {
  PackedVector table(3, 3);
  table.set(0, 5);
  table.set(1, 1);
  table.set(2, 7);
  const GraphFilter f = GraphFilter::from_parts(1, 3, 8, 1, 0, 0, table);
  const std::string bytes = encode(f);
  ASSERT_EQ(bytes.size(), kHeaderBytes + 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[kHeaderBytes]), 0xA7);
  EXPECT_EQ(static_cast<unsigned char>(bytes[kHeaderBytes + 1]), 0x80);
  const auto decoded = std::get<GraphFilter>(decode(bytes));
  EXPECT_EQ(decoded.table(), table);
}

TEST(CodecTest, Deterministic) {
  const auto pairs = corpus(300);
  EXPECT_EQ(encode(GraphFilter::build(pairs, GraphParams{}, 1)),
            encode(GraphFilter::build(pairs, GraphParams{}, 1)));
  EXPECT_EQ(encode(build_verified(pairs, SparseParams{}, 1).filter()),
            encode(build_verified(pairs, SparseParams{}, 1).filter()));
}

TEST(CodecTest, EmptyImagesAreHeaderOnly) {
  const std::string graph = encode(GraphFilter::build({}, GraphParams{}, 1));
  EXPECT_EQ(graph.size(), kHeaderBytes);
  const std::string sparse = encode(build_verified({}, SparseParams{}, 1).filter());
  EXPECT_EQ(sparse.size(), kHeaderBytes);
  EXPECT_EQ(inspect(sparse).table_bits, 0u);
  for (const auto& bytes : {graph, sparse}) {
    const AnyFilter f = decode(bytes);
    EXPECT_EQ(key_count(f), 0u);
    EXPECT_EQ(encode(f), bytes);
  }
}

TEST(CodecTest, RoundTripAllSchemes) {
  for (uint64_t n : {0, 1, 1000}) {
    const auto pairs = corpus(n);
    const std::vector<AnyFilter> filters{
        GraphFilter::build(pairs, GraphParams{}, n),
        build_verified(pairs, SparseParams{}, n).filter(),
        BucketedFilter::build(pairs, BucketParams{}, n),
    };
    for (const AnyFilter& f : filters) {
      const std::string bytes = encode(f);
      const AnyFilter back = decode(bytes);
      EXPECT_EQ(scheme_of(back), scheme_of(f));
      EXPECT_EQ(key_count(back), n);
      EXPECT_EQ(encode(back), bytes);
      expect_same_answers(f, back, pairs);
      for (const auto& kv : pairs) ASSERT_EQ(query(back, kv.key), QueryResult(kv.value));
      EXPECT_EQ(inspect(bytes).scheme, scheme_of(f));
    }
  }
}

TEST(CodecTest, RoundTripRandomParameters) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const uint64_t n = 1 + rng() % 400;
    const unsigned k = 1 + rng() % 16;
    const auto pairs = synthetic_corpus(n, k, rng());
    GraphParams gp{2.1 + (rng() % 100) / 50.0, (uint64_t{1} << k) + rng() % 100000, k, 64, {}};
    SparseParams sp;
    sp.k = k;
    sp.s = 2 + rng() % 2;
    sp.m_bits = 40 + rng() % 20;
    sp.epsilon = 0.05 + (rng() % 10) / 20.0;
    BucketParams bp;
    bp.inner = sp;
    const std::vector<AnyFilter> filters{GraphFilter::build(pairs, gp, trial),
                                         build_verified(pairs, sp, trial).filter(),
                                         BucketedFilter::build(pairs, bp, trial)};
    for (const AnyFilter& f : filters) {
      const std::string bytes = encode(f);
      expect_same_answers(f, decode(bytes), pairs);
    }
    const uint64_t expected_bits =
        static_cast<uint64_t>(std::ceil(gp.c * n)) * bits_for_modulus(gp.m);
    EXPECT_EQ(inspect(encode(filters[0])).table_bits, expected_bits);
  }
}

TEST(CodecTest, RejectsMalformedImages) {
  const auto pairs = corpus(50);
  const std::string good = encode(build_verified(pairs, SparseParams{}, 3).filter());
  EXPECT_THROW(decode(good.substr(0, 3)), FormatError);
  EXPECT_THROW(decode(good.substr(0, kHeaderBytes - 1)), FormatError);
  EXPECT_THROW(decode(good.substr(0, good.size() - 1)), FormatError);
  EXPECT_THROW(decode(good + "x"), FormatError);

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode(bad_magic), FormatError);
  std::string bad_version = good;
  bad_version[4] = 9;
  EXPECT_THROW(decode(bad_version), FormatError);
  std::string bad_scheme = good;
  bad_scheme[5] = 7;
  EXPECT_THROW(decode(bad_scheme), UnsupportedScheme);

  // An absurd table length must fail cleanly instead of allocating.
  std::string huge = good;
  for (int i = 0; i < 8; ++i) huge[14 + i] = static_cast<char>(0xFF);
  EXPECT_THROW(decode(huge), FormatError);
  EXPECT_THROW(inspect(huge), FormatError);

  try {
    decode(bad_magic);
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(CodecTest, RejectsUnreducedEntries) {
  const auto pairs = corpus(20);
  std::string bytes = encode(build_verified(pairs, SparseParams{}, 3).filter());
  // Set the first 31-bit entry to all ones, which is at least p.
  bytes[kHeaderBytes] = static_cast<char>(0xFF);
  bytes[kHeaderBytes + 1] = static_cast<char>(0xFF);
  bytes[kHeaderBytes + 2] = static_cast<char>(0xFF);
  bytes[kHeaderBytes + 3] = static_cast<char>(bytes[kHeaderBytes + 3] | 0xFE);
  EXPECT_THROW(decode(bytes), FormatError);
}

TEST(TsvTest, Parses) {
  std::istringstream in("alpha\t1\r\n\nbeta\t255\ngamma with space\t0\n");
  const auto pairs = read_tsv(in, 8);
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0], (KeyValue{"alpha", 1}));
  EXPECT_EQ(pairs[1], (KeyValue{"beta", 255}));
  EXPECT_EQ(pairs[2], (KeyValue{"gamma with space", 0}));
  std::ostringstream out;
  write_tsv(out, pairs);
  std::istringstream again(out.str());
  EXPECT_EQ(read_tsv(again, 8), pairs);
}

TEST(TsvTest, ErrorsNameTheLine) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"a\t1\nb 2\n", "line 2"},
      {"a\t1\na\t2\n", "line 2"},
      {"a\t256\n", "line 1"},
      {"a\t-1\n", "line 1"},
      {"a\t\n", "line 1"},
      {"\n\na\t1x\n", "line 3"},
  };
  for (const auto& [text, where] : cases) {
    std::istringstream in(text);
    try {
      read_tsv(in, 8);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const InputError& e) {
      EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
    }
  }
}

}  // namespace
}  // namespace bloomier
