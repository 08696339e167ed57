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

#ifndef BLOOMIER_BUCKETED_FILTER_H_
#define BLOOMIER_BUCKETED_FILTER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bloomier/hashing.h"
#include "bloomier/key_value.h"
#include "bloomier/sparse_filter.h"

namespace bloomier {

struct BucketParams {
  double c_bucket = 4.0;  // average bucket holds c_bucket log2(n) keys, > 1
  double delta = 5.0;     // size slack, > 2e - 1
  SparseParams inner;
  unsigned max_bucket_tries = 16;
};

void validate(const BucketParams& params);

// max(1, ceil(n / (c_bucket log2 n))); 1 for n < 2.
uint64_t bucket_count_for(uint64_t n, double c_bucket);

struct BucketBuildInfo {
  uint32_t bucket_hash_tries = 0;           // draws of the bucket hash, >= 1
  std::vector<uint64_t> histogram;          // keys per bucket at acceptance
  double size_bound = 0;                    // (1 + delta) n / b
  std::vector<uint32_t> iterations;         // verified-build passes per bucket
};

// Keys are split by a hash into b buckets, each holding its own
// VerifiedSparseFilter with its own field parameters.
class BucketedFilter {
 public:
  BucketedFilter() = default;

  // Buckets are built on up to `threads` worker threads; the result does not
  // depend on the thread count. Throws BuildFailure if no bucket hash meets
  // the size bound within max_bucket_tries, or if a bucket build fails (the
  // message names the bucket).
  static BucketedFilter build(std::span<const KeyValue> pairs, const BucketParams& params,
                              uint64_t master_seed, BucketBuildInfo* info = nullptr,
                              unsigned threads = 1);

  static BucketedFilter from_parts(uint64_t n, unsigned k, size_t s, unsigned m_bits,
                                   uint64_t bucket_seed, std::vector<SparseFilter> buckets);

  QueryResult query(std::string_view key) const;
  size_t bucket_of(std::string_view key) const { return bucket_hash_(key); }

  uint64_t size() const { return n_; }
  unsigned value_bits() const { return k_; }
  size_t s() const { return s_; }
  unsigned m_bits() const { return m_bits_; }
  uint64_t bucket_seed() const { return bucket_seed_; }
  size_t bucket_count() const { return buckets_.size(); }
  const SparseFilter& bucket(size_t i) const { return buckets_[i]; }
  // Sum of all per-bucket table bits.
  uint64_t table_bits() const;
  // Largest block count over all buckets.
  size_t max_block_count() const;

 private:
  uint64_t n_ = 0;
  unsigned k_ = 1;
  size_t s_ = 2;
  unsigned m_bits_ = 0;
  uint64_t bucket_seed_ = 0;
  KeyedHash bucket_hash_;
  std::vector<SparseFilter> buckets_;
};

}  // namespace bloomier

#endif  // BLOOMIER_BUCKETED_FILTER_H_
