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

#include "bloomier/bucketed_filter.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "bloomier/error.h"

namespace bloomier {
namespace {

constexpr uint64_t kBucketHashStream = 0x62686173;  // "bhas"
constexpr uint64_t kBucketSeedStream = 0x62736564;  // "bsed"

}  // namespace

void validate(const BucketParams& params) {
  if (!(params.c_bucket > 1)) throw InputError("bucketing requires c_bucket > 1");
  if (!(params.delta > 2 * std::numbers::e - 1)) {
    throw InputError("bucketing requires delta > 2e - 1");
  }
  if (params.max_bucket_tries < 1) throw InputError("bucketing requires max_bucket_tries >= 1");
  validate(params.inner);
}

uint64_t bucket_count_for(uint64_t n, double c_bucket) {
  if (n < 2) return 1;
  const long double x = static_cast<long double>(n) /
                        (c_bucket * std::log2(static_cast<long double>(n)));
  return std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(x - 1e-9L * x)));
}

BucketedFilter BucketedFilter::build(std::span<const KeyValue> pairs, const BucketParams& params,
                                     uint64_t master_seed, BucketBuildInfo* info,
                                     unsigned threads) {
  validate(params);
  check_pairs(pairs, params.inner.k);
  const uint64_t n = pairs.size();
  const uint64_t b = bucket_count_for(n, params.c_bucket);
  const long double bound = (1.0L + params.delta) * static_cast<long double>(n) / b;

  BucketedFilter out;
  out.n_ = n;
  out.k_ = params.inner.k;
  out.s_ = params.inner.s;
  out.m_bits_ = params.inner.m_bits;

  std::vector<uint64_t> assignment(n);
  std::vector<uint64_t> histogram;
  uint32_t tries = 0;
  for (;; ++tries) {
    if (tries >= params.max_bucket_tries) {
      throw BuildFailure("bucketing: no bucket hash within the size bound after " +
                             std::to_string(params.max_bucket_tries) + " draws",
                         tries);
    }
    out.bucket_seed_ = derive_seed(master_seed, kBucketHashStream, tries);
    out.bucket_hash_ = KeyedHash(HashSpec{out.bucket_seed_, 0, b});
    histogram.assign(b, 0);
    for (uint64_t i = 0; i < n; ++i) {
      assignment[i] = out.bucket_hash_(pairs[i].key);
      ++histogram[assignment[i]];
    }
    const uint64_t largest = *std::max_element(histogram.begin(), histogram.end());
    if (static_cast<long double>(largest) <= bound) break;
  }

  const uint64_t largest = *std::max_element(histogram.begin(), histogram.end());
  if (params.inner.m_bits < min_verified_m_bits(largest, params.inner.k)) {
    throw InputError("bucketing: inner m_bits must be >= " +
                     std::to_string(min_verified_m_bits(largest, params.inner.k)) +
                     " for the largest bucket");
  }

  std::vector<std::vector<KeyValue>> members(b);
  for (uint64_t i = 0; i < b; ++i) members[i].reserve(histogram[i]);
  for (uint64_t i = 0; i < n; ++i) members[assignment[i]].push_back(pairs[i]);

  std::vector<VerifiedSparseFilter> built(b);
  std::vector<std::exception_ptr> errors(b);
  std::atomic<uint64_t> next{0};
  auto worker = [&] {
    for (uint64_t i = next++; i < b; i = next++) {
      try {
        built[i] = build_verified(members[i], params.inner,
                                  derive_seed(master_seed, kBucketSeedStream, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, b));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  for (uint64_t i = 0; i < b; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const BuildFailure& e) {
      throw BuildFailure("bucket " + std::to_string(i) + ": " + e.what(), e.attempts());
    }
  }

  out.buckets_.reserve(b);
  if (info) {
    info->bucket_hash_tries = tries + 1;
    info->histogram = histogram;
    info->size_bound = static_cast<double>(bound);
    info->iterations.clear();
  }
  for (auto& v : built) {
    if (info) info->iterations.push_back(v.iterations());
    out.buckets_.push_back(v.filter());
  }
  return out;
}

BucketedFilter BucketedFilter::from_parts(uint64_t n, unsigned k, size_t s, unsigned m_bits,
                                          uint64_t bucket_seed,
                                          std::vector<SparseFilter> buckets) {
  if (buckets.empty()) throw InputError("bucketed filter needs at least one bucket");
  uint64_t total = 0;
  for (const auto& f : buckets) {
    if (f.value_bits() != k || f.s() != s) {
      throw InputError("bucketed filter bucket parameters disagree");
    }
    total += f.size();
  }
  if (total != n) throw InputError("bucketed filter bucket sizes do not sum to n");
  BucketedFilter out;
  out.n_ = n;
  out.k_ = k;
  out.s_ = s;
  out.m_bits_ = m_bits;
  out.bucket_seed_ = bucket_seed;
  out.bucket_hash_ = KeyedHash(HashSpec{bucket_seed, 0, buckets.size()});
  out.buckets_ = std::move(buckets);
  return out;
}

QueryResult BucketedFilter::query(std::string_view key) const {
  return buckets_[bucket_of(key)].query(key);
}

uint64_t BucketedFilter::table_bits() const {
  uint64_t bits = 0;
  for (const auto& f : buckets_) bits += f.table().bit_size();
  return bits;
}

size_t BucketedFilter::max_block_count() const {
  size_t r = 0;
  for (const auto& f : buckets_) r = std::max(r, f.block_count());
  return r;
}

}  // namespace bloomier
