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

#ifndef BLOOMIER_SPARSE_FILTER_H_
#define BLOOMIER_SPARSE_FILTER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "bloomier/field.h"
#include "bloomier/hashing.h"
#include "bloomier/key_value.h"
#include "bloomier/packed_vector.h"

namespace bloomier {

struct SparseParams {
  size_t s = 2;           // nonzeros per equation, >= 2
  double epsilon = 0.05;  // table slack: q >= n (1 + epsilon)
  unsigned m_bits = 31;   // bits of the field prime p
  unsigned k = 8;         // value bits
  unsigned max_blocks = 64;
  unsigned max_rebuilds = 16;
};

void validate(const SparseParams& params);

// One candidate equation: (column, coefficient) pairs sorted by column,
// zero coefficients removed.
struct SparseRow {
  uint64_t key_id = 0;
  uint64_t block_index = 0;
  std::vector<std::pair<uint64_t, uint64_t>> entries;
};

// Writes coefficient[t] at column[t] for t = 0..s-1 in order, so a later
// member overwrites an earlier one that hashed to the same column.
SparseRow assemble_row(std::span<const uint64_t> coefficients,
                       std::span<const uint64_t> columns);

// Row for `key` under block B_j (coefficients in F_p, columns in [0, q)).
SparseRow assemble_row(std::string_view key, const HashBlock& block);

enum class AppendResult { kAccepted, kRejected };

// Rows of a growing n x q system kept in echelon form. Each stored row is
// reduced against every earlier pivot and normalized so its pivot entry is 1.
// Rows are stored sparsely; the elimination order is the plain row-by-row
// Gaussian elimination. Not safe for concurrent use (shared scratch space).
class EliminationState {
 public:
  EliminationState(uint64_t columns, const PrimeField& field);

  // Reduces `row` against the stored pivots. If anything survives, it is
  // installed as a new pivot row (rank + 1) together with the reduced
  // right-hand side.
  AppendResult try_append(const SparseRow& row, uint64_t rhs = 0);

  // Whether try_append would accept `row`; leaves the state unchanged.
  bool is_independent(const SparseRow& row) const;

  size_t rank() const { return pivots_.size(); }
  uint64_t columns() const { return columns_; }
  const PrimeField& field() const { return field_; }

  // Back-substitution through the stored rows; free columns are 0.
  std::vector<uint64_t> solve() const;

 private:
  struct PivotRow {
    uint64_t column;
    std::vector<std::pair<uint64_t, uint64_t>> entries;  // sorted, pivot entry 1
    uint64_t rhs;
  };

  // Reduces into scratch; returns the surviving entries and rhs.
  std::pair<std::vector<std::pair<uint64_t, uint64_t>>, uint64_t> reduce(
      const SparseRow& row, uint64_t rhs) const;

  static constexpr uint32_t kNoPivot = ~uint32_t{0};

  uint64_t columns_;
  PrimeField field_;
  std::vector<PivotRow> pivots_;
  std::vector<uint32_t> pivot_of_column_;
  mutable std::vector<uint64_t> scratch_;
  mutable std::vector<uint8_t> touched_mark_;
};

// Diagnostics from one table construction.
struct SparseBuildInfo {
  std::vector<uint32_t> accepted_block;  // per key, index into the blocks
  uint64_t row_attempts = 0;
};

// Table g over F_p of length q, base hash h0 and r blocks of 2s functions.
// A key's value is h0(x) + sum_t h_t(x) g[h_{t+s}(x)] for the first block
// whose result lies below 2^k.
class SparseFilter {
 public:
  SparseFilter() = default;

  // One pass of the incremental construction. Throws InputError on bad
  // input, BuildFailure if some key exhausts params.max_blocks.
  static SparseFilter create_table(std::span<const KeyValue> pairs, const SparseParams& params,
                                   const FieldParams& field, uint64_t master_seed,
                                   SparseBuildInfo* info = nullptr);

  // An empty filter (no table, no blocks): every query is ⊥.
  static SparseFilter empty(unsigned k, size_t s, unsigned m_bits);

  static SparseFilter from_parts(uint64_t n, uint64_t q, uint64_t p, unsigned m_bits,
                                 unsigned k, size_t s, uint64_t seed, uint64_t blocks,
                                 PackedVector table);

  QueryResult query(std::string_view key) const;

  // h0(x) + sum over block j's assembled row, in F_p.
  uint64_t evaluate(std::string_view key, size_t block) const;

  uint64_t size() const { return n_; }
  uint64_t table_length() const { return q_; }
  uint64_t prime() const { return p_; }
  unsigned m_bits() const { return m_bits_; }
  unsigned value_bits() const { return k_; }
  size_t s() const { return s_; }
  uint64_t seed() const { return seed_; }
  size_t block_count() const { return blocks_.size(); }
  const HashBlock& block(size_t j) const { return blocks_[j]; }
  const PackedVector& table() const { return table_; }

 private:
  void init_hashes(uint64_t block_count);

  uint64_t n_ = 0;
  uint64_t q_ = 0;
  uint64_t p_ = 0;
  unsigned m_bits_ = 0;
  unsigned k_ = 1;
  size_t s_ = 2;
  uint64_t seed_ = 0;
  KeyedHash h0_;
  std::vector<HashBlock> blocks_;
  PackedVector table_;
};

// A SparseFilter checked to answer every stored key correctly.
class VerifiedSparseFilter {
 public:
  VerifiedSparseFilter() = default;
  VerifiedSparseFilter(SparseFilter filter, uint32_t iterations)
      : filter_(std::move(filter)), iterations_(iterations) {}

  QueryResult query(std::string_view key) const { return filter_.query(key); }
  const SparseFilter& filter() const { return filter_; }
  // Number of create_table passes run, >= 1 (0 for the empty filter).
  uint32_t iterations() const { return iterations_; }

 private:
  SparseFilter filter_;
  uint32_t iterations_ = 0;
};

// Smallest m_bits for which n 2^k / p <= 1/2 is guaranteed.
unsigned min_verified_m_bits(uint64_t n, unsigned k);

// Runs create_table with fresh hash seeds until every stored key queries
// correctly. Field parameters come from setup_params unless supplied.
VerifiedSparseFilter build_verified(std::span<const KeyValue> pairs, const SparseParams& params,
                                    uint64_t master_seed);
VerifiedSparseFilter build_verified(std::span<const KeyValue> pairs, const SparseParams& params,
                                    const FieldParams& field, uint64_t master_seed);

}  // namespace bloomier

#endif  // BLOOMIER_SPARSE_FILTER_H_
