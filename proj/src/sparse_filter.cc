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

#include "bloomier/sparse_filter.h"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <queue>
#include <string>

#include "bloomier/error.h"

namespace bloomier {
namespace {

constexpr uint32_t kH0Index = 0;
constexpr uint64_t kFieldStream = 0x6669656c64;    // "field"
constexpr uint64_t kRebuildStream = 0x7265627569;  // "rebui"
constexpr uint64_t kMaxBlocks = uint64_t{1} << 20;

}  // namespace

void validate(const SparseParams& params) {
  if (params.s < 2) throw InputError("sparse filter requires s >= 2");
  if (!(params.epsilon > 0)) throw InputError("sparse filter requires epsilon > 0");
  if (params.k < 1) throw InputError("sparse filter requires k >= 1");
  if (params.m_bits < params.k) throw InputError("sparse filter requires m_bits >= k");
  if (params.m_bits < 2 || params.m_bits > 63) {
    throw InputError("sparse filter requires m_bits in [2, 63]");
  }
  if (params.max_blocks < 1 || params.max_blocks > kMaxBlocks) {
    throw InputError("sparse filter max_blocks out of range");
  }
  if (params.max_rebuilds < 1) throw InputError("sparse filter requires max_rebuilds >= 1");
}

SparseRow assemble_row(std::span<const uint64_t> coefficients,
                       std::span<const uint64_t> columns) {
  SparseRow row;
  const size_t s = std::min(coefficients.size(), columns.size());
  for (size_t t = 0; t < s; ++t) {
    auto it = std::find_if(row.entries.begin(), row.entries.end(),
                           [&](const auto& e) { return e.first == columns[t]; });
    if (it != row.entries.end()) {
      it->second = coefficients[t];
    } else {
      row.entries.emplace_back(columns[t], coefficients[t]);
    }
  }
  std::erase_if(row.entries, [](const auto& e) { return e.second == 0; });
  std::sort(row.entries.begin(), row.entries.end());
  return row;
}

SparseRow assemble_row(std::string_view key, const HashBlock& block) {
  const size_t s = block.s();
  std::vector<uint64_t> coefficients(s), columns(s);
  for (size_t t = 0; t < s; ++t) {
    coefficients[t] = block.coefficient(t)(key);
    columns[t] = block.column(t)(key);
  }
  SparseRow row = assemble_row(coefficients, columns);
  row.block_index = block.block_index;
  return row;
}

// --- EliminationState -----------------------------------------------------

EliminationState::EliminationState(uint64_t columns, const PrimeField& field)
    : columns_(columns),
      field_(field),
      pivot_of_column_(columns, kNoPivot),
      scratch_(columns, 0),
      touched_mark_(columns, 0) {}

std::pair<std::vector<std::pair<uint64_t, uint64_t>>, uint64_t> EliminationState::reduce(
    const SparseRow& row, uint64_t rhs) const {
  auto& acc = scratch_;
  auto& mark = touched_mark_;
  std::vector<uint64_t> touched;
  auto touch = [&](uint64_t c) {
    if (!mark[c]) {
      mark[c] = 1;
      touched.push_back(c);
    }
  };
  // Stored row i is zero on the pivot columns of rows 0..i-1, so eliminating
  // in increasing pivot order never reintroduces an already cleared pivot.
  std::priority_queue<uint32_t, std::vector<uint32_t>, std::greater<>> pending;
  for (const auto& [c, v] : row.entries) {
    if (c >= columns_) throw InputError("sparse row column out of range");
    touch(c);
    acc[c] = field_.add(acc[c], field_.reduce(v));
    if (pivot_of_column_[c] != kNoPivot) pending.push(pivot_of_column_[c]);
  }
  rhs = field_.reduce(rhs);
  uint32_t last = kNoPivot;
  while (!pending.empty()) {
    const uint32_t pi = pending.top();
    pending.pop();
    if (pi == last) continue;
    last = pi;
    const PivotRow& pivot = pivots_[pi];
    const uint64_t factor = acc[pivot.column];
    if (factor == 0) continue;
    for (const auto& [c, v] : pivot.entries) {
      touch(c);
      acc[c] = field_.sub(acc[c], field_.mul(factor, v));
      const uint32_t other = pivot_of_column_[c];
      if (other != kNoPivot && other != pi && acc[c] != 0) pending.push(other);
    }
    rhs = field_.sub(rhs, field_.mul(factor, pivot.rhs));
  }

  std::sort(touched.begin(), touched.end());
  std::vector<std::pair<uint64_t, uint64_t>> survivors;
  for (uint64_t c : touched) {
    if (acc[c] != 0) survivors.emplace_back(c, acc[c]);
    acc[c] = 0;
    mark[c] = 0;
  }
  return {std::move(survivors), rhs};
}

bool EliminationState::is_independent(const SparseRow& row) const {
  return !reduce(row, 0).first.empty();
}

AppendResult EliminationState::try_append(const SparseRow& row, uint64_t rhs) {
  auto [entries, reduced_rhs] = reduce(row, rhs);
  if (entries.empty()) return AppendResult::kRejected;
  const uint64_t inv = field_.inverse(entries.front().second);
  for (auto& e : entries) e.second = field_.mul(e.second, inv);
  const uint64_t column = entries.front().first;
  pivot_of_column_[column] = static_cast<uint32_t>(pivots_.size());
  pivots_.push_back(PivotRow{column, std::move(entries), field_.mul(reduced_rhs, inv)});
  return AppendResult::kAccepted;
}

std::vector<uint64_t> EliminationState::solve() const {
  std::vector<uint64_t> g(columns_, 0);
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    uint64_t value = it->rhs;
    for (const auto& [c, v] : it->entries) {
      if (c != it->column) value = field_.sub(value, field_.mul(v, g[c]));
    }
    g[it->column] = value;
  }
  return g;
}

// --- SparseFilter ---------------------------------------------------------

void SparseFilter::init_hashes(uint64_t block_count) {
  blocks_.clear();
  if (p_ == 0) return;
  h0_ = KeyedHash(HashSpec{seed_, kH0Index, p_});
  blocks_.reserve(block_count);
  for (uint64_t j = 0; j < block_count; ++j) {
    blocks_.push_back(derive_block(seed_, j, s_, p_, q_));
  }
}

SparseFilter SparseFilter::empty(unsigned k, size_t s, unsigned m_bits) {
  SparseFilter f;
  f.k_ = k;
  f.s_ = s;
  f.m_bits_ = m_bits;
  f.table_ = PackedVector(0, m_bits);
  return f;
}

SparseFilter SparseFilter::from_parts(uint64_t n, uint64_t q, uint64_t p, unsigned m_bits,
                                      unsigned k, size_t s, uint64_t seed, uint64_t blocks,
                                      PackedVector table) {
  if (s < 2) throw InputError("sparse filter requires s >= 2");
  if (m_bits < 2 || m_bits > 63) throw InputError("sparse filter m_bits out of range");
  if (k < 1 || k > m_bits) throw InputError("sparse filter value bits out of range");
  if (p == 0) {
    if (n != 0 || q != 0 || blocks != 0 || table.size() != 0) {
      throw InputError("sparse filter without a field must be empty");
    }
    return empty(k, s, m_bits);
  }
  if (p >= kMaxFieldModulus || bits_for_modulus(p) != m_bits) {
    throw InputError("sparse filter prime does not have m_bits bits");
  }
  if (q < 1 || q < n) throw InputError("sparse filter table shorter than key count");
  if (n > 0 && blocks == 0) throw InputError("sparse filter with keys needs a block");
  if (blocks > kMaxBlocks) throw InputError("sparse filter block count out of range");
  if (table.size() != q || table.width() != m_bits) {
    throw InputError("sparse filter table shape mismatch");
  }
  for (uint64_t i = 0; i < q; ++i) {
    if (table.get(i) >= p) throw InputError("sparse filter table entry not reduced mod p");
  }
  SparseFilter f;
  f.n_ = n;
  f.q_ = q;
  f.p_ = p;
  f.m_bits_ = m_bits;
  f.k_ = k;
  f.s_ = s;
  f.seed_ = seed;
  f.table_ = std::move(table);
  f.init_hashes(blocks);
  return f;
}

SparseFilter SparseFilter::create_table(std::span<const KeyValue> pairs,
                                        const SparseParams& params, const FieldParams& field,
                                        uint64_t master_seed, SparseBuildInfo* info) {
  validate(params);
  check_pairs(pairs, params.k);
  const uint64_t n = pairs.size();
  if (info) *info = SparseBuildInfo{};
  if (n == 0) return empty(params.k, params.s, params.m_bits);

  const PrimeField fp(field.p);
  if (bits_for_modulus(field.p) != field.m_bits) {
    throw InputError("field prime does not have m_bits bits");
  }
  if (params.k > field.m_bits) throw InputError("sparse filter requires k <= m_bits");
  for (const auto& kv : pairs) {
    if (kv.value >= field.p) throw InputError("value does not embed in F_p");
  }
  if (field.q < slack_size(n, params.epsilon)) {
    throw InputError("sparse filter requires q >= n (1 + epsilon)");
  }

  SparseFilter f;
  f.n_ = n;
  f.q_ = field.q;
  f.p_ = field.p;
  f.m_bits_ = field.m_bits;
  f.k_ = params.k;
  f.s_ = params.s;
  f.seed_ = master_seed;
  f.init_hashes(1);

  EliminationState state(field.q, fp);
  std::vector<uint32_t> accepted(n, 0);
  uint64_t attempts = 0;
  for (uint64_t i = 0; i < n; ++i) {
    const std::string& key = pairs[i].key;
    const uint64_t rhs = fp.sub(pairs[i].value, f.h0_(key));
    for (uint32_t j = 0;; ++j) {
      if (j >= params.max_blocks) {
        throw BuildFailure("sparse filter: key " + std::to_string(i) + " of " +
                               std::to_string(n) + " found no independent equation in " +
                               std::to_string(params.max_blocks) + " blocks (rank " +
                               std::to_string(state.rank()) + ", q " +
                               std::to_string(field.q) + ")",
                           attempts);
      }
      if (j == f.blocks_.size()) {
        f.blocks_.push_back(derive_block(master_seed, j, params.s, field.p, field.q));
      }
      SparseRow row = assemble_row(key, f.blocks_[j]);
      row.key_id = i;
      ++attempts;
      if (state.try_append(row, rhs) == AppendResult::kAccepted) {
        accepted[i] = j;
        break;
      }
    }
  }

  const std::vector<uint64_t> g = state.solve();
  f.table_ = PackedVector(field.q, field.m_bits);
  for (uint64_t c = 0; c < field.q; ++c) f.table_.set(c, g[c]);
  if (info) {
    info->accepted_block = std::move(accepted);
    info->row_attempts = attempts;
  }
  return f;
}

uint64_t SparseFilter::evaluate(std::string_view key, size_t block) const {
  const HashBlock& b = blocks_[block];
  std::array<uint64_t, 16> small_columns;
  std::vector<uint64_t> large_columns;
  uint64_t* columns = small_columns.data();
  if (s_ > small_columns.size()) {
    large_columns.resize(s_);
    columns = large_columns.data();
  }
  for (size_t t = 0; t < s_; ++t) columns[t] = b.column(t)(key);

  uint64_t y = h0_(key);
  for (size_t t = 0; t < s_; ++t) {
    // Same assembly rule as the build: a later member owns a shared column.
    bool overwritten = false;
    for (size_t later = t + 1; later < s_; ++later) {
      if (columns[later] == columns[t]) {
        overwritten = true;
        break;
      }
    }
    if (overwritten) continue;
    const uint64_t coefficient = b.coefficient(t)(key);
    y = static_cast<uint64_t>(
        (static_cast<unsigned __int128>(coefficient) * table_.get(columns[t]) + y) % p_);
  }
  return y;
}

QueryResult SparseFilter::query(std::string_view key) const {
  const uint64_t limit = uint64_t{1} << k_;
  for (size_t j = 0; j < blocks_.size(); ++j) {
    const uint64_t y = evaluate(key, j);
    if (y < limit) return y;
  }
  return std::nullopt;
}

// --- Verified wrapper -----------------------------------------------------

unsigned min_verified_m_bits(uint64_t n, unsigned k) {
  const unsigned log_n = n <= 1 ? 0 : static_cast<unsigned>(std::bit_width(n - 1));
  return k + log_n + 2;
}

VerifiedSparseFilter build_verified(std::span<const KeyValue> pairs, const SparseParams& params,
                                    uint64_t master_seed) {
  validate(params);
  check_pairs(pairs, params.k);
  if (pairs.empty()) return VerifiedSparseFilter(SparseFilter::empty(params.k, params.s, params.m_bits), 0);
  if (params.m_bits < min_verified_m_bits(pairs.size(), params.k)) {
    throw InputError("sparse filter requires m_bits >= " +
                     std::to_string(min_verified_m_bits(pairs.size(), params.k)) +
                     " for this key count");
  }
  const FieldParams field = setup_params(pairs.size(), params.m_bits, params.epsilon,
                                         derive_seed(master_seed, kFieldStream, 0));
  return build_verified(pairs, params, field, master_seed);
}

VerifiedSparseFilter build_verified(std::span<const KeyValue> pairs, const SparseParams& params,
                                    const FieldParams& field, uint64_t master_seed) {
  validate(params);
  check_pairs(pairs, params.k);
  if (pairs.empty()) return VerifiedSparseFilter(SparseFilter::empty(params.k, params.s, params.m_bits), 0);
  if (field.m_bits < min_verified_m_bits(pairs.size(), params.k)) {
    throw InputError("sparse filter requires m_bits >= " +
                     std::to_string(min_verified_m_bits(pairs.size(), params.k)) +
                     " for this key count");
  }
  for (uint32_t iteration = 0; iteration < params.max_rebuilds; ++iteration) {
    SparseFilter filter;
    try {
      filter = SparseFilter::create_table(pairs, params, field,
                                          derive_seed(master_seed, kRebuildStream, iteration));
    } catch (const BuildFailure&) {
      continue;
    }
    const bool exact = std::all_of(pairs.begin(), pairs.end(), [&](const KeyValue& kv) {
      return filter.query(kv.key) == QueryResult(kv.value);
    });
    if (exact) return VerifiedSparseFilter(std::move(filter), iteration + 1);
  }
  throw BuildFailure("sparse filter: no exact table after " +
                         std::to_string(params.max_rebuilds) + " constructions",
                     params.max_rebuilds);
}

}  // namespace bloomier
