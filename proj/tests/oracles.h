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


// Reference implementations used only by the tests. Each one is written
// the slow, obvious way so it can check the library independently.

#ifndef BLOOMIER_TESTS_ORACLES_H_
#define BLOOMIER_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bloomier/graph_filter.h"
#include "bloomier/hashing.h"
#include "bloomier/key_value.h"
#include "bloomier/sparse_filter.h"

namespace bloomier::oracle {

// Sieve of Eratosthenes: is_prime[i] for i <= limit.
inline std::vector<bool> sieve(uint64_t limit) {
  std::vector<bool> is_prime(limit + 1, true);
  is_prime[0] = false;
  if (limit >= 1) is_prime[1] = false;
  for (uint64_t i = 2; i * i <= limit; ++i) {
    if (!is_prime[i]) continue;
    for (uint64_t j = i * i; j <= limit; j += i) is_prime[j] = false;
  }
  return is_prime;
}

inline bool trial_division_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Order of a modulo q by repeated multiplication.
inline uint64_t brute_order(uint64_t a, uint64_t q) {
  a %= q;
  if (a == 0) return 0;
  uint64_t x = a;
  for (uint64_t e = 1; e < q; ++e) {
    if (x == 1) return e;
    x = x * a % q;
  }
  return 0;
}

inline uint64_t mod_pow_small(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

inline uint64_t mod_inverse_small(uint64_t a, uint64_t p) { return mod_pow_small(a, p - 2, p); }

using Matrix = std::vector<std::vector<uint64_t>>;

// Reduced row echelon form over F_p for small p (p^2 fits in 64 bits).
// Returns the rank; the matrix is reduced in place.
inline size_t rref(Matrix& a, uint64_t p) {
  if (a.empty()) return 0;
  const size_t rows = a.size();
  const size_t cols = a[0].size();
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t pivot = rank;
    while (pivot < rows && a[pivot][c] % p == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    const uint64_t inv = mod_inverse_small(a[rank][c], p);
    for (auto& x : a[rank]) x = x * inv % p;
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c] % p == 0) continue;
      const uint64_t factor = a[r][c] % p;
      for (size_t j = 0; j < cols; ++j) {
        a[r][j] = (a[r][j] + (p - factor) * a[rank][j]) % p;
      }
    }
    ++rank;
  }
  return rank;
}

inline size_t rank(Matrix a, uint64_t p) { return rref(a, p); }

// Solves the square nonsingular system A x = b, or nullopt when singular.
inline std::optional<std::vector<uint64_t>> solve_square(const Matrix& a,
                                                          const std::vector<uint64_t>& b,
                                                          uint64_t p) {
  const size_t n = a.size();
  Matrix aug = a;
  for (size_t i = 0; i < n; ++i) aug[i].push_back(b[i] % p);
  if (rref(aug, p) < n) return std::nullopt;
  for (size_t i = 0; i < n; ++i) {
    if (aug[i][i] != 1) return std::nullopt;
  }
  std::vector<uint64_t> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

// Determinant by permutation expansion (Leibniz), for n <= 7.
inline uint64_t leibniz_det(const Matrix& a, uint64_t p) {
  const size_t n = a.size();
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  uint64_t total = 0;
  do {
    size_t inversions = 0;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    uint64_t term = 1;
    for (size_t i = 0; i < n; ++i) term = term * (a[i][perm[i]] % p) % p;
    total = inversions % 2 == 0 ? (total + term) % p : (total + p - term) % p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Matrix circulant(const std::vector<uint64_t>& w) {
  const size_t n = w.size();
  Matrix a(n, std::vector<uint64_t>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) a[i][j] = w[(j + n - i) % n];
  }
  return a;
}

// g[u] + g[v] + h3 == f (mod m) for a stored key, using the filter's own
// table and endpoints but recomputing h3 from the hash spec.
inline bool graph_equation_holds(const GraphFilter& filter, const KeyValue& kv) {
  const uint64_t m = filter.modulus();
  const uint64_t h3 = hash_key(HashSpec{filter.seed(), 0, m}, kv.key);
  const Edge e = filter.edge_of(kv.key);
  const unsigned __int128 sum = static_cast<unsigned __int128>(filter.table().get(e.u)) +
                                filter.table().get(e.v) + h3;
  return static_cast<uint64_t>(sum % m) == kv.value;
}

// h0(x) + sum over assembled entries of coef * g[col] == f(x) (mod p) for
// the given block, recomputed from raw hash specs.
inline bool sparse_equation_holds(const SparseFilter& filter, const KeyValue& kv, size_t block) {
  const uint64_t p = filter.prime();
  const uint64_t q = filter.table_length();
  const size_t s = filter.s();
  const uint64_t seed = filter.seed();
  std::vector<uint64_t> coef(s), col(s);
  for (size_t t = 0; t < s; ++t) {
    coef[t] = hash_key(HashSpec{seed, static_cast<uint32_t>(1 + 2 * s * block + t), p}, kv.key);
    col[t] = hash_key(HashSpec{seed, static_cast<uint32_t>(1 + 2 * s * block + s + t), q}, kv.key);
  }
  // A later member owns a shared column.
  std::vector<std::pair<uint64_t, uint64_t>> owner;
  for (size_t t = 0; t < s; ++t) {
    bool replaced = false;
    for (auto& [c, a] : owner) {
      if (c == col[t]) {
        a = coef[t];
        replaced = true;
      }
    }
    if (!replaced) owner.emplace_back(col[t], coef[t]);
  }
  unsigned __int128 y = hash_key(HashSpec{seed, 0, p}, kv.key);
  for (const auto& [c, a] : owner) {
    y = (y + static_cast<unsigned __int128>(a) * filter.table().get(c)) % p;
  }
  return static_cast<uint64_t>(y) == kv.value;
}

}  // namespace bloomier::oracle

#endif  // BLOOMIER_TESTS_ORACLES_H_
