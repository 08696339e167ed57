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

#include "bloomier/field.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "bloomier/error.h"
#include "bloomier/hashing.h"

namespace bloomier {

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
  if (m == 1) return 0;
  uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

PrimeField::PrimeField(uint64_t p) : p_(p) {
  if (p < 2 || p >= kMaxFieldModulus) {
    throw InputError("field modulus must lie in [2, 2^63)");
  }
}

uint64_t PrimeField::inverse(uint64_t a) const {
  a %= p_;
  if (a == 0) throw DivisionByZero("inverse of zero in F_p");
  // Extended Euclid on signed 128-bit values.
  __int128 r0 = p_, r1 = a, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const __int128 quot = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - quot * r1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - quot * t1);
  }
  if (t0 < 0) t0 += p_;
  return static_cast<uint64_t>(t0);
}

namespace {

constexpr std::array<uint64_t, 12> kFixedBases = {2,  3,  5,  7,  11, 13,
                                                  17, 19, 23, 29, 31, 37};

bool miller_rabin_witness(uint64_t n, uint64_t a, uint64_t d, int r) {
  uint64_t x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < r; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace

Primality miller_rabin(uint64_t n, int rounds) {
  if (n < 2) return Primality::kComposite;
  if (n < 4) return Primality::kProbablyPrime;
  if (n % 2 == 0) return Primality::kComposite;
  uint64_t d = n - 1;
  int r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  for (int i = 0; i < rounds; ++i) {
    uint64_t a;
    if (i < static_cast<int>(kFixedBases.size())) {
      a = kFixedBases[i] % n;
    } else {
      a = 2 + reduce_range(derive_seed(n, 0x4d52, i), n - 3);
    }
    if (a < 2) continue;
    if (miller_rabin_witness(n, a, d, r)) return Primality::kComposite;
  }
  return Primality::kProbablyPrime;
}

uint64_t next_prime_at_least(uint64_t x) {
  if (x <= 2) return 2;
  uint64_t c = x | 1;
  while (!is_probable_prime(c)) c += 2;
  return c;
}

std::vector<uint64_t> factor_distinct(uint64_t n) {
  if (n < 2) throw InputError("factor_distinct needs n >= 2");
  if (n > kMaxTrialDivision) {
    throw UnsupportedSize("factor_distinct: n exceeds trial-division budget");
  }
  std::vector<uint64_t> factors;
  for (uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      factors.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

bool is_primitive_root(uint64_t g, uint64_t q, std::span<const uint64_t> factors) {
  g %= q;
  if (g == 0) return false;
  for (uint64_t f : factors) {
    if (pow_mod(g, (q - 1) / f, q) == 1) return false;
  }
  return true;
}

uint64_t multiplicative_order(uint64_t a, uint64_t q) {
  a %= q;
  if (a == 0) throw InputError("multiplicative_order: a is divisible by q");
  if (q == 2) return 1;
  uint64_t order = q - 1;
  for (uint64_t f : factor_distinct(q - 1)) {
    while (order % f == 0 && pow_mod(a, order / f, q) == 1) order /= f;
  }
  return order;
}

uint64_t find_primitive_root(uint64_t q, std::span<const uint64_t> factors,
                             uint64_t seed) {
  if (q == 2) return 1;
  for (uint64_t i = 0;; ++i) {
    const uint64_t g = 2 + reduce_range(derive_seed(seed, 0x67656e, i), q - 2);
    if (is_primitive_root(g, q, factors)) return g;
  }
}

uint64_t slack_size(uint64_t n, double epsilon) {
  const long double x = static_cast<long double>(n) * (1.0L + epsilon);
  return static_cast<uint64_t>(std::ceil(x - 1e-9L * std::max<long double>(1, x)));
}

FieldParams setup_params(uint64_t n, unsigned m_bits, double epsilon, uint64_t seed,
                         const SetupOptions& options) {
  if (n < 1) throw InputError("setup_params: n must be >= 1");
  if (!(epsilon > 0)) throw InputError("setup_params: epsilon must be positive");
  if (m_bits < 2 || m_bits > 63) throw InputError("setup_params: m_bits must be in [2, 63]");
  FieldParams params;
  params.m_bits = m_bits;
  params.q = next_prime_at_least(std::max<uint64_t>(2, slack_size(n, epsilon)));
  if (params.q >= (uint64_t{1} << m_bits)) {
    throw InputError("setup_params: 2^m_bits must exceed q");
  }
  if (params.q > 2) params.factors_q_minus_1 = factor_distinct(params.q - 1);

  const uint64_t lo = uint64_t{1} << (m_bits - 1);
  const uint64_t span = lo;  // [2^(m-1), 2^m - 1]
  for (uint64_t i = 0; i < options.max_samples; ++i) {
    const uint64_t candidate = lo + reduce_range(derive_seed(seed, 0x7072696d65, i), span);
    if (!is_primitive_root(candidate, params.q, params.factors_q_minus_1)) continue;
    if (!is_probable_prime(candidate, options.miller_rabin_rounds)) continue;
    params.p = candidate;
    return params;
  }
  throw BuildFailure("setup_params: no primitive-root prime found within budget",
                     options.max_samples);
}

size_t matrix_rank(std::vector<std::vector<uint64_t>> rows, const PrimeField& field) {
  if (rows.empty()) return 0;
  const size_t cols = rows.front().size();
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows.size(); ++c) {
    size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const uint64_t inv = field.inverse(rows[rank][c]);
    for (size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const uint64_t factor = field.mul(rows[r][c], inv);
      for (size_t j = c; j < cols; ++j) {
        rows[r][j] = field.sub(rows[r][j], field.mul(factor, rows[rank][j]));
      }
    }
    ++rank;
  }
  return rank;
}

namespace {

std::vector<std::vector<uint64_t>> circulant_rows(std::span<const uint64_t> w,
                                                  const PrimeField& field) {
  const size_t n = w.size();
  std::vector<std::vector<uint64_t>> rows(n, std::vector<uint64_t>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) rows[i][j] = field.reduce(w[(j + n - i) % n]);
  }
  return rows;
}

}  // namespace

uint64_t circulant_det(std::span<const uint64_t> w, const PrimeField& field) {
  auto rows = circulant_rows(w, field);
  const size_t n = rows.size();
  uint64_t det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t pivot = c;
    while (pivot < n && rows[pivot][c] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      std::swap(rows[c], rows[pivot]);
      det = field.neg(det);
    }
    det = field.mul(det, rows[c][c]);
    const uint64_t inv = field.inverse(rows[c][c]);
    for (size_t r = c + 1; r < n; ++r) {
      if (rows[r][c] == 0) continue;
      const uint64_t factor = field.mul(rows[r][c], inv);
      for (size_t j = c; j < n; ++j) {
        rows[r][j] = field.sub(rows[r][j], field.mul(factor, rows[c][j]));
      }
    }
  }
  return det;
}

size_t cyclic_shift_span_dim(std::span<const uint64_t> w, const PrimeField& field) {
  if (w.empty()) return 0;
  return matrix_rank(circulant_rows(w, field), field);
}

// --- Polynomials over F_p, coefficient vectors low degree first -----------

namespace {

using Poly = std::vector<uint64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

// Remainder of a modulo f; quotient written to *quot when non-null.
Poly poly_divmod(Poly a, const Poly& f, const PrimeField& field, Poly* quot = nullptr) {
  trim(a);
  const int df = degree(f);
  const uint64_t lead_inv = field.inverse(f.back());
  if (quot) quot->assign(std::max(0, degree(a) - df + 1), 0);
  while (degree(a) >= df) {
    const int shift = degree(a) - df;
    const uint64_t factor = field.mul(a.back(), lead_inv);
    if (quot) (*quot)[shift] = factor;
    for (int i = 0; i <= df; ++i) {
      a[shift + i] = field.sub(a[shift + i], field.mul(factor, f[i]));
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, const PrimeField& field) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    for (size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = field.add(prod[i + j], field.mul(a[i], b[j]));
    }
  }
  return poly_divmod(std::move(prod), f, field);
}

Poly poly_powmod(Poly base, uint64_t exp, const Poly& f, const PrimeField& field) {
  Poly result = poly_divmod(Poly{1}, f, field);
  base = poly_divmod(std::move(base), f, field);
  while (exp > 0) {
    if (exp & 1) result = poly_mulmod(result, base, f, field);
    base = poly_mulmod(base, base, f, field);
    exp >>= 1;
  }
  return result;
}

Poly poly_gcd(Poly a, Poly b, const PrimeField& field) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_divmod(a, b, field);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const uint64_t inv = field.inverse(a.back());
    for (auto& c : a) c = field.mul(c, inv);
  }
  return a;
}

}  // namespace

std::vector<unsigned> cyclotomic_factor_degrees(uint64_t q, const PrimeField& field) {
  if (q < 2) throw InputError("cyclotomic_factor_degrees: q must be >= 2");
  if (q % field.modulus() == 0) {
    throw InputError("cyclotomic_factor_degrees: p must not divide q");
  }
  Poly f(q, 1);
  std::vector<unsigned> degrees;
  Poly h = poly_divmod(Poly{0, 1}, f, field);
  for (unsigned d = 1; degree(f) >= static_cast<int>(2 * d); ++d) {
    h = poly_powmod(h, field.modulus(), f, field);
    Poly h_minus_x = h;
    if (h_minus_x.size() < 2) h_minus_x.resize(2, 0);
    h_minus_x[1] = field.sub(h_minus_x[1], 1);
    Poly g = poly_gcd(f, h_minus_x, field);
    if (degree(g) > 0) {
      degrees.insert(degrees.end(), degree(g) / d, d);
      Poly quot;
      poly_divmod(f, g, field, &quot);
      f = std::move(quot);
      h = poly_divmod(h, f, field);
    }
  }
  if (degree(f) > 0) degrees.push_back(static_cast<unsigned>(degree(f)));
  std::sort(degrees.begin(), degrees.end());
  return degrees;
}

uint64_t count_sparse_matrices(unsigned n, unsigned r, unsigned s, uint64_t p) {
  if (p < 2) throw InputError("count_sparse_matrices: p must be >= 2");
  const unsigned cells = n * r;
  uint64_t total = 1;
  for (unsigned i = 0; i < cells; ++i) {
    if (total > kMaxEnumeration / p) {
      throw UnsupportedSize("count_sparse_matrices: p^(n r) exceeds enumeration budget");
    }
    total *= p;
  }
  if (cells == 0) return (r == 0 || s == 0) ? 1 : 0;

  // Odometer over all matrices, column-major digits; track nonzeros per
  // column and how many columns currently have exactly s of them.
  std::vector<uint64_t> digit(cells, 0);
  std::vector<unsigned> nonzero(r, 0);
  unsigned good_columns = s == 0 ? r : 0;
  uint64_t count = 0;
  auto update = [&](unsigned col, int delta) {
    if (nonzero[col] == s) --good_columns;
    nonzero[col] += delta;
    if (nonzero[col] == s) ++good_columns;
  };
  for (uint64_t m = 0; m < total; ++m) {
    if (good_columns == r) ++count;
    for (unsigned i = 0; i < cells; ++i) {
      const unsigned col = i / n;
      if (++digit[i] < p) {
        if (digit[i] == 1) update(col, +1);
        break;
      }
      digit[i] = 0;
      update(col, -1);
    }
  }
  return count;
}

uint64_t sparse_matrix_count_closed_form(unsigned n, unsigned r, unsigned s, uint64_t p) {
  if (s > n) return r == 0 ? 1 : 0;
  unsigned __int128 binom = 1;
  for (unsigned i = 0; i < s; ++i) binom = binom * (n - i) / (i + 1);
  unsigned __int128 column = binom;
  for (unsigned i = 0; i < s; ++i) column *= (p - 1);
  unsigned __int128 result = 1;
  for (unsigned i = 0; i < r; ++i) result *= column;
  return static_cast<uint64_t>(result);
}

}  // namespace bloomier
