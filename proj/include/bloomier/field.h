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

#ifndef BLOOMIER_FIELD_H_
#define BLOOMIER_FIELD_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bloomier {

// Largest modulus accepted by PrimeField; products of two residues fit in
// 128 bits with room to spare.
inline constexpr uint64_t kMaxFieldModulus = uint64_t{1} << 63;

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m);
uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m);

// Arithmetic in F_p (or Z/pZ for the helpers above). Residues are plain
// uint64_t values in [0, p).
class PrimeField {
 public:
  // Throws InputError unless 2 <= p < 2^63. Primality is the caller's
  // responsibility.
  explicit PrimeField(uint64_t p);

  uint64_t modulus() const { return p_; }
  uint64_t reduce(uint64_t a) const { return a % p_; }

  uint64_t add(uint64_t a, uint64_t b) const {
    const uint64_t s = a + b;  // a, b < 2^63, no overflow
    return s >= p_ ? s - p_ : s;
  }
  uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + (p_ - b); }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  uint64_t mul(uint64_t a, uint64_t b) const { return mul_mod(a, b, p_); }
  uint64_t pow(uint64_t a, uint64_t e) const { return pow_mod(a, e, p_); }
  // Throws DivisionByZero for a == 0.
  uint64_t inverse(uint64_t a) const;

 private:
  uint64_t p_;
};

enum class Primality { kComposite, kProbablyPrime };

inline constexpr int kDefaultMillerRabinRounds = 40;

// Bases are the first twelve primes (which alone decide every 64-bit input)
// followed by pseudo-random bases derived from n.
Primality miller_rabin(uint64_t n, int rounds);

inline bool is_probable_prime(uint64_t n, int rounds = kDefaultMillerRabinRounds) {
  return miller_rabin(n, rounds) == Primality::kProbablyPrime;
}

uint64_t next_prime_at_least(uint64_t x);

inline constexpr uint64_t kMaxTrialDivision = uint64_t{1} << 40;

// Distinct prime factors in increasing order, by trial division. Throws
// UnsupportedSize above kMaxTrialDivision and InputError for n < 2.
std::vector<uint64_t> factor_distinct(uint64_t n);

// True iff g has multiplicative order q - 1 modulo the prime q, where
// `factors` are the distinct primes dividing q - 1.
bool is_primitive_root(uint64_t g, uint64_t q, std::span<const uint64_t> factors);

// Multiplicative order of a modulo the prime q (a not divisible by q).
uint64_t multiplicative_order(uint64_t a, uint64_t q);

// Random search for a generator of F_q^*. Returns 1 for q = 2.
uint64_t find_primitive_root(uint64_t q, std::span<const uint64_t> factors,
                             uint64_t seed = 0);

struct FieldParams {
  uint64_t q = 0;  // table length, prime
  uint64_t p = 0;  // value field, m_bits-bit prime, primitive root mod q
  std::vector<uint64_t> factors_q_minus_1;
  unsigned m_bits = 0;

  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

// ceil(n * (1 + epsilon)), tolerant of binary rounding of epsilon.
uint64_t slack_size(uint64_t n, double epsilon);

struct SetupOptions {
  int miller_rabin_rounds = kDefaultMillerRabinRounds;
  uint64_t max_samples = uint64_t{1} << 22;
};

// q = first prime >= ceil(n(1+eps)); p a uniformly sampled m_bits-bit prime
// whose residue mod q generates F_q^*. Deterministic in `seed`.
FieldParams setup_params(uint64_t n, unsigned m_bits, double epsilon, uint64_t seed,
                         const SetupOptions& options = {});

// --- Circulant and counting machinery -------------------------------------

// Determinant over F_p of the circulant matrix whose row i is w shifted
// right by i. Plain Gaussian elimination.
uint64_t circulant_det(std::span<const uint64_t> w, const PrimeField& field);

// Dimension of span{w, shift(w), ..., shift^(n-1)(w)} over F_p.
size_t cyclic_shift_span_dim(std::span<const uint64_t> w, const PrimeField& field);

// Rank over F_p of a dense row-major matrix (entries already reduced).
size_t matrix_rank(std::vector<std::vector<uint64_t>> rows, const PrimeField& field);

// Degrees of the irreducible factors of 1 + x + ... + x^(q-1) over F_p
// (distinct-degree factorization), in nondecreasing order.
std::vector<unsigned> cyclotomic_factor_degrees(uint64_t q, const PrimeField& field);

inline constexpr uint64_t kMaxEnumeration = uint64_t{1} << 24;

// Exhaustively counts n x r matrices over F_p with exactly s nonzero
// entries in every column. Throws UnsupportedSize if p^(n r) > 2^24.
uint64_t count_sparse_matrices(unsigned n, unsigned r, unsigned s, uint64_t p);

// (C(n, s) (p - 1)^s)^r.
uint64_t sparse_matrix_count_closed_form(unsigned n, unsigned r, unsigned s, uint64_t p);

}  // namespace bloomier

#endif  // BLOOMIER_FIELD_H_
