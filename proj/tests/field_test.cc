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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "bloomier/error.h"
#include "oracles.h"

namespace bloomier {
namespace {

TEST(PrimeFieldTest, Inverse) {
  PrimeField f(7);
  EXPECT_EQ(f.inverse(3), 5u);
  for (uint64_t a = 1; a < 7; ++a) EXPECT_EQ(f.mul(a, f.inverse(a)), 1u);
  EXPECT_THROW(f.inverse(0), DivisionByZero);
}

TEST(PrimeFieldTest, Fermat) {
  std::mt19937_64 rng(1);
  for (uint64_t p : {3ULL, 101ULL, 65537ULL, 2147483647ULL, 2305843009213693951ULL}) {
    PrimeField f(p);
    for (int i = 0; i < 50; ++i) {
      const uint64_t a = 1 + rng() % (p - 1);
      EXPECT_EQ(f.pow(a, p - 1), 1u) << p;
      EXPECT_EQ(f.mul(a, f.inverse(a)), 1u);
      EXPECT_EQ(f.add(a, f.neg(a)), 0u);
      EXPECT_EQ(f.sub(f.add(a, 5 % p), 5 % p), a);
    }
  }
}

TEST(PrimeFieldTest, TwoIsXorAnd) {
  PrimeField f(2);
  for (uint64_t a = 0; a < 2; ++a) {
    for (uint64_t b = 0; b < 2; ++b) {
      EXPECT_EQ(f.add(a, b), a ^ b);
      EXPECT_EQ(f.sub(a, b), a ^ b);
      EXPECT_EQ(f.mul(a, b), a & b);
    }
  }
  EXPECT_EQ(f.inverse(1), 1u);
}

TEST(PrimeFieldTest, RejectsBadModulus) {
  EXPECT_THROW(PrimeField(1), InputError);
  EXPECT_THROW(PrimeField(uint64_t{1} << 63), InputError);
}

TEST(MillerRabinTest, KnownValues) {
  EXPECT_EQ(miller_rabin(561, 40), Primality::kComposite);
  EXPECT_EQ(miller_rabin(2, 40), Primality::kProbablyPrime);
  for (uint64_t carmichael : {561ULL, 1105ULL, 1729ULL, 2465ULL, 2821ULL, 6601ULL, 8911ULL}) {
    EXPECT_FALSE(is_probable_prime(carmichael)) << carmichael;
  }
  EXPECT_TRUE(is_probable_prime((uint64_t{1} << 61) - 1));
  EXPECT_FALSE(is_probable_prime((uint64_t{1} << 61) + 1));
  EXPECT_TRUE(is_probable_prime(9223372036854775783ULL));  // largest prime below 2^63
}

TEST(MillerRabinTest, AgreesWithSieve) {
  constexpr uint64_t kLimit = 100000;
  const auto prime = oracle::sieve(kLimit);
  for (uint64_t n = 2; n <= kLimit; ++n) {
    ASSERT_EQ(is_probable_prime(n, 20), prime[n]) << n;
  }
}

TEST(NextPrimeTest, Examples) {
  EXPECT_EQ(next_prime_at_least(105), 107u);
  EXPECT_EQ(next_prime_at_least(7), 7u);
  EXPECT_EQ(next_prime_at_least(2), 2u);
  const auto prime = oracle::sieve(2000);
  for (uint64_t x = 2; x < 1900; ++x) {
    uint64_t expected = x;
    while (!prime[expected]) ++expected;
    ASSERT_EQ(next_prime_at_least(x), expected);
  }
}

TEST(FactorTest, Examples) {
  EXPECT_EQ(factor_distinct(12), (std::vector<uint64_t>{2, 3}));
  EXPECT_EQ(factor_distinct(106), (std::vector<uint64_t>{2, 53}));
  EXPECT_EQ(factor_distinct(2), (std::vector<uint64_t>{2}));
  EXPECT_EQ(factor_distinct(1024), (std::vector<uint64_t>{2}));
  EXPECT_EQ(factor_distinct(2ULL * 3 * 5 * 7 * 11 * 13 * 1000003ULL),
            (std::vector<uint64_t>{2, 3, 5, 7, 11, 13, 1000003}));
  EXPECT_THROW(factor_distinct(1), InputError);
  EXPECT_THROW(factor_distinct((uint64_t{1} << 40) + 1), UnsupportedSize);
}

TEST(PrimitiveRootTest, SmallPrimes) {
  const uint64_t g5 = find_primitive_root(5, factor_distinct(4));
  EXPECT_TRUE(g5 == 2 || g5 == 3);
  EXPECT_EQ(find_primitive_root(3, factor_distinct(2)), 2u);
  EXPECT_EQ(find_primitive_root(2, {}), 1u);
  const uint64_t g = find_primitive_root(107, factor_distinct(106));
  EXPECT_NE(pow_mod(g, 2, 107), 1u);
  EXPECT_NE(pow_mod(g, 53, 107), 1u);
}

TEST(PrimitiveRootTest, AgreesWithBruteForceOrder) {
  const auto prime = oracle::sieve(400);
  for (uint64_t q = 3; q <= 400; ++q) {
    if (!prime[q]) continue;
    const auto factors = factor_distinct(q - 1);
    for (uint64_t a = 1; a < q; ++a) {
      const uint64_t order = oracle::brute_order(a, q);
      ASSERT_EQ(multiplicative_order(a, q), order) << a << " mod " << q;
      ASSERT_EQ(is_primitive_root(a, q, factors), order == q - 1) << a << " mod " << q;
    }
    for (uint64_t seed = 0; seed < 3; ++seed) {
      EXPECT_EQ(oracle::brute_order(find_primitive_root(q, factors, seed), q), q - 1);
    }
  }
}

TEST(SetupParamsTest, TableSizeExample) {
  const FieldParams params = setup_params(100, 31, 0.05, 1);
  EXPECT_EQ(params.q, 107u);
  EXPECT_EQ(params.factors_q_minus_1, (std::vector<uint64_t>{2, 53}));
  EXPECT_EQ(oracle::brute_order(params.p % params.q, params.q), params.q - 1);
}

TEST(SetupParamsTest, HundredSeeds) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const FieldParams params = setup_params(100, 31, 0.05, seed);
    ASSERT_EQ(params.q, 107u);
    EXPECT_EQ(params.m_bits, 31u);
    EXPECT_GE(params.p, uint64_t{1} << 30);
    EXPECT_LT(params.p, uint64_t{1} << 31);
    EXPECT_TRUE(oracle::trial_division_prime(params.p)) << params.p;
    EXPECT_EQ(oracle::brute_order(params.p % 107, 107), 106u) << params.p;
  }
}

TEST(SetupParamsTest, Deterministic) {
  EXPECT_EQ(setup_params(1000, 40, 0.1, 9), setup_params(1000, 40, 0.1, 9));
  EXPECT_NE(setup_params(1000, 40, 0.1, 9).p, setup_params(1000, 40, 0.1, 10).p);
}

TEST(SetupParamsTest, RejectsBadInput) {
  EXPECT_THROW(setup_params(0, 31, 0.05, 1), InputError);
  EXPECT_THROW(setup_params(100, 31, 0.0, 1), InputError);
  EXPECT_THROW(setup_params(100, 1, 0.05, 1), InputError);
  EXPECT_THROW(setup_params(100, 6, 0.05, 1), InputError);  // 2^6 < 107
}

TEST(SlackSizeTest, Ceiling) {
  EXPECT_EQ(slack_size(100, 0.05), 105u);
  EXPECT_EQ(slack_size(1000, 0.1), 1100u);
  EXPECT_EQ(slack_size(3, 0.5), 5u);
}

TEST(CirculantTest, Examples) {
  PrimeField f3(3);
  EXPECT_EQ(circulant_det(std::vector<uint64_t>{1, 1, 1, 1, 1}, f3), 0u);
  const std::vector<uint64_t> w{1, 1, 0, 0, 0};
  const uint64_t det = circulant_det(w, f3);
  EXPECT_NE(det, 0u);
  EXPECT_EQ(det, oracle::leibniz_det(oracle::circulant(w), 3));
  EXPECT_EQ(circulant_det(std::vector<uint64_t>{1, 2, 0, 0, 0}, f3), 0u);  // sum is 0 mod 3
}

TEST(CirculantTest, MatchesLeibniz) {
  std::mt19937_64 rng(7);
  for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL}) {
    PrimeField f(p);
    for (size_t n = 1; n <= 6; ++n) {
      for (int trial = 0; trial < 40; ++trial) {
        std::vector<uint64_t> w(n);
        for (auto& x : w) x = rng() % p;
        ASSERT_EQ(circulant_det(w, f), oracle::leibniz_det(oracle::circulant(w), p));
      }
    }
  }
}

TEST(CirculantTest, SpanDimension) {
  PrimeField f(5);
  EXPECT_EQ(cyclic_shift_span_dim(std::vector<uint64_t>{1, 0, 1, 0, 1, 0}, f), 2u);
  EXPECT_EQ(cyclic_shift_span_dim(std::vector<uint64_t>{0, 0, 0, 0}, f), 0u);
  // q = 7 and 3 is a primitive root mod 7.
  PrimeField f3(3);
  EXPECT_EQ(cyclic_shift_span_dim(std::vector<uint64_t>{1, 1, 0, 0, 0, 0, 0}, f3), 7u);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<uint64_t> w(6);
    for (auto& x : w) x = rng() % 5;
    EXPECT_EQ(cyclic_shift_span_dim(w, f), oracle::rank(oracle::circulant(w), 5));
  }
}

TEST(MatrixRankTest, MatchesOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
    const uint64_t p = trial % 2 ? 2 : 7;
    oracle::Matrix a(rows, std::vector<uint64_t>(cols));
    for (auto& row : a) {
      for (auto& x : row) x = rng() % 3 == 0 ? rng() % p : 0;
    }
    EXPECT_EQ(matrix_rank(a, PrimeField(p)), oracle::rank(a, p));
  }
}

TEST(CyclotomicTest, DegreesEqualOrder) {
  const auto prime = oracle::sieve(60);
  for (uint64_t q = 2; q <= 23; ++q) {
    if (!prime[q]) continue;
    for (uint64_t p = 2; p < 60; ++p) {
      if (!prime[p] || p == q) continue;
      const auto degrees = cyclotomic_factor_degrees(q, PrimeField(p));
      const uint64_t d = oracle::brute_order(p, q);
      ASSERT_EQ(degrees.size(), (q - 1) / d) << "q=" << q << " p=" << p;
      for (unsigned deg : degrees) EXPECT_EQ(deg, d);
      EXPECT_EQ(degrees.size() == 1, d == q - 1);
    }
  }
  EXPECT_THROW(cyclotomic_factor_degrees(5, PrimeField(5)), InputError);
}

TEST(CountingTest, Examples) {
  EXPECT_EQ(count_sparse_matrices(2, 1, 1, 2), 2u);
  EXPECT_EQ(count_sparse_matrices(2, 2, 1, 3), 16u);
  EXPECT_EQ(count_sparse_matrices(3, 2, 3, 3), 64u);  // ((p - 1)^n)^r
  EXPECT_THROW(count_sparse_matrices(5, 5, 2, 3), UnsupportedSize);
}

TEST(CountingTest, ClosedFormOnSmallInstances) {
  for (uint64_t p : {2ULL, 3ULL, 5ULL}) {
    for (unsigned n = 1; n <= 4; ++n) {
      for (unsigned r = 1; r <= 3; ++r) {
        double cells = 1;
        for (unsigned i = 0; i < n * r; ++i) cells *= static_cast<double>(p);
        if (cells > 1 << 16) continue;
        for (unsigned s = 1; s <= n; ++s) {
          EXPECT_EQ(count_sparse_matrices(n, r, s, p), sparse_matrix_count_closed_form(n, r, s, p))
              << n << " " << r << " " << s << " " << p;
        }
      }
    }
  }
}

}  // namespace
}  // namespace bloomier
