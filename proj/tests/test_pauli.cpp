// Copyright 2026 The ftqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <random>

#include "ftqec/bitvec.hpp"
#include "ftqec/gf2.hpp"
#include "ftqec/pauli.hpp"
#include "test_util.hpp"

namespace ftqec {
namespace {

using test_util::random_pauli;

BitVec random_bits(size_t n, std::mt19937_64 &rng) {
  BitVec v(n);
  for (size_t i = 0; i < n; ++i) v.set(i, rng() & 1);
  return v;
}

// Letter-level commutation: count positions with two different non-identity letters.
bool anticommute_by_letters(const PauliOperator &a, const PauliOperator &b) {
  size_t odd = 0;
  for (size_t q = 0; q < a.num_qubits(); ++q) {
    char x = a.letter(q), y = b.letter(q);
    odd += x != 'I' && y != 'I' && x != y;
  }
  return odd & 1;
}

// Single-qubit product table up to phase.
char product_letter(char a, char b) {
  if (a == 'I') return b;
  if (b == 'I') return a;
  if (a == b) return 'I';
  for (char c : std::string("XYZ")) {
    if (c != a && c != b) return c;
  }
  return '?';
}

TEST(BitVec, BasicOps) {
  BitVec v = BitVec::from_string("1011001");
  EXPECT_EQ(v.size(), 7u);
  EXPECT_EQ(v.popcount(), 4u);
  EXPECT_EQ(v.ones(), (std::vector<size_t>{0, 2, 3, 6}));
  EXPECT_EQ(v.str(), "1011001");
  EXPECT_EQ(v.first_one(), 0u);
  v.flip(0);
  EXPECT_EQ(v.first_one(), 2u);
  EXPECT_EQ(v.slice(2, 3).str(), "110");
  EXPECT_EQ(v.concat(BitVec::from_string("01")).str(), "001100101");
}

TEST(BitVec, XorPropertiesAcrossWordBoundaries) {
  std::mt19937_64 rng(7);
  for (size_t n : {1u, 63u, 64u, 65u, 130u}) {
    for (int t = 0; t < 20; ++t) {
      BitVec a = random_bits(n, rng), b = random_bits(n, rng);
      EXPECT_EQ((a ^ b) ^ b, a);
      EXPECT_TRUE((a ^ a).none());
      size_t naive = 0;
      for (size_t i = 0; i < n; ++i) naive += a[i] && b[i];
      EXPECT_EQ(a.dot(b), naive & 1);
      EXPECT_EQ((a & b).popcount(), naive);
    }
  }
}

TEST(Pauli, ParseForms) {
  auto p = PauliOperator::parse("X4,5 Z7", 7);
  EXPECT_EQ(p.dense(), "IIIXXIZ");
  EXPECT_EQ(PauliOperator::parse("IIIXXIZ", 7), p);
  EXPECT_EQ(PauliOperator::parse(p.sparse(), 7), p);
  auto blocked = PauliOperator::parse("X1 | Z2", 4);
  EXPECT_EQ(blocked.dense(), "XIIZ");
  EXPECT_THROW(PauliOperator::parse("X8", 7), std::invalid_argument);
  EXPECT_THROW(PauliOperator::parse("X1 Z1", 7), std::invalid_argument);
  EXPECT_THROW(PauliOperator::parse("Q1", 7), std::invalid_argument);
}

TEST(Pauli, WeightBySector) {
  auto p = PauliOperator::parse("XIZY", 4);
  EXPECT_EQ(p.weight(), 3u);
  EXPECT_EQ(p.weight(Sector::X), 2u);
  EXPECT_EQ(p.weight(Sector::Z), 2u);
}

TEST(PauliProperty, ProductMatchesLetterTable) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    size_t n = 1 + rng() % 70;
    auto a = random_pauli(n, rng), b = random_pauli(n, rng);
    auto c = a * b;
    for (size_t q = 0; q < n; ++q) EXPECT_EQ(c.letter(q), product_letter(a.letter(q), b.letter(q)));
  }
}

TEST(PauliProperty, CommutationMatchesLetterCount) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 500; ++t) {
    size_t n = 1 + rng() % 70;
    auto a = random_pauli(n, rng), b = random_pauli(n, rng);
    EXPECT_EQ(a.anticommutes(b), anticommute_by_letters(a, b));
    EXPECT_EQ(a.anticommutes(b), b.anticommutes(a));
  }
}

TEST(PauliProperty, SymplecticRoundTripAndGroupLaws) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    size_t n = 1 + rng() % 40;
    auto a = random_pauli(n, rng), b = random_pauli(n, rng), c = random_pauli(n, rng);
    EXPECT_EQ(PauliOperator::from_symplectic(a.symplectic()), a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_TRUE((a * a).is_identity());
    EXPECT_EQ(a.x_part() * a.z_part(), a);
    // <a, b c> = <a, b> + <a, c>
    EXPECT_EQ(a.anticommutes(b * c), a.anticommutes(b) != a.anticommutes(c));
  }
}

TEST(Gf2, RankOfKnownMatrices) {
  std::vector<BitVec> rows{BitVec::from_string("1100"), BitVec::from_string("0110"), BitVec::from_string("1010")};
  EXPECT_EQ(gf2::rank(rows), 2u);
  rows.push_back(BitVec::from_string("0001"));
  EXPECT_EQ(gf2::rank(rows), 3u);
}

TEST(Gf2Property, NullSpaceIsOrthogonalAndComplementary) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    size_t width = 1 + rng() % 30, m = rng() % 20;
    std::vector<BitVec> rows;
    for (size_t i = 0; i < m; ++i) rows.push_back(random_bits(width, rng));
    auto ns = gf2::null_space(rows, width);
    for (const auto &v : ns) {
      for (const auto &r : rows) EXPECT_FALSE(r.dot(v));
    }
    EXPECT_EQ(gf2::rank(ns) , ns.size());
    EXPECT_EQ(ns.size() + gf2::rank(rows), width);
  }
}

TEST(Gf2Property, BasisSolveReconstructs) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 100; ++t) {
    size_t width = 1 + rng() % 30;
    std::vector<BitVec> rows;
    gf2::Basis b(width);
    for (size_t i = 0; i < 10; ++i) {
      rows.push_back(random_bits(width, rng));
      b.insert(rows.back());
    }
    // A random combination lies in the span and solve() recovers a valid one.
    BitVec target(width);
    for (const auto &r : rows) {
      if (rng() & 1) target ^= r;
    }
    auto sol = b.solve(target);
    ASSERT_TRUE(sol.has_value());
    BitVec rebuilt(width);
    for (size_t i : sol->ones()) rebuilt ^= rows[i];
    EXPECT_EQ(rebuilt, target);
    EXPECT_TRUE(b.contains(target));
  }
}

}  // namespace
}  // namespace ftqec
