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
#include <set>
#include <sstream>

#include "ftqec/code.hpp"
#include "ftqec/gf2.hpp"
#include "test_util.hpp"

namespace ftqec {
namespace {

using test_util::code_asset;

// Membership in the stabilizer group by rank, independent of the code's own reduction.
bool in_group_by_rank(const StabilizerCode &code, const PauliOperator &p) {
  std::vector<BitVec> rows;
  for (const auto &g : code.generators()) rows.push_back(g.symplectic());
  size_t r = gf2::rank(rows);
  rows.push_back(p.symplectic());
  return gf2::rank(rows) == r;
}

bool commutes_with_all(const StabilizerCode &code, const PauliOperator &p) {
  for (const auto &g : code.generators()) {
    if (g.anticommutes(p)) return false;
  }
  return true;
}

// Minimum weight of a nontrivial logical by enumerating all 4^n Paulis.
size_t brute_distance(const StabilizerCode &code) {
  size_t n = code.n(), best = n + 1;
  for (uint64_t m = 1; m < (uint64_t{1} << (2 * n)); ++m) {
    PauliOperator p(n);
    for (size_t q = 0; q < n; ++q) p.set(q, "IXZY"[(m >> (2 * q)) & 3]);
    if (p.weight() >= best) continue;
    if (commutes_with_all(code, p) && !in_group_by_rank(code, p)) best = p.weight();
  }
  return best;
}

void expect_code_invariants(const StabilizerCode &code) {
  const auto &g = code.generators();
  for (size_t i = 0; i < g.size(); ++i) {
    for (size_t j = 0; j < g.size(); ++j) EXPECT_TRUE(g[i].commutes(g[j]));
  }
  std::vector<BitVec> rows;
  for (const auto &s : g) rows.push_back(s.symplectic());
  EXPECT_EQ(gf2::rank(rows), g.size()) << "generators must be independent";
  EXPECT_EQ(code.k(), code.n() - g.size());
  for (size_t i = 0; i < code.k(); ++i) {
    EXPECT_TRUE(commutes_with_all(code, code.logical_x()[i]));
    EXPECT_TRUE(commutes_with_all(code, code.logical_z()[i]));
    for (size_t j = 0; j < code.k(); ++j) {
      EXPECT_EQ(code.logical_x()[i].anticommutes(code.logical_z()[j]), i == j);
      EXPECT_TRUE(code.logical_x()[i].commutes(code.logical_x()[j]));
      EXPECT_TRUE(code.logical_z()[i].commutes(code.logical_z()[j]));
    }
  }
}

struct CatalogEntry {
  std::string name;
  size_t n, k, d;
  bool css;
};

class Catalog : public ::testing::TestWithParam<CatalogEntry> {};

TEST_P(Catalog, ParametersAndInvariants) {
  auto e = GetParam();
  auto code = code_asset(e.name);
  expect_code_invariants(code);
  EXPECT_EQ(code.is_css(), e.css);
  auto params = code_parameters(code, e.d);
  EXPECT_EQ(params.n, e.n);
  EXPECT_EQ(params.k, e.k);
  EXPECT_EQ(params.d, e.d);
  EXPECT_FALSE(params.d_is_lower_bound);
  if (e.n <= 7) {
    EXPECT_EQ(brute_distance(code), e.d);
  }
}

INSTANTIATE_TEST_SUITE_P(Codes, Catalog,
                         ::testing::Values(CatalogEntry{"steane7", 7, 1, 3, true}, CatalogEntry{"color-4-2-2", 4, 2, 2, true},
                                           CatalogEntry{"five-qubit", 5, 1, 3, false},
                                           CatalogEntry{"hamming15", 15, 7, 3, true},
                                           CatalogEntry{"merged-12-2-3.merge", 12, 2, 3, true},
                                           CatalogEntry{"merged-16-4-3.merge", 16, 4, 3, true},
                                           CatalogEntry{"merged-16-4-3", 16, 4, 3, true},
                                           CatalogEntry{"color-12-2-3", 12, 2, 3, true}),
                         [](const auto &info) {
                           std::string s = info.param.name;
                           for (auto &c : s) {
                             if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
                           }
                           return s;
                         });

TEST(Code, SelfDualFlags) {
  EXPECT_TRUE(code_asset("steane7").is_self_dual());
  EXPECT_TRUE(code_asset("hamming15").is_self_dual() || code_asset("hamming15").is_css());
  EXPECT_FALSE(code_asset("five-qubit").is_css());
}

// Perfect distance-3 CSS codes: sector syndromes of weight <= 1 errors are a bijection.
TEST(Code, PerfectCodesHaveBijectiveSectorSyndromes) {
  for (std::string name : {"steane7", "hamming15"}) {
    auto code = code_asset(name);
    for (char l : {'X', 'Z'}) {
      std::set<BitVec> seen{code.syndrome_of(PauliOperator(code.n()))};
      for (size_t q = 0; q < code.n(); ++q) seen.insert(code.syndrome_of(PauliOperator::on(code.n(), l, {q})));
      size_t sector_checks = 0;
      for (size_t i = 0; i < code.num_generators(); ++i) {
        sector_checks += code.generator_type(i) == (l == 'X' ? Sector::Z : Sector::X);
      }
      EXPECT_EQ(seen.size(), code.n() + 1) << name;
      EXPECT_EQ(seen.size(), size_t{1} << sector_checks) << name;
    }
  }
}

TEST(CodeProperty, CosetMinWeightMatchesBruteForceOnSteane) {
  auto code = code_asset("steane7");
  std::vector<PauliOperator> group{PauliOperator(7)};
  for (const auto &g : code.generators()) {
    size_t sz = group.size();
    for (size_t i = 0; i < sz; ++i) group.push_back(group[i] * g);
  }
  ASSERT_EQ(group.size(), 64u);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    auto p = test_util::random_pauli(7, rng);
    for (Sector s : {Sector::FULL, Sector::X, Sector::Z}) {
      size_t best = 99;
      for (const auto &g : group) best = std::min(best, (p * g).weight(s));
      EXPECT_EQ(code.coset_min_weight(p, s), best);
      auto rep = code.min_weight_representative(p, s);
      EXPECT_EQ(rep.weight(s), best);
    }
    EXPECT_EQ(code.in_stabilizer(p), in_group_by_rank(code, p));
    EXPECT_TRUE(code.stabilizer_equivalent(code.canonical(p), p));
  }
}

TEST(CodeProperty, LogicalActionIsLinear) {
  auto code = code_asset("merged-12-2-3.merge");
  std::mt19937_64 rng(5);
  std::vector<PauliOperator> normalizer;
  for (int t = 0; normalizer.size() < 40 && t < 200000; ++t) {
    auto p = test_util::random_pauli(code.n(), rng);
    if (commutes_with_all(code, p)) normalizer.push_back(p);
  }
  ASSERT_GE(normalizer.size(), 10u);
  for (size_t i = 0; i + 1 < normalizer.size(); ++i) {
    auto a = code.logical_action(normalizer[i]), b = code.logical_action(normalizer[i + 1]);
    auto ab = code.logical_action(normalizer[i] * normalizer[i + 1]);
    ASSERT_TRUE(a && b && ab);
    EXPECT_EQ(ab->x, a->x ^ b->x);
    EXPECT_EQ(ab->z, a->z ^ b->z);
    EXPECT_EQ(a->trivial(), in_group_by_rank(code, normalizer[i]));
  }
  EXPECT_FALSE(code.logical_action(PauliOperator::parse("X1", code.n())).has_value());
}

TEST(Code, ErasureAndDirectSum) {
  for (size_t n : {4u, 6u, 8u}) {
    auto e = erasure_code(n);
    expect_code_invariants(e);
    auto p = code_parameters(e, 2);
    EXPECT_EQ(p.k, n - 2);
    EXPECT_EQ(p.d, 2u);
  }
  EXPECT_THROW(erasure_code(5), CodeError);
  auto s = code_asset("steane7");
  auto two = direct_sum(s, s);
  expect_code_invariants(two);
  EXPECT_EQ(two.n(), 14u);
  EXPECT_EQ(two.k(), 2u);
  EXPECT_EQ(code_parameters(two, 3).d, 3u);
}

TEST(Code, RejectsInvalidDefinitions) {
  std::istringstream anti("code bad n=2\nstab XI\nstab ZI\n");
  EXPECT_THROW(parse_code(anti), std::invalid_argument);
  std::istringstream dependent("code bad n=2\nstab XX\nstab XX\n");
  EXPECT_THROW(parse_code(dependent), std::invalid_argument);
}

TEST(Code, RenderRoundTrip) {
  auto code = code_asset("steane7");
  std::istringstream in(render_code(code));
  auto back = parse_code(in);
  EXPECT_EQ(back.generators(), code.generators());
  EXPECT_EQ(back.logical_x(), code.logical_x());
  EXPECT_EQ(back.logical_z(), code.logical_z());
}

}  // namespace
}  // namespace ftqec
