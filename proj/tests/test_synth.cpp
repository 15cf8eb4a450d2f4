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

#include "ftqec/synth.hpp"
#include "test_util.hpp"

namespace ftqec {
namespace {

using test_util::circuit_asset;
using test_util::code_asset;

std::vector<std::string> canon(const SynthOutput &o) {
  std::vector<std::string> out;
  for (const auto &r : o.results) out.push_back(r.canonical);
  return out;
}

TEST(Plaquette, SquareOrdersFallIntoThreeHookClasses) {
  auto code = code_asset("color-12-2-3");
  PlaquetteOptions opt;
  opt.filter = SynthFilter::NONE;
  auto out = search_plaquette_orders(code, PauliOperator::parse("Z1,2,4,5", 12), opt);
  EXPECT_EQ(out.stats.candidates, 24u);
  ASSERT_EQ(out.results.size(), 3u);
  size_t total = 0;
  std::vector<PauliOperator> hooks;
  for (const auto &r : out.results) {
    total += r.equivalent;
    ASSERT_EQ(r.correlated.size(), 1u);
    hooks.push_back(r.correlated[0]);
  }
  EXPECT_EQ(total, 24u);
  for (std::string want : {"Z1,2", "Z1,4", "Z1,5"}) {
    auto w = PauliOperator::parse(want, 12);
    size_t matches = 0;
    for (const auto &h : hooks) matches += code.stabilizer_equivalent(h, w);
    EXPECT_EQ(matches, 1u) << want;
  }
}

TEST(Plaquette, SteaneWeightFourHasNoUnflaggedOrder) {
  auto out = search_plaquette_orders(code_asset("steane7"), PauliOperator::parse("Z4,5,6,7", 7));
  EXPECT_EQ(out.stats.candidates, 24u);
  EXPECT_TRUE(out.results.empty());
}

TEST(Plaquette, DedicatedFlagFixesSteaneGadget) {
  PlaquetteOptions opt;
  opt.ancilla_budget = 2;
  opt.flag_slots_bracket_only = true;
  auto out = search_plaquette_orders(code_asset("steane7"), PauliOperator::parse("Z4,5,6,7", 7), opt);
  EXPECT_FALSE(out.results.empty());
  for (const auto &r : out.results) EXPECT_TRUE(r.correlated.empty());
}

TEST(Pair, SteaneMutualFlagPairExists) {
  PairOptions opt;
  opt.max_results = 1;
  auto out = search_mutual_flag_pair(code_asset("steane7"), PauliOperator::parse("X4,5,6,7", 7),
                                     PauliOperator::parse("Z2,3,6,7", 7), opt);
  ASSERT_FALSE(out.results.empty());
  std::vector<Circuit> fam{out.results[0].circuit};
  EXPECT_TRUE(verify_agp_distance3(fam, code_asset("steane7")).pass);
}

TEST(Pair, FourQubitCodeDetectionPair) {
  PairOptions opt;
  opt.filter = SynthFilter::DETECTION;
  opt.catch_bracket_only = true;
  auto out = search_mutual_flag_pair(code_asset("color-4-2-2"), PauliOperator::parse("XXXX", 4),
                                     PauliOperator::parse("ZZZZ", 4), opt);
  EXPECT_FALSE(out.results.empty());
}

TEST(Pair, FiveQubitCodeHasNoTwoAncillaPair) {
  auto code = code_asset("five-qubit");
  auto out = search_mutual_flag_pair(code, code.generators()[0], code.generators()[1]);
  EXPECT_GT(out.stats.valid, 0u);
  EXPECT_TRUE(out.results.empty());
}

TEST(FlagFree, MergedSixteenQubitCodeHasSchedule) {
  auto s = search_flag_free_schedule(code_asset("merged-16-4-3.merge"));
  ASSERT_TRUE(s.found);
  EXPECT_EQ(s.protocol.rounds.size(), 2u);
  EXPECT_TRUE(verify_protocol(s.protocol, code_asset("merged-16-4-3.merge")).pass);
}

TEST(FlagFree, PerfectCodesHaveNone) {
  EXPECT_FALSE(search_flag_free_schedule(code_asset("steane7")).found);
  EXPECT_FALSE(search_flag_free_schedule(code_asset("hamming15")).found);
}

TEST(Parallel, DepthSixSteaneScheduleWithCatches) {
  auto code = code_asset("steane7");
  ParallelOptions opt;
  opt.max_depth = 6;
  opt.catches = {{0, 1}, {0, 2}};
  opt.max_results = 1;
  std::vector<PauliOperator> stabs{PauliOperator::parse("X1,3,5,7", 7), PauliOperator::parse("Z2,3,6,7", 7),
                                   PauliOperator::parse("Z4,5,6,7", 7)};
  auto out = search_parallel_schedule(code, stabs, opt);
  ASSERT_EQ(out.results.size(), 1u);
  EXPECT_LE(round_profile(out.results[0].circuit).cnot_depth, 6u);
  EXPECT_THROW(search_parallel_schedule(code, stabs, ParallelOptions{{}, 6, {{1, 2}}}), std::invalid_argument);
}

TEST(SynthProperty, ResultsIndependentOfThreadCount) {
  auto code = code_asset("steane7");
  PairOptions one;
  one.catch_bracket_only = true;
  PairOptions four = one;
  four.threads = 4;
  auto a = PauliOperator::parse("X4,5,6,7", 7), b = PauliOperator::parse("Z2,3,6,7", 7);
  auto r1 = search_mutual_flag_pair(code, a, b, one);
  auto r4 = search_mutual_flag_pair(code, a, b, four);
  EXPECT_EQ(canon(r1), canon(r4));
  EXPECT_EQ(r1.stats.passed, r4.stats.passed);
}

TEST(Generators, GateCountFormulas) {
  for (size_t n : {4u, 6u, 8u}) {
    std::vector<size_t> unc;
    for (size_t q = 1; q < n; ++q) unc.push_back(q);
    auto round = zero_ancilla_round(n, 0, unc);
    EXPECT_EQ(cnot_count(round), 6 * n - 2);
    measured_operators(round, direct_sum(erasure_code(n), erasure_code(n)));
    EXPECT_EQ(cnot_count(flagged_comparator(n)), 2 * (n + 2));
    EXPECT_EQ(cnot_count(circuit_asset("sec6a_erasure_n" + std::to_string(n))), 6 * n - 2);
    EXPECT_EQ(cnot_count(circuit_asset("sec6a_comparator_n" + std::to_string(n))), 2 * (n + 2));
  }
  EXPECT_EQ(cnot_count(circuit_asset("fig8a")), 17u);
}

TEST(Generators, FlaggedFamilyPassesAgp) {
  auto code = code_asset("steane7");
  auto fam = flagged_family(code);
  EXPECT_EQ(fam.size(), code.num_generators());
  EXPECT_TRUE(verify_agp_distance3(fam, code).pass);
}

TEST(Generators, SharedFlagHammingCircuitPassesAgp) {
  std::vector<Circuit> fam{circuit_asset("fig8a")};
  auto r = verify_agp_distance3(fam, code_asset("hamming15"));
  EXPECT_TRUE(r.pass) << r.render();
}

}  // namespace
}  // namespace ftqec
