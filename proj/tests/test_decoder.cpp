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

#include <map>
#include <random>
#include <sstream>

#include "ftqec/decoder.hpp"
#include "test_util.hpp"

namespace ftqec {
namespace {

using test_util::asset;
using test_util::code_asset;

BitVec no_flags(const DecodeTable &t) { return BitVec(t.num_flags); }

TEST(Lookup, CorrectsEverySingleQubitError) {
  for (std::string name : {"steane7", "five-qubit", "hamming15", "merged-12-2-3.merge"}) {
    auto code = code_asset(name);
    auto t = build_lookup(code);
    for (size_t q = 0; q < code.n(); ++q) {
      for (char l : {'X', 'Y', 'Z'}) {
        auto e = PauliOperator::on(code.n(), l, {q});
        auto c = t.decode(no_flags(t), code.syndrome_of(e));
        EXPECT_TRUE(code.in_stabilizer(c * e)) << name << " " << e.sparse();
      }
    }
  }
}

TEST(LookupProperty, CorrectionRestoresCodespace) {
  std::mt19937_64 rng(31);
  for (std::string name : {"steane7", "five-qubit", "color-4-2-2", "hamming15"}) {
    auto code = code_asset(name);
    auto t = build_lookup(code);
    for (int i = 0; i < 200; ++i) {
      auto e = test_util::random_pauli(code.n(), rng);
      auto c = t.decode(no_flags(t), code.syndrome_of(e));
      EXPECT_TRUE(code.syndrome_of(c * e).none()) << name;
    }
  }
}

// Per-sector minimum weight for each syndrome by exhaustive enumeration.
TEST(LookupProperty, SteaneCorrectionsAreMinimumWeight) {
  auto code = code_asset("steane7");
  auto t = build_lookup(code);
  for (char l : {'X', 'Z'}) {
    std::map<BitVec, size_t> best;
    for (unsigned m = 0; m < 128; ++m) {
      std::vector<size_t> qs;
      for (size_t q = 0; q < 7; ++q) {
        if ((m >> q) & 1) qs.push_back(q);
      }
      auto p = PauliOperator::on(7, l, qs);
      auto s = code.syndrome_of(p);
      auto it = best.find(s);
      if (it == best.end() || it->second > qs.size()) best[s] = qs.size();
    }
    for (auto &[s, w] : best) EXPECT_EQ(t.decode(no_flags(t), s).weight(), w);
  }
}

TEST(Decoder, RejectsMismatchedKeys) {
  auto t = build_lookup(code_asset("steane7"));
  EXPECT_THROW(t.decode(BitVec(1), BitVec(6)), std::invalid_argument);
  EXPECT_THROW(t.decode(BitVec(0), BitVec(5)), std::invalid_argument);
}

TEST(Decoder, FlagTableRefusesFailedVerdict) {
  VerdictReport r;
  r.pass = false;
  EXPECT_THROW(build_flag_table(r, code_asset("steane7")), std::invalid_argument);
}

TEST(Decoder, ExportImportRoundTrip) {
  auto p = load_protocol(asset("protocols/fig5.proto"));
  auto code = load_protocol_code(p);
  auto verdict = verify_protocol(p, code);
  ASSERT_TRUE(verdict.pass);
  auto t = build_flag_table(verdict, code);
  std::string text = export_table(t);
  std::istringstream in(text);
  auto back = import_table(in, code);
  EXPECT_EQ(export_table(back), text);
  ASSERT_EQ(back.parts.size(), t.parts.size());
  for (size_t i = 0; i < t.parts.size(); ++i) {
    for (const auto &[key, c] : t.parts[i].entries) {
      EXPECT_EQ(back.parts[i].entries.at(key), c);
    }
  }
}

TEST(Decoder, InvariantTableDecodesMembers) {
  auto set = load_invariant_set(asset("invariants/sec5_sx.inv"));
  auto b = code_asset("steane7");
  auto code2 = direct_sum(b, b);
  auto t = build_invariant_table(set, code2);
  for (const auto &[label, e] : set.errors) {
    auto c = t.decode(no_flags(t), code2.syndrome_of(e));
    EXPECT_TRUE(code2.stabilizer_equivalent(c, e)) << label;
  }
}

}  // namespace
}  // namespace ftqec
