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

#include "ftqec/fault.hpp"
#include "test_util.hpp"

namespace ftqec {
namespace {

using test_util::circuit_asset;
using test_util::code_asset;

TEST(Fault, EnumerationCounts) {
  auto c = circuit_asset("fig2_unflagged");
  // 1 prep (3 payloads) + 4 CNOTs (15 each) + 1 Z measurement (3 payloads + flip).
  EXPECT_EQ(enumerate_locations(c, FaultSector::ALL).size(), 3u + 4 * 15 + 4);
  // X-only: prep 1, CNOT 3, measurement X payload plus the Z-basis flip.
  EXPECT_EQ(enumerate_locations(c, FaultSector::X_ONLY).size(), 1u + 4 * 3 + 2);
  EXPECT_EQ(enumerate_locations(c, FaultSector::Z_ONLY).size(), 1u + 4 * 3 + 1);
}

TEST(Fault, HookErrorOfUnflaggedGadget) {
  auto c = circuit_asset("fig2_unflagged");
  // Z on the ancilla after the second CNOT spreads to the last two data qubits.
  FaultEvent e{2, static_cast<uint8_t>(2 << 2), false};
  EXPECT_EQ(e.payload_str(c), "IZ");
  auto o = propagate(c, e);
  EXPECT_EQ(o.residual, PauliOperator::parse("Z6,7", 7));
  EXPECT_FALSE(o.detected());
  auto code = code_asset("steane7");
  EXPECT_EQ(code.coset_min_weight(o.residual, Sector::Z), 2u);
}

TEST(Fault, FlagCatchesHook) {
  auto c = circuit_asset("fig2_flagged");
  bool found = false;
  for (const auto &row : full_fault_table(c, FaultSector::Z_ONLY)) {
    if (row.outcome.residual == PauliOperator::parse("Z6,7", 7)) {
      found = true;
      EXPECT_TRUE(row.outcome.detected());
    }
  }
  EXPECT_TRUE(found);
}

TEST(Fault, MeasurementFlipOnlyFlipsItsOutcome) {
  auto c = circuit_asset("fig2_flagged");
  for (const auto &e : enumerate_locations(c)) {
    if (!e.flip) continue;
    auto o = propagate(c, e);
    EXPECT_TRUE(o.residual.is_identity());
    EXPECT_EQ(o.flags.popcount(), 1u);
  }
}

TEST(Fault, InputErrorsAreDetectedBySyndrome) {
  auto c = circuit_asset("fig2_flagged");
  auto x4 = PauliOperator::parse("X4", 7);
  auto o = propagate(c, {}, &x4);
  EXPECT_EQ(o.residual, x4);
  EXPECT_EQ(o.flags.str(), "10");
  auto x1 = PauliOperator::parse("X1", 7);
  EXPECT_FALSE(propagate(c, {}, &x1).detected());
}

// Frame propagation is linear: a fault set's outcome is the XOR of its members'.
TEST(FaultProperty, PropagationIsLinear) {
  std::mt19937_64 rng(29);
  for (std::string name : {"fig5", "fig8a", "sec5_c", "fig13"}) {
    auto c = circuit_asset(name);
    auto events = enumerate_locations(c);
    for (int t = 0; t < 100; ++t) {
      std::vector<FaultEvent> set;
      FaultOutcome sum{PauliOperator(c.n_data()), BitVec(c.num_measurements())};
      size_t k = 1 + rng() % 5;
      for (size_t i = 0; i < k; ++i) {
        auto e = events[rng() % events.size()];
        set.push_back(e);
        auto o = propagate(c, e);
        sum.residual *= o.residual;
        sum.flags ^= o.flags;
      }
      EXPECT_EQ(propagate(c, set), sum) << name;
    }
  }
}

TEST(FaultProperty, SectorEventsStayInSector) {
  for (std::string name : {"fig5", "fig2_flagged"}) {
    auto c = circuit_asset(name);
    for (const auto &row : full_fault_table(c, FaultSector::X_ONLY)) EXPECT_EQ(row.outcome.residual.weight(Sector::Z), 0u);
    for (const auto &row : full_fault_table(c, FaultSector::Z_ONLY)) EXPECT_EQ(row.outcome.residual.weight(Sector::X), 0u);
  }
}

TEST(Fault, SingleFaultTableDeduplicates) {
  auto c = circuit_asset("fig5");
  auto code = code_asset("steane7");
  auto full = full_fault_table(c, FaultSector::ALL);
  auto dedup = single_fault_table(c, code, FaultSector::ALL);
  EXPECT_LT(dedup.size(), full.size());
  for (size_t i = 0; i < dedup.size(); ++i) {
    for (size_t j = i + 1; j < dedup.size(); ++j) {
      bool same = dedup[i].outcome.flags == dedup[j].outcome.flags &&
                  code.stabilizer_equivalent(dedup[i].outcome.residual, dedup[j].outcome.residual);
      EXPECT_FALSE(same);
    }
  }
}

TEST(Fault, IdleRestsFillIdleTicks) {
  auto c = circuit_asset("fig2_unflagged");
  auto r = with_idle_rests(c);
  size_t rests = 0;
  for (const auto &l : r.locations()) rests += l.kind == OpKind::REST;
  // 6 ticks x 7 data qubits minus 4 CNOT slots; the ancilla is never idle.
  EXPECT_EQ(rests, 6u * 7 - 4);
  EXPECT_EQ(r.num_measurements(), c.num_measurements());
}

}  // namespace
}  // namespace ftqec
