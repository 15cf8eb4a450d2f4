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

#include <cmath>
#include <random>

#include "ftqec/noise.hpp"
#include "test_util.hpp"

namespace ftqec {
namespace {

using test_util::asset;

CompiledProtocol compiled(const std::string &name) {
  auto p = load_protocol(asset("protocols/" + name + ".proto"));
  return CompiledProtocol(p, load_protocol_code(p));
}

// Direct per-location sampler: draws every location independently and
// replays the schedule with frame propagation.
struct NaiveSampler {
  Protocol protocol;
  StabilizerCode code;
  std::vector<Circuit> rounds;
  DecodeTable table;

  explicit NaiveSampler(const std::string &name)
      : protocol(load_protocol(asset("protocols/" + name + ".proto"))),
        code(load_protocol_code(protocol)),
        table(build_lookup(code)) {
    for (size_t rep = 0; rep < protocol.repeat; ++rep) {
      for (const auto &r : protocol.rounds) rounds.push_back(with_idle_rests(r.circuit));
    }
  }

  std::pair<bool, bool> shot(const NoiseParams &np, std::mt19937_64 &rng) const {
    std::uniform_real_distribution<double> u(0, 1);
    double rest = np.p_rest();
    double rest_meas = 1 - std::pow(1 - rest, double(np.meas_ticks));
    PauliOperator frame(code.n());
    bool accepted = true;
    size_t idx = 0;
    for (size_t rep = 0; rep < protocol.repeat; ++rep) {
      for (const auto &pr : protocol.rounds) {
        const auto &c = rounds[idx++];
        std::set<size_t> meas_ticks;
        for (const auto &l : c.locations()) {
          if (is_measurement(l.kind)) meas_ticks.insert(l.tick);
        }
        std::vector<FaultEvent> faults;
        for (uint32_t i = 0; i < c.locations().size(); ++i) {
          const auto &l = c.locations()[i];
          switch (l.kind) {
            case OpKind::CNOT:
            case OpKind::CZ:
            case OpKind::SWAP:
              if (u(rng) < np.p) faults.push_back({i, static_cast<uint8_t>(1 + rng() % 15), false});
              break;
            case OpKind::PREP_Z:
              if (u(rng) < np.p_prep) faults.push_back({i, 1, false});
              break;
            case OpKind::PREP_X:
              if (u(rng) < np.p_prep) faults.push_back({i, 2, false});
              break;
            case OpKind::MEAS_Z:
            case OpKind::MEAS_X:
              if (u(rng) < np.p_meas) faults.push_back({i, 0, true});
              break;
            case OpKind::REST:
              if (u(rng) < (meas_ticks.count(l.tick) ? rest_meas : rest)) {
                faults.push_back({i, static_cast<uint8_t>(1 + rng() % 3), false});
              }
              break;
            default: break;
          }
        }
        auto o = propagate(c, faults, &frame);
        accepted &= o.flags.none();
        frame = o.residual;
        if (!pr.permutation.empty()) apply_permutation(frame, pr.permutation);
      }
    }
    auto corr = table.decode(BitVec(0), code.syndrome_of(frame));
    auto action = code.logical_action(corr * frame);
    return {accepted, action && !action->trivial()};
  }
};

TEST(Rng, StreamsAreKeyed) {
  Rng a(1, 0), b(1, 0), c(1, 1), d(2, 0);
  uint64_t va = a.next();
  EXPECT_EQ(va, b.next());
  EXPECT_NE(va, c.next());
  EXPECT_NE(va, d.next());
  Rng e(5, 5);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    double x = e.uniform();
    ASSERT_GT(x, 0.0);
    ASSERT_LE(x, 1.0);
    sum += x;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Noise, ParamsValidate) {
  EXPECT_NO_THROW(NoiseParams::depolarizing(1e-3, 1).validate());
  EXPECT_THROW(NoiseParams::depolarizing(-1).validate(), std::invalid_argument);
  EXPECT_THROW(NoiseParams::depolarizing(1e-3, 0, 0).validate(), std::invalid_argument);
  EXPECT_DOUBLE_EQ(NoiseParams::depolarizing(1.5e-3, 1).p_rest(), 1.2e-3);
}

TEST(Noise, ZeroNoiseAcceptsEverything) {
  auto cp = compiled("fig5");
  auto r = cp.run(NoiseParams::depolarizing(0, 0), 50000, 1);
  EXPECT_EQ(r.accepted, 50000u);
  EXPECT_EQ(r.logical_errors, 0u);
}

TEST(Noise, FullNoiseProducesFaultsEveryShot) {
  auto cp = compiled("fig2_flagged");
  auto t = cp.sample_trial(NoiseParams::depolarizing(1, 0), 3);
  EXPECT_GT(t.faults, 0u);
}

// Single faults: the control has accepted logical failures, the flagged and
// parallel protocols have none.
size_t accepted_logical_single_faults(const CompiledProtocol &cp) {
  size_t bad = 0;
  for (size_t r = 0; r < cp.rounds().size(); ++r) {
    for (const auto &e : enumerate_locations(cp.rounds()[r])) {
      auto t = cp.evaluate({{r, e}});
      bad += t.accepted && t.logical_error;
    }
  }
  return bad;
}

TEST(Noise, ForcedSingleFaults) {
  EXPECT_GT(accepted_logical_single_faults(compiled("fig2_unflagged")), 0u);
  EXPECT_EQ(accepted_logical_single_faults(compiled("fig2_flagged")), 0u);
  EXPECT_EQ(accepted_logical_single_faults(compiled("fig5")), 0u);
}

TEST(Noise, ForcedHookInLastRoundIsAcceptedLogicalError) {
  auto cp = compiled("fig2_unflagged");
  size_t last = cp.rounds().size() - 1;
  const auto &c = cp.rounds()[last];
  // Z on the ancilla after its second data gate.
  size_t seen = 0;
  std::optional<FaultEvent> hook;
  for (uint32_t i = 0; i < c.locations().size(); ++i) {
    if (c.locations()[i].kind == OpKind::CNOT && ++seen == 2) hook = FaultEvent{i, static_cast<uint8_t>(2 << 2), false};
  }
  ASSERT_TRUE(hook);
  auto t = cp.evaluate({{last, *hook}});
  EXPECT_TRUE(t.accepted);
  EXPECT_TRUE(t.logical_error);
  // The same fault in the flagged circuit raises the flag.
  auto fl = compiled("fig2_flagged");
  const auto &fc = fl.rounds().back();
  for (const auto &e : enumerate_locations(fc, FaultSector::Z_ONLY)) {
    auto o = propagate(fc, e);
    if (o.residual == PauliOperator::parse("Z6,7", 7)) {
      EXPECT_FALSE(fl.evaluate({{fl.rounds().size() - 1, e}}).accepted);
    }
  }
}

TEST(NoiseProperty, CountsIndependentOfThreadCount) {
  auto cp = compiled("fig5");
  auto params = NoiseParams::depolarizing(2e-3, 1);
  auto a = cp.run(params, 100000, 42, 1);
  auto b = cp.run(params, 100000, 42, 3);
  auto c = cp.run(params, 100000, 43, 1);
  EXPECT_EQ(a.accepted, b.accepted);
  EXPECT_EQ(a.logical_errors, b.logical_errors);
  EXPECT_NE(a.accepted, c.accepted);
}

void expect_close(double a, uint64_t na, double b, uint64_t nb, const std::string &what) {
  double sd = std::sqrt(a * (1 - a) / double(na) + b * (1 - b) / double(nb));
  EXPECT_LE(std::abs(a - b), 5 * sd + 1e-12) << what << ": " << a << " vs " << b;
}

TEST(NoiseProperty, SamplerMatchesDirectSimulation) {
  for (std::string name : {"fig2_unflagged", "fig5"}) {
    for (double r : {0.0, 1.0}) {
      auto params = NoiseParams::depolarizing(0.01, r, 2);
      auto fast = compiled(name).run(params, 400000, 7);
      NaiveSampler naive(name);
      std::mt19937_64 rng(99);
      uint64_t n = 100000, acc = 0, err = 0;
      for (uint64_t i = 0; i < n; ++i) {
        auto [a, e] = naive.shot(params, rng);
        acc += a;
        err += a && e;
      }
      expect_close(fast.acceptance_rate(), fast.shots, double(acc) / double(n), n, name + " acceptance");
      expect_close(fast.logical_rate(), fast.accepted, double(err) / double(acc), acc, name + " logical");
    }
  }
}

TEST(Stats, WilsonInterval) {
  auto [lo, hi] = wilson_interval(0, 100);
  EXPECT_EQ(lo, 0.0);
  EXPECT_NEAR(hi, 0.0370, 1e-3);
  auto [l2, h2] = wilson_interval(50, 100);
  EXPECT_NEAR(l2, 0.4038, 1e-3);
  EXPECT_NEAR(h2, 0.5962, 1e-3);
  EXPECT_LT(l2, 0.5);
  EXPECT_GT(h2, 0.5);
}

TEST(Stats, LogLogSlope) {
  std::vector<double> p{1e-4, 1e-3, 1e-2}, quad, lin;
  for (double x : p) {
    quad.push_back(3 * x * x);
    lin.push_back(0.5 * x);
  }
  EXPECT_NEAR(loglog_slope(p, quad), 2.0, 1e-9);
  EXPECT_NEAR(loglog_slope(p, lin), 1.0, 1e-9);
  EXPECT_TRUE(std::isnan(loglog_slope({1e-3}, {1e-6})));
}

TEST(Noise, CsvRow) {
  ExperimentResult r;
  r.protocol = "x";
  r.params = NoiseParams::depolarizing(1e-3, 0.1);
  r.shots = 10;
  r.accepted = 8;
  r.logical_errors = 1;
  auto row = csv_row(r);
  EXPECT_EQ(row.substr(0, 2), "x,");
  std::string header = csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
}

TEST(Noise, IdleComparisonOfParallelAndSequential) {
  auto par = compiled("fig5"), seq = compiled("fig2_flagged");
  EXPECT_LT(par.duration(1), seq.duration(1));
  EXPECT_LT(par.idle_exposure(1), seq.idle_exposure(1));
  EXPECT_EQ(par.syndromes_extracted(), 6u);
  EXPECT_EQ(seq.syndromes_extracted(), 6u);
}

}  // namespace
}  // namespace ftqec
