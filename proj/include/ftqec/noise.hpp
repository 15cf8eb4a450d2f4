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

#ifndef FTQEC_NOISE_HPP
#define FTQEC_NOISE_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ftqec/circuit.hpp"
#include "ftqec/code.hpp"
#include "ftqec/decoder.hpp"
#include "ftqec/fault.hpp"

namespace ftqec {

/// Counter-keyed generator: splitmix64 expands (seed, stream) into a
/// xoshiro256** state.
class Rng {
 public:
  Rng(uint64_t seed, uint64_t stream) {
    uint64_t s = seed ^ (stream * 0xD1B54A32D192ED03ull);
    for (auto &w : state_) w = splitmix(s);
  }
  uint64_t next() {
    uint64_t r = std::rotl(state_[1] * 5, 7) * 9;
    uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return r;
  }
  /// Uniform in (0, 1].
  double uniform() { return (double(next() >> 11) + 1.0) * 0x1.0p-53; }
  uint64_t below(uint64_t n) { return next() % n; }

 private:
  static uint64_t splitmix(uint64_t &x) {
    uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  std::array<uint64_t, 4> state_{};
};

struct NoiseParams {
  double p = 0;          // CNOT fault probability, uniform over 15 Paulis
  double p_prep = 0;     // preparation flip
  double p_meas = 0;     // measurement flip
  double rest_ratio = 0; // idle rate in units of the CNOT one-qubit marginal
  size_t meas_ticks = 1; // idle exposure of a measurement tick

  static double marginal(double p) { return 12.0 / 15.0 * p; }
  static NoiseParams depolarizing(double p, double r = 0, size_t meas_ticks = 1) {
    return {p, p, p, r, meas_ticks};
  }
  double p_rest() const { return rest_ratio * marginal(p); }
  void validate() const {
    for (double v : {p, p_prep, p_meas, p_rest()}) {
      if (!(v >= 0 && v <= 1)) throw std::invalid_argument("noise probabilities must lie in [0, 1]");
    }
    if (meas_ticks == 0) throw std::invalid_argument("meas_ticks must be at least 1");
  }
};

struct TrialResult {
  bool accepted = true;
  bool logical_error = false;
  size_t faults = 0;
};

struct ExperimentResult {
  std::string protocol;
  NoiseParams params;
  uint64_t shots = 0;
  uint64_t accepted = 0;
  uint64_t logical_errors = 0;  // among accepted
  double seconds = 0;

  double acceptance_rate() const { return shots ? double(accepted) / double(shots) : 0; }
  double logical_rate() const { return accepted ? double(logical_errors) / double(accepted) : 0; }
};

/// Wilson score interval for k successes in n trials.
inline std::pair<double, double> wilson_interval(uint64_t k, uint64_t n, double z = 1.959963984540054) {
  if (n == 0) return {0, 1};
  double nn = double(n), ph = double(k) / nn, z2 = z * z;
  double centre = (ph + z2 / (2 * nn)) / (1 + z2 / nn);
  double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

/// A fault at one location of one round of a protocol.
struct ProtocolFault {
  size_t round = 0;  // index into the flattened schedule
  FaultEvent event;
};

/// Protocol compiled for detection-mode sampling: every fault's effect on
/// the whole schedule is precomputed, and outcomes of several faults are
/// XORed. Each round runs with idle rests inserted.
class CompiledProtocol {
 public:
  static constexpr size_t kFlagWords = 2;
  using Word = std::array<uint64_t, kFlagWords + 2>;  // flags..., x, z

  CompiledProtocol(const Protocol &protocol, const StabilizerCode &code) : name_(protocol.name), code_(code) {
    if (code.n() > 64) throw std::invalid_argument("sampling supports at most 64 data qubits");
    for (const auto &step : flatten(protocol)) {
      rounds_.push_back(with_idle_rests(*step.first));
      perms_.push_back(*step.second);
    }
    for (auto &c : rounds_) {
      if (c.n_data() != code.n()) throw std::invalid_argument("round width differs from the code length");
      offsets_.push_back(num_flags_);
      num_flags_ += c.num_measurements();
    }
    if (num_flags_ > 64 * kFlagWords) throw std::invalid_argument("too many measurements for the sampler");
    compile_channels();
    compile_decoder();
  }

  const std::string &name() const { return name_; }
  const std::vector<Circuit> &rounds() const { return rounds_; }
  size_t num_flags() const { return num_flags_; }

  /// Effect of the given faults on a clean input.
  TrialResult evaluate(const std::vector<ProtocolFault> &faults) const {
    Word acc{};
    for (const auto &f : faults) xor_into(acc, outcome_of(f));
    return finish(acc, faults.size());
  }

  /// One shot drawn from its own stream.
  TrialResult sample_trial(const NoiseParams &params, uint64_t seed) const {
    TrialResult out;
    run_block(params, seed, ~uint64_t{0}, 1, [&](const TrialResult &t) { out = t; });
    return out;
  }

  ExperimentResult run(const NoiseParams &params, uint64_t shots, uint64_t seed, size_t threads = 1) const {
    params.validate();
    if (shots == 0) throw std::invalid_argument("shots must be positive");
    auto start = std::chrono::steady_clock::now();
    uint64_t blocks = (shots + kBlock - 1) / kBlock;
    threads = std::max<size_t>(1, std::min<uint64_t>(threads, blocks));
    std::vector<uint64_t> acc(threads), err(threads);
    std::atomic<uint64_t> next{0};
    auto worker = [&](size_t w) {
      for (uint64_t b; (b = next++) < blocks;) {
        uint64_t n = std::min<uint64_t>(kBlock, shots - b * kBlock);
        uint64_t faulty_acc = 0, faulty = 0;
        run_block(params, seed, b, n, [&](const TrialResult &t) {
          ++faulty;
          faulty_acc += t.accepted;
          err[w] += t.accepted && t.logical_error;
        });
        acc[w] += n - faulty + faulty_acc;
      }
    };
    std::vector<std::thread> pool;
    for (size_t w = 1; w < threads; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto &t : pool) t.join();
    ExperimentResult r;
    r.protocol = name_;
    r.params = params;
    r.shots = shots;
    for (size_t w = 0; w < threads; ++w) {
      r.accepted += acc[w];
      r.logical_errors += err[w];
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }

  /// Idle locations summed over the schedule, with measurement ticks
  /// weighted by meas_ticks.
  double idle_exposure(size_t meas_ticks) const {
    double total = 0;
    for (const auto &ch : channels_) {
      if (ch.kind == Kind::REST) total += ch.in_meas_tick ? double(meas_ticks) : 1.0;
    }
    return total;
  }
  /// Ticks of the schedule, each measurement tick counted meas_ticks times.
  size_t duration(size_t meas_ticks) const {
    size_t total = 0;
    for (const auto &c : rounds_) {
      std::map<size_t, bool> has_meas;
      for (const auto &l : c.locations()) has_meas[l.tick] |= is_measurement(l.kind);
      for (auto &[t, m] : has_meas) total += m ? meas_ticks : 1;
    }
    return total;
  }
  /// Measurements that declare a stabilizer.
  size_t syndromes_extracted() const {
    size_t s = 0;
    for (const auto &c : rounds_) {
      for (size_t m : c.measurements()) s += c.locations()[m].expects.has_value();
    }
    return s;
  }

 private:
  static constexpr uint64_t kBlock = 1 << 14;
  enum class Kind { GATE, PREP, MEAS, REST };
  struct Channel {
    Kind kind;
    bool in_meas_tick = false;
    std::vector<uint32_t> outcomes;  // indices into outcomes_, chosen uniformly
  };

  static void xor_into(Word &a, const Word &b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
  }

  Word pack(const BitVec &flags, size_t offset, const PauliOperator &res) const {
    Word w{};
    for (size_t b : flags.ones()) w[(offset + b) / 64] |= uint64_t{1} << ((offset + b) % 64);
    for (size_t q : res.x().ones()) w[kFlagWords] |= uint64_t{1} << q;
    for (size_t q : res.z().ones()) w[kFlagWords + 1] |= uint64_t{1} << q;
    return w;
  }

  Word outcome_of(const ProtocolFault &f) const {
    if (f.round >= rounds_.size()) throw std::out_of_range("fault round out of range");
    auto o = propagate(rounds_[f.round], std::vector{f.event});
    Word w = pack(o.flags, offsets_[f.round], PauliOperator(code_.n()));
    PauliOperator res = o.residual;
    if (!perms_[f.round].empty()) apply_permutation(res, perms_[f.round]);
    for (size_t r = f.round + 1; r < rounds_.size(); ++r) {
      auto later = propagate(rounds_[r], {}, &res);
      Word lw = pack(later.flags, offsets_[r], PauliOperator(code_.n()));
      xor_into(w, lw);
      res = later.residual;
      if (!perms_[r].empty()) apply_permutation(res, perms_[r]);
    }
    Word rw = pack(BitVec(0), 0, res);
    xor_into(w, rw);
    return w;
  }

  void compile_channels() {
    for (size_t r = 0; r < rounds_.size(); ++r) {
      const auto &c = rounds_[r];
      std::map<size_t, bool> meas_tick;
      for (const auto &l : c.locations()) meas_tick[l.tick] |= is_measurement(l.kind);
      for (uint32_t i = 0; i < c.locations().size(); ++i) {
        const auto &loc = c.locations()[i];
        Channel ch;
        std::vector<FaultEvent> events;
        switch (loc.kind) {
          case OpKind::CNOT:
          case OpKind::CZ:
          case OpKind::SWAP:
            ch.kind = Kind::GATE;
            for (uint8_t p = 1; p < 16; ++p) events.push_back({i, p, false});
            break;
          case OpKind::PREP_Z: ch.kind = Kind::PREP; events.push_back({i, 1, false}); break;
          case OpKind::PREP_X: ch.kind = Kind::PREP; events.push_back({i, 2, false}); break;
          case OpKind::MEAS_Z:
          case OpKind::MEAS_X: ch.kind = Kind::MEAS; events.push_back({i, 0, true}); break;
          case OpKind::REST:
            ch.kind = Kind::REST;
            ch.in_meas_tick = meas_tick[loc.tick];
            for (uint8_t p = 1; p < 4; ++p) events.push_back({i, p, false});
            break;
          case OpKind::PERMUTE: continue;
        }
        for (const auto &e : events) {
          ch.outcomes.push_back(static_cast<uint32_t>(outcomes_.size()));
          outcomes_.push_back(outcome_of({r, e}));
        }
        channels_.push_back(std::move(ch));
      }
    }
  }

  void compile_decoder() {
    size_t m = code_.num_generators();
    if (m > 22) throw std::invalid_argument("too many generators for a materialized decoder");
    for (const auto &g : code_.generators()) gen_.push_back(words_of(g));
    for (const auto &l : code_.logical_x()) logical_.push_back(words_of(l));
    for (const auto &l : code_.logical_z()) logical_.push_back(words_of(l));
    auto table = build_lookup(code_);
    correction_.resize(size_t{1} << m);
    for (size_t s = 0; s < correction_.size(); ++s) {
      BitVec syn(m);
      for (size_t i = 0; i < m; ++i) syn.set(i, (s >> i) & 1);
      correction_[s] = words_of(table.decode(BitVec(0), syn));
    }
  }

  static std::pair<uint64_t, uint64_t> words_of(const PauliOperator &p) {
    uint64_t x = 0, z = 0;
    for (size_t q : p.x().ones()) x |= uint64_t{1} << q;
    for (size_t q : p.z().ones()) z |= uint64_t{1} << q;
    return {x, z};
  }
  static bool anticommute(std::pair<uint64_t, uint64_t> a, uint64_t x, uint64_t z) {
    return (std::popcount(a.first & z) + std::popcount(a.second & x)) & 1;
  }

  TrialResult finish(const Word &w, size_t faults) const {
    TrialResult t;
    t.faults = faults;
    for (size_t i = 0; i < kFlagWords; ++i) t.accepted &= w[i] == 0;
    uint64_t x = w[kFlagWords], z = w[kFlagWords + 1];
    size_t s = 0;
    for (size_t i = 0; i < gen_.size(); ++i) s |= size_t{anticommute(gen_[i], x, z)} << i;
    x ^= correction_[s].first;
    z ^= correction_[s].second;
    for (const auto &l : logical_) t.logical_error |= anticommute(l, x, z);
    return t;
  }

  /// Samples `n` shots of block `block`; calls `sink` for each shot with at
  /// least one fault. Fault positions come from geometric skips over the
  /// (shot, channel) grid of each probability class.
  template <class Sink>
  void run_block(const NoiseParams &params, uint64_t seed, uint64_t block, uint64_t n, Sink &&sink) const {
    Rng rng(seed, block);
    double rest_single = params.p_rest();
    double rest_meas = 1 - std::pow(1 - rest_single, double(params.meas_ticks));
    auto prob = [&](const Channel &ch) {
      switch (ch.kind) {
        case Kind::GATE: return params.p;
        case Kind::PREP: return params.p_prep;
        case Kind::MEAS: return params.p_meas;
        case Kind::REST: return ch.in_meas_tick ? rest_meas : rest_single;
      }
      return 0.0;
    };
    std::map<double, std::vector<uint32_t>> classes;
    for (uint32_t i = 0; i < channels_.size(); ++i) {
      double q = prob(channels_[i]);
      if (q > 0) classes[q].push_back(i);
    }
    std::vector<Word> acc(n);
    std::vector<uint32_t> count(n, 0);
    std::vector<uint64_t> touched;
    for (auto &[q, members] : classes) {
      uint64_t k = members.size(), total = n * k;
      double lq = std::log1p(-q);
      uint64_t pos = 0;
      while (true) {
        if (q < 1) {
          double skip = std::floor(std::log(rng.uniform()) / lq);
          if (skip >= double(total - pos)) break;
          pos += uint64_t(skip);
        }
        if (pos >= total) break;
        uint64_t shot = pos / k;
        const auto &ch = channels_[members[pos % k]];
        xor_into(acc[shot], outcomes_[ch.outcomes[rng.below(ch.outcomes.size())]]);
        if (count[shot]++ == 0) touched.push_back(shot);
        ++pos;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (uint64_t s : touched) sink(finish(acc[s], count[s]));
  }

  std::string name_;
  StabilizerCode code_;
  std::vector<Circuit> rounds_;
  std::vector<std::vector<size_t>> perms_;
  std::vector<size_t> offsets_;
  size_t num_flags_ = 0;
  std::vector<Channel> channels_;
  std::vector<Word> outcomes_;
  std::vector<std::pair<uint64_t, uint64_t>> gen_, logical_;
  std::vector<std::pair<uint64_t, uint64_t>> correction_;
};

inline TrialResult sample_trial(const CompiledProtocol &p, const NoiseParams &params, uint64_t seed) {
  return p.sample_trial(params, seed);
}

inline ExperimentResult run_experiment(const CompiledProtocol &p, const NoiseParams &params, uint64_t shots,
                                       uint64_t seed, size_t threads = 1) {
  return p.run(params, shots, seed, threads);
}

/// Least-squares slope of log(rate) against log(p), skipping zero rates.
inline double loglog_slope(const std::vector<double> &p, const std::vector<double> &rate) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t n = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (rate[i] <= 0) continue;
    double x = std::log(p[i]), y = std::log(rate[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++n;
  }
  if (n < 2) return std::nan("");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::string csv_header() { return "protocol,p,r,shots,accepted,logical_errors,acc_rate,log_rate,ci_low,ci_high\n"; }

inline std::string csv_row(const ExperimentResult &r) {
  auto [lo, hi] = wilson_interval(r.logical_errors, r.accepted);
  std::ostringstream out;
  out.precision(10);
  out << r.protocol << ',' << r.params.p << ',' << r.params.rest_ratio << ',' << r.shots << ',' << r.accepted << ','
      << r.logical_errors << ',' << r.acceptance_rate() << ',' << r.logical_rate() << ',' << lo << ',' << hi << '\n';
  return out.str();
}

struct IdleMetric {
  std::string protocol;
  double r = 0;
  size_t syndromes = 0;
  size_t ticks = 0;
  double idle_locations = 0;      // per schedule
  double idle_fault_weight = 0;   // idle_locations times p_rest / p
};

struct Comparison {
  std::vector<ExperimentResult> runs;
  std::vector<IdleMetric> idle;
};

/// Runs both protocols over the (p, r) grid and reports, per r, the
/// deterministic idle exposure of each protocol normalized per syndrome.
inline Comparison compare_parallel_vs_sequential(const CompiledProtocol &parallel, const CompiledProtocol &sequential,
                                                 const std::vector<double> &ps, const std::vector<double> &rs,
                                                 uint64_t shots, uint64_t seed, size_t threads = 1,
                                                 size_t meas_ticks = 1) {
  Comparison out;
  for (double r : rs) {
    for (const CompiledProtocol *proto : {&parallel, &sequential}) {
      IdleMetric m;
      m.protocol = proto->name();
      m.r = r;
      m.syndromes = proto->syndromes_extracted();
      m.ticks = proto->duration(meas_ticks);
      m.idle_locations = proto->idle_exposure(meas_ticks);
      m.idle_fault_weight = m.idle_locations * r * NoiseParams::marginal(1.0);
      out.idle.push_back(m);
      for (double p : ps) {
        out.runs.push_back(proto->run(NoiseParams::depolarizing(p, r, meas_ticks), shots, seed, threads));
      }
    }
  }
  return out;
}

}  // namespace ftqec

#endif  // FTQEC_NOISE_HPP
