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

#ifndef FTQEC_SYNTH_HPP
#define FTQEC_SYNTH_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ftqec/circuit.hpp"
#include "ftqec/code.hpp"
#include "ftqec/fault.hpp"
#include "ftqec/verify.hpp"

namespace ftqec {

// ---------------------------------------------------------------------------
// Extraction plans: which ancilla touches which data qubit in which order,
// plus catch gates between ancillas and dedicated flag brackets. A plan is
// turned into a circuit by scheduling every gate at the earliest tick its
// predecessors allow.

enum class AncillaBasis { X, Z };

/// Z-type stabilizers use a Z-basis ancilla as CNOT target; anything with an
/// X component uses an X-basis ancilla as control (CZ for Z letters).
inline AncillaBasis ancilla_basis(const PauliOperator &s) {
  return s.x().none() ? AncillaBasis::Z : AncillaBasis::X;
}

struct ExtractionPlan {
  struct Catch {
    size_t a = 0, b = 0;            // ancilla indices
    size_t slot_a = 0, slot_b = 0;  // after this many data gates of a and of b
  };
  struct Flag {
    size_t ancilla = 0;
    size_t first = 0, second = 0;  // slots of the two flag gates
  };

  std::string name;
  size_t n_data = 0;
  std::vector<PauliOperator> stabilizers;  // one syndrome ancilla each
  std::vector<std::vector<size_t>> orders;  // data qubits per ancilla in gate order
  std::vector<Catch> catches;
  std::vector<Flag> flags;
  /// For data qubits touched by several ancillas: the ancillas in the order
  /// they act. Missing entries default to ascending ancilla index.
  std::map<size_t, std::vector<size_t>> data_order;
  /// Measurement order over syndrome ancillas (flags always follow).
  std::vector<size_t> meas_order;
};

namespace detail {

inline std::vector<Location> coupling(size_t anc, size_t q, char letter, AncillaBasis b) {
  auto gate = [](OpKind k, size_t c, size_t t) {
    Location l;
    l.kind = k;
    l.qubits = {c, t};
    return l;
  };
  if (b == AncillaBasis::Z) {
    if (letter != 'Z') throw std::invalid_argument("a Z-basis ancilla can only extract Z letters");
    return {gate(OpKind::CNOT, q, anc)};
  }
  switch (letter) {
    case 'X': return {gate(OpKind::CNOT, anc, q)};
    case 'Z': return {gate(OpKind::CZ, anc, q)};
    case 'Y': return {gate(OpKind::CNOT, anc, q), gate(OpKind::CZ, anc, q)};
    default: throw std::invalid_argument("identity letter in a stabilizer support");
  }
}

/// Gate nodes with explicit precedence; every pair of nodes sharing a qubit
/// must be ordered by a path of edges.
struct GateGraph {
  std::vector<std::vector<Location>> nodes;
  std::vector<std::vector<size_t>> succ;

  size_t add(std::vector<Location> locs) {
    nodes.push_back(std::move(locs));
    succ.emplace_back();
    return nodes.size() - 1;
  }
  void order(size_t a, size_t b) { succ[a].push_back(b); }

  /// Earliest start tick per node (first gate tick is `first`), or nullopt
  /// when the precedence relation has a cycle.
  std::optional<std::vector<size_t>> schedule(size_t first) const {
    size_t n = nodes.size();
    std::vector<size_t> indeg(n, 0), start(n, first);
    for (auto &s : succ) {
      for (size_t v : s) ++indeg[v];
    }
    std::vector<size_t> ready;
    for (size_t i = 0; i < n; ++i) {
      if (!indeg[i]) ready.push_back(i);
    }
    size_t done = 0;
    while (!ready.empty()) {
      size_t u = ready.back();
      ready.pop_back();
      ++done;
      for (size_t v : succ[u]) {
        start[v] = std::max(start[v], start[u] + nodes[u].size());
        if (--indeg[v] == 0) ready.push_back(v);
      }
    }
    if (done != n) return std::nullopt;
    return start;
  }
};

}  // namespace detail

/// Circuit for a plan, or nullopt when the requested orders are cyclic.
inline std::optional<Circuit> realize(const ExtractionPlan &plan) {
  size_t m = plan.stabilizers.size();
  if (plan.orders.size() != m) throw std::invalid_argument("plan needs one order per stabilizer");
  size_t n_anc = m + plan.flags.size();
  auto anc = [&](size_t i) { return plan.n_data + i; };
  std::vector<AncillaBasis> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = ancilla_basis(plan.stabilizers[i]);

  detail::GateGraph g;
  // Chain of each syndrome ancilla: slot k holds the catch/flag nodes placed
  // after k data gates.
  std::vector<std::vector<std::vector<size_t>>> slot_nodes(m);
  std::vector<std::vector<size_t>> data_nodes(m);
  for (size_t i = 0; i < m; ++i) {
    slot_nodes[i].resize(plan.orders[i].size() + 1);
    for (size_t q : plan.orders[i]) {
      data_nodes[i].push_back(g.add(detail::coupling(anc(i), q, plan.stabilizers[i].letter(q), basis[i])));
    }
  }
  for (const auto &c : plan.catches) {
    Location l;
    if (basis[c.a] == AncillaBasis::Z && basis[c.b] == AncillaBasis::Z) {
      throw std::invalid_argument("no catch gate couples two Z-basis ancillas");
    }
    if (basis[c.a] == AncillaBasis::X && basis[c.b] == AncillaBasis::X) {
      l.kind = OpKind::CZ;
      l.qubits = {anc(c.a), anc(c.b)};
    } else {
      l.kind = OpKind::CNOT;
      l.qubits = basis[c.a] == AncillaBasis::X ? std::vector<size_t>{anc(c.a), anc(c.b)}
                                               : std::vector<size_t>{anc(c.b), anc(c.a)};
    }
    size_t node = g.add({l});
    slot_nodes[c.a].at(c.slot_a).push_back(node);
    slot_nodes[c.b].at(c.slot_b).push_back(node);
  }
  std::vector<std::vector<size_t>> flag_nodes(plan.flags.size());
  for (size_t f = 0; f < plan.flags.size(); ++f) {
    const auto &fl = plan.flags[f];
    size_t a = fl.ancilla;
    for (size_t slot : {fl.first, fl.second}) {
      Location l;
      l.kind = OpKind::CNOT;
      l.qubits = basis[a] == AncillaBasis::Z ? std::vector<size_t>{anc(m + f), anc(a)} : std::vector<size_t>{anc(a), anc(m + f)};
      size_t node = g.add({l});
      slot_nodes[a].at(slot).push_back(node);
      flag_nodes[f].push_back(node);
    }
    g.order(flag_nodes[f][0], flag_nodes[f][1]);
  }
  for (size_t i = 0; i < m; ++i) {
    std::vector<size_t> chain;
    for (size_t k = 0; k <= plan.orders[i].size(); ++k) {
      for (size_t node : slot_nodes[i][k]) chain.push_back(node);
      if (k < plan.orders[i].size()) chain.push_back(data_nodes[i][k]);
    }
    for (size_t k = 1; k < chain.size(); ++k) g.order(chain[k - 1], chain[k]);
  }
  // Shared data qubits.
  std::map<size_t, std::vector<std::pair<size_t, size_t>>> touching;  // q -> (ancilla, node)
  for (size_t i = 0; i < m; ++i) {
    for (size_t k = 0; k < plan.orders[i].size(); ++k) touching[plan.orders[i][k]].push_back({i, data_nodes[i][k]});
  }
  for (auto &[q, list] : touching) {
    if (list.size() < 2) continue;
    std::vector<size_t> seq;
    auto it = plan.data_order.find(q);
    if (it != plan.data_order.end()) {
      for (size_t a : it->second) {
        for (auto &[ai, node] : list) {
          if (ai == a) seq.push_back(node);
        }
      }
      if (seq.size() != list.size()) throw std::invalid_argument("data_order for a qubit must list each touching ancilla once");
    } else {
      for (auto &p : list) seq.push_back(p.second);
    }
    for (size_t k = 1; k < seq.size(); ++k) g.order(seq[k - 1], seq[k]);
  }
  auto start = g.schedule(1);
  if (!start) return std::nullopt;

  Circuit c(plan.n_data, n_anc);
  c.set_name(plan.name);
  for (size_t i = 0; i < n_anc; ++i) {
    Location p;
    bool x_basis = i < m ? basis[i] == AncillaBasis::X : basis[plan.flags[i - m].ancilla] == AncillaBasis::Z;
    p.kind = x_basis ? OpKind::PREP_X : OpKind::PREP_Z;
    p.tick = 0;
    p.qubits = {anc(i)};
    c.append(p);
  }
  std::vector<std::pair<size_t, Location>> timed;
  size_t last = 0;
  for (size_t v = 0; v < g.nodes.size(); ++v) {
    for (size_t k = 0; k < g.nodes[v].size(); ++k) {
      Location l = g.nodes[v][k];
      l.tick = (*start)[v] + k;
      last = std::max(last, l.tick);
      timed.emplace_back(l.tick, l);
    }
  }
  std::stable_sort(timed.begin(), timed.end(), [](auto &a, auto &b) { return a.first < b.first; });
  for (auto &[t, l] : timed) c.append(l);
  std::vector<size_t> order = plan.meas_order;
  if (order.empty()) {
    order.resize(m);
    std::iota(order.begin(), order.end(), 0);
  }
  for (size_t i = 0; i < m; ++i) {
    if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
  }
  for (size_t f = 0; f < plan.flags.size(); ++f) order.push_back(m + f);
  for (size_t i : order) {
    Location l;
    bool x_basis = i < m ? basis[i] == AncillaBasis::X : basis[plan.flags[i - m].ancilla] == AncillaBasis::Z;
    l.kind = x_basis ? OpKind::MEAS_X : OpKind::MEAS_Z;
    l.tick = last + 1;
    l.qubits = {anc(i)};
    if (i < m) l.expects = plan.stabilizers[i];
    c.append(l);
  }
  c.validate();
  return c;
}

/// Single-ancilla extraction of `stabilizer` in the given qubit order,
/// optionally with a dedicated flag whose two gates sit after `flag_slots`
/// data gates.
inline Circuit gadget(size_t n_data, const PauliOperator &stabilizer, const std::vector<size_t> &order,
                      std::optional<std::pair<size_t, size_t>> flag_slots = std::nullopt, std::string name = {}) {
  ExtractionPlan p;
  p.name = std::move(name);
  p.n_data = n_data;
  p.stabilizers = {stabilizer};
  p.orders = {order};
  if (flag_slots) p.flags.push_back({0, flag_slots->first, flag_slots->second});
  return *realize(p);
}

/// Gadget with the flag bracketing everything but the first and last data
/// gate.
inline Circuit flagged_gadget(size_t n_data, const PauliOperator &stabilizer, std::vector<size_t> order = {}) {
  if (order.empty()) {
    for (size_t q = 0; q < n_data; ++q) {
      if (stabilizer.letter(q) != 'I') order.push_back(q);
    }
  }
  return gadget(n_data, stabilizer, order, std::make_pair(size_t{1}, order.size() - 1));
}

/// Flagged extraction of every generator of a code, one gadget per
/// generator in generator order.
inline std::vector<Circuit> flagged_family(const StabilizerCode &code) {
  std::vector<Circuit> out;
  for (const auto &g : code.generators()) out.push_back(flagged_gadget(code.n(), g));
  return out;
}

// ---------------------------------------------------------------------------
// Two-block rounds without extra qubits.

/// One round on blocks A (qubits 0..n-1) and B (n..2n-1) that measures
/// Z_S (x) I and I (x) X_S by collecting each parity into the first support
/// qubit of its block. `uncompute` lists the rest of S in uncompute order;
/// compute runs in reverse. Pairs of A_j -> B_j gates bracket everything,
/// and four B_c -> A_c gates sit before compute, on either side of the
/// measurements and after uncompute. CNOT count 6|S| - 2.
///
/// Labels: A-compute gates of the rest of S in ascending qubit order get
/// a, b, c, ...; the first |S| - 2 B-uncompute gates continue the alphabet.
inline Circuit zero_ancilla_round(size_t n, size_t collector, const std::vector<size_t> &uncompute,
                                  std::string name = {}) {
  std::vector<size_t> support{collector};
  support.insert(support.end(), uncompute.begin(), uncompute.end());
  {
    auto s = support;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end() || s.back() >= n) {
      throw std::invalid_argument("support must be distinct qubits of the block");
    }
  }
  size_t k = uncompute.size();
  std::vector<size_t> sorted(uncompute);
  std::sort(sorted.begin(), sorted.end());
  std::map<size_t, std::string> a_label, b_label;
  char next = 'a';
  for (size_t q : sorted) a_label[q] = std::string(1, next++);
  for (size_t i = 0; i + 1 < k; ++i) b_label[uncompute[i]] = std::string(1, next++);

  Circuit c(2 * n, 0);
  c.set_name(std::move(name));
  size_t tick = 0;
  auto cnot = [&](size_t ctl, size_t tgt, std::string label = {}) {
    Location l;
    l.kind = OpKind::CNOT;
    l.tick = tick;
    l.qubits = {ctl, tgt};
    l.label = std::move(label);
    c.append(l);
  };
  size_t a_c = collector, b_c = n + collector;
  auto black = [&]() {
    for (size_t q : sorted) cnot(q, n + q);
  };
  cnot(b_c, a_c);
  black();
  for (size_t i = k; i-- > 0;) {
    ++tick;
    size_t q = uncompute[i];
    cnot(q, a_c, a_label[q]);
    cnot(b_c, n + q);
  }
  ++tick;
  cnot(b_c, a_c);
  ++tick;
  PauliOperator zs(2 * n), xs(2 * n);
  for (size_t q : support) {
    zs.set(q, 'Z');
    xs.set(n + q, 'X');
  }
  Location mz;
  mz.kind = OpKind::MEAS_Z;
  mz.tick = tick;
  mz.qubits = {a_c};
  mz.expects = zs;
  c.append(mz);
  Location mx = mz;
  mx.kind = OpKind::MEAS_X;
  mx.qubits = {b_c};
  mx.expects = xs;
  c.append(mx);
  ++tick;
  cnot(b_c, a_c);
  for (size_t i = 0; i < k; ++i) {
    ++tick;
    size_t q = uncompute[i];
    cnot(q, a_c);
    cnot(b_c, n + q, b_label.count(q) ? b_label[q] : std::string{});
  }
  ++tick;
  cnot(b_c, a_c);
  black();
  c.validate();
  return c;
}

/// Two flagged single-ancilla gadgets measuring X^n and Z^n: the
/// two-extra-qubit comparator, 2(n + 2) CNOTs.
inline Circuit flagged_comparator(size_t n) {
  std::vector<size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  ExtractionPlan p;
  p.name = "flagged-comparator-" + std::to_string(n);
  p.n_data = n;
  p.stabilizers = {PauliOperator::on(n, 'X', all), PauliOperator::on(n, 'Z', all)};
  p.orders = {all, all};
  p.flags = {{0, 1, n - 1}, {1, 1, n - 1}};
  // Sequential: the Z gadget starts after the X gadget finishes.
  for (size_t q = 0; q < n; ++q) p.data_order[q] = {0, 1};
  return *realize(p);
}

// ---------------------------------------------------------------------------
// Searches.

struct SearchStats {
  size_t candidates = 0;  // points of the declared search space
  size_t realized = 0;    // acyclic, within depth and locality bounds
  size_t valid = 0;       // measure the requested stabilizers
  size_t passed = 0;      // pass the filter (before deduplication)
  std::string bound;
};

struct SynthResult {
  ExtractionPlan plan;
  Circuit circuit;
  std::vector<PauliOperator> correlated;  // unflagged residuals of sector weight >= 2
  std::string canonical;
  size_t equivalent = 1;  // candidates that collapsed onto this one
};

struct SynthOutput {
  std::vector<SynthResult> results;
  SearchStats stats;
};

enum class SynthFilter {
  AUTO,        // AGP when the plan has flags or catches, otherwise FLAG_FREE
  AGP,         // verify_agp_distance3 on the circuit alone
  FLAG_FREE,   // single-round verify_protocol: all outcomes distinguishable
  DETECTION,   // verify_detection (distance-2 codes)
  NONE,        // only require the right measured operators
};

struct SearchOptions {
  std::optional<Layout> layout;
  SynthFilter filter = SynthFilter::AUTO;
  /// Extra in-context filter applied after the standalone one.
  std::function<bool(const Circuit &)> context;
  /// Keep candidates that fail the filters (reported with passed = false).
  bool keep_failing = false;
  size_t max_results = SIZE_MAX;  // stop once this many distinct results exist
  size_t threads = 1;
};

namespace detail {

inline std::vector<std::vector<size_t>> all_orders(std::vector<size_t> items) {
  std::sort(items.begin(), items.end());
  std::vector<std::vector<size_t>> out;
  do {
    out.push_back(items);
  } while (std::next_permutation(items.begin(), items.end()));
  return out;
}

inline std::vector<size_t> support_of(const PauliOperator &p) {
  std::vector<size_t> s;
  for (size_t q = 0; q < p.num_qubits(); ++q) {
    if (p.letter(q) != 'I') s.push_back(q);
  }
  return s;
}

/// Slot pairs (s1 < s2) with s1, s2 in [lo, hi].
inline std::vector<std::pair<size_t, size_t>> slot_pairs(size_t lo, size_t hi) {
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t a = lo; a <= hi; ++a) {
    for (size_t b = a + 1; b <= hi; ++b) out.emplace_back(a, b);
  }
  return out;
}

inline bool run_filter(const Circuit &c, const StabilizerCode &code, SynthFilter f) {
  switch (f) {
    case SynthFilter::AGP: return verify_agp_distance3({c}, code).pass;
    case SynthFilter::DETECTION: return verify_detection({c}, code).pass;
    case SynthFilter::FLAG_FREE: {
      Protocol p;
      p.name = c.name();
      p.rounds.push_back({c, {}, {}});
      return verify_protocol(p, code).pass;
    }
    case SynthFilter::NONE:
    case SynthFilter::AUTO: return true;
  }
  return true;
}

/// Canonical text: measured operators, then the conditional error sets of
/// both sectors.
inline std::string canonical_form(const Circuit &c, const StabilizerCode &code) {
  std::ostringstream out;
  auto m = measured_operators(c, code);
  for (auto &p : m.measured) out << p.sparse() << ";";
  std::vector<FaultSector> sectors =
      code.is_css() ? std::vector<FaultSector>{FaultSector::X_ONLY, FaultSector::Z_ONLY} : std::vector<FaultSector>{FaultSector::ALL};
  for (auto s : sectors) {
    out << "|";
    for (auto &[flags, set] : conditional_error_sets(c, code, s)) {
      out << flags.str() << ":";
      for (auto &p : set) out << p.sparse() << ",";
      out << ";";
    }
  }
  return out.str();
}

inline std::vector<PauliOperator> correlated_errors(const Circuit &c, const StabilizerCode &code) {
  std::set<PauliOperator> out;
  std::vector<std::pair<FaultSector, Sector>> sectors;
  if (code.is_css()) {
    sectors = {{FaultSector::X_ONLY, Sector::X}, {FaultSector::Z_ONLY, Sector::Z}};
  } else {
    sectors = {{FaultSector::ALL, Sector::FULL}};
  }
  for (auto [fs, s] : sectors) {
    for (const auto &row : single_fault_table(c, code, fs)) {
      if (row.outcome.flags.any()) continue;
      auto r = row.outcome.residual.part(s);
      size_t w = s == Sector::FULL ? reduced_weight(code, r) : code.coset_min_weight(r, s);
      if (w >= 2) out.insert(code.min_weight_representative(r, s));
    }
  }
  return {out.begin(), out.end()};
}

/// Evaluates candidate indices [0, total) with `threads` workers. `make`
/// returns the plan for an index (nullopt to skip). Results are merged by
/// canonical form keeping the lowest index, so output does not depend on
/// the thread count.
inline SynthOutput run_search(size_t total, const std::function<std::optional<ExtractionPlan>(size_t)> &make,
                              const StabilizerCode &code, const SearchOptions &opt, SynthFilter filter,
                              const std::function<bool(const Circuit &)> &extra = {}) {
  struct Found {
    size_t index;
    SynthResult result;
    bool passed;
  };
  std::mutex mu;
  SynthOutput out;
  out.stats.candidates = total;
  std::map<std::string, Found> by_canon;
  size_t distinct_passing = 0;
  bool stop = false;
  auto worker = [&](size_t first, size_t stride) {
    SearchStats local;
    std::map<std::string, Found> mine;
    for (size_t idx = first; idx < total; idx += stride) {
      {
        std::lock_guard<std::mutex> lock(mu);
        if (stop) break;
      }
      auto plan = make(idx);
      if (!plan) continue;
      auto circ = realize(*plan);
      if (!circ) continue;
      if (extra && !extra(*circ)) continue;
      if (opt.layout && !check_locality(*circ, *opt.layout).empty()) continue;
      ++local.realized;
      std::string canon;
      try {
        canon = canonical_form(*circ, code);
      } catch (const CircuitError &) {
        continue;
      }
      ++local.valid;
      bool pass = run_filter(*circ, code, filter) && (!opt.context || opt.context(*circ));
      if (pass) ++local.passed;
      if (!pass && !opt.keep_failing) continue;
      auto it = mine.find(canon);
      if (it != mine.end()) {
        ++it->second.result.equivalent;
        continue;
      }
      SynthResult r{*plan, *circ, correlated_errors(*circ, code), canon, 1};
      mine.emplace(canon, Found{idx, std::move(r), pass});
      if (pass && opt.max_results != SIZE_MAX) {
        std::lock_guard<std::mutex> lock(mu);
        if (!by_canon.count(canon)) {
          by_canon.emplace(canon, mine.at(canon));
          if (++distinct_passing >= opt.max_results) stop = true;
        }
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    out.stats.realized += local.realized;
    out.stats.valid += local.valid;
    out.stats.passed += local.passed;
    for (auto &[canon, f] : mine) {
      auto it = by_canon.find(canon);
      if (it == by_canon.end()) {
        by_canon.emplace(canon, std::move(f));
      } else if (it->second.index != f.index) {
        it->second.result.equivalent += f.result.equivalent;
        if (f.index < it->second.index) {
          size_t eq = it->second.result.equivalent;
          it->second = std::move(f);
          it->second.result.equivalent = eq;
        }
      }
    }
  };
  size_t threads = std::max<size_t>(1, opt.threads);
  if (threads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
    for (auto &th : pool) th.join();
  }
  for (auto &[canon, f] : by_canon) {
    if (!f.passed && !opt.keep_failing) continue;
    out.results.push_back(std::move(f.result));
  }
  if (opt.max_results != SIZE_MAX && out.results.size() > opt.max_results) out.results.resize(opt.max_results);
  return out;
}

inline SynthFilter resolve_filter(SynthFilter f, bool coupled) {
  if (f != SynthFilter::AUTO) return f;
  return coupled ? SynthFilter::AGP : SynthFilter::FLAG_FREE;
}

}  // namespace detail

struct PlaquetteOptions : SearchOptions {
  size_t ancilla_budget = 1;  // 2 adds a dedicated flag
  bool flag_slots_bracket_only = false;
};

/// All qubit orders of one stabilizer's single-ancilla gadget (and, with a
/// budget of two, every placement of a dedicated flag's two gates). Results
/// are deduplicated by canonical form.
inline SynthOutput search_plaquette_orders(const StabilizerCode &code, const PauliOperator &stabilizer,
                                           const PlaquetteOptions &opt = {}) {
  if (opt.ancilla_budget < 1) throw std::invalid_argument("ancilla budget must be at least 1");
  auto support = detail::support_of(stabilizer);
  auto orders = detail::all_orders(support);
  std::vector<std::pair<size_t, size_t>> flags;
  if (opt.ancilla_budget >= 2) {
    flags = opt.flag_slots_bracket_only ? std::vector<std::pair<size_t, size_t>>{{1, support.size() - 1}}
                                        : detail::slot_pairs(0, support.size());
  }
  size_t per = std::max<size_t>(1, flags.size());
  auto make = [&](size_t idx) -> std::optional<ExtractionPlan> {
    ExtractionPlan p;
    p.name = "plaquette";
    p.n_data = code.n();
    p.stabilizers = {stabilizer};
    p.orders = {orders[idx / per]};
    if (!flags.empty()) {
      auto [a, b] = flags[idx % per];
      p.flags.push_back({0, a, b});
    }
    return p;
  };
  auto filter = detail::resolve_filter(opt.filter, opt.ancilla_budget >= 2);
  auto out = detail::run_search(orders.size() * per, make, code, opt, filter);
  out.stats.bound = std::to_string(orders.size()) + " orders x " + std::to_string(per) + " flag placements";
  return out;
}

struct FlagFreeSchedule {
  bool found = false;
  std::vector<std::vector<size_t>> orders;  // per generator
  Protocol protocol;                        // X-type round, then Z-type round
  SearchStats stats;
};

/// One unflagged ancilla per generator of a CSS code. Only the first pair,
/// the middle qubits and the last pair of an order matter for hook errors,
/// so orders are enumerated up to swaps inside the two end pairs. Orders are
/// chosen by backtracking so that every hook residual (suffixes of length 2
/// to w-2) has a sector syndrome distinct from the weight <= 1 errors and
/// from inequivalent hooks. The resulting two-round protocol is then checked
/// with verify_protocol.
inline FlagFreeSchedule search_flag_free_schedule(const StabilizerCode &code, const std::string &name = "flag_free") {
  if (!code.is_css()) throw std::invalid_argument("flag-free schedules need a CSS code");
  size_t n = code.n(), m = code.num_generators();
  std::vector<std::vector<std::vector<size_t>>> classes(m);
  size_t total = 1;
  for (size_t g = 0; g < m; ++g) {
    auto s = detail::support_of(code.generators()[g]);
    for (auto &o : detail::all_orders(s)) {
      bool head = o.size() < 2 || o[0] < o[1];
      bool tail = o.size() < 4 || o[o.size() - 2] < o[o.size() - 1];
      if (head && tail) classes[g].push_back(o);
    }
    total *= classes[g].size();
  }
  FlagFreeSchedule out;
  out.stats.candidates = total;
  out.stats.bound = "backtracking over order classes (up to end-pair swaps) of " + std::to_string(m) + " generators";
  using Seen = std::map<std::pair<int, BitVec>, PauliOperator>;
  Seen base;
  for (Sector s : {Sector::X, Sector::Z}) {
    char l = s == Sector::X ? 'X' : 'Z';
    base[{int(s), code.syndrome_of(PauliOperator(n))}] = PauliOperator(n);
    for (size_t q = 0; q < n; ++q) {
      auto p = PauliOperator::on(n, l, {q});
      base[{int(s), code.syndrome_of(p)}] = p;
    }
  }
  std::vector<size_t> pick(m);
  std::function<bool(size_t, const Seen &)> go = [&](size_t g, const Seen &seen) {
    if (g == m) return true;
    Sector sec = code.generator_type(g);
    char l = sec == Sector::X ? 'X' : 'Z';
    for (size_t i = 0; i < classes[g].size(); ++i) {
      ++out.stats.realized;
      const auto &o = classes[g][i];
      Seen next = seen;
      bool ok = true;
      for (size_t k = 2; k + 2 <= o.size() && ok; ++k) {
        auto h = PauliOperator::on(n, l, std::vector<size_t>(o.end() - k, o.end()));
        auto [it, fresh] = next.emplace(std::make_pair(int(sec), code.syndrome_of(h)), h);
        ok = fresh || code.stabilizer_equivalent(it->second, h);
      }
      if (!ok) continue;
      pick[g] = i;
      if (go(g + 1, next)) return true;
    }
    return false;
  };
  if (!go(0, base)) return out;
  out.orders.resize(m);
  for (size_t g = 0; g < m; ++g) out.orders[g] = classes[g][pick[g]];
  out.protocol.name = name;
  for (Sector s : {Sector::X, Sector::Z}) {
    ExtractionPlan p;
    p.name = name + (s == Sector::X ? "_x_round" : "_z_round");
    p.n_data = n;
    for (size_t g = 0; g < m; ++g) {
      if (code.generator_type(g) != s) continue;
      p.stabilizers.push_back(code.generators()[g]);
      p.orders.push_back(out.orders[g]);
    }
    auto c = realize(p);
    if (!c) return out;
    c->set_name(p.name);
    out.protocol.rounds.push_back({*c, {}, {}});
  }
  ++out.stats.valid;
  out.found = verify_protocol(out.protocol, code).pass;
  out.stats.passed = out.found;
  return out;
}

struct PairOptions : SearchOptions {
  bool catch_bracket_only = false;  // catches only after the first and before the last data gate
};

/// Two syndrome ancillas extracting `a` and `b` together with two catch
/// gates between them: every order of each support, every placement of the
/// catches in each chain and every relative order on shared data qubits.
inline SynthOutput search_mutual_flag_pair(const StabilizerCode &code, const PauliOperator &a, const PauliOperator &b,
                                           const PairOptions &opt = {}) {
  if (a == b) throw std::invalid_argument("the two stabilizers must differ");
  auto sa = detail::support_of(a), sb = detail::support_of(b);
  auto oa = detail::all_orders(sa), ob = detail::all_orders(sb);
  auto slots = [&](size_t w) {
    return opt.catch_bracket_only ? std::vector<std::pair<size_t, size_t>>{{1, w - 1}} : detail::slot_pairs(0, w);
  };
  auto ca = slots(sa.size()), cb = slots(sb.size());
  std::vector<size_t> shared;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(shared));
  bool no_catch = ancilla_basis(a) == AncillaBasis::Z && ancilla_basis(b) == AncillaBasis::Z;
  size_t n_shared = size_t{1} << shared.size();
  size_t total = no_catch ? 0 : oa.size() * ob.size() * ca.size() * cb.size() * n_shared;
  auto make = [&](size_t idx) -> std::optional<ExtractionPlan> {
    size_t bits = idx % n_shared;
    idx /= n_shared;
    auto [b1, b2] = cb[idx % cb.size()];
    idx /= cb.size();
    auto [a1, a2] = ca[idx % ca.size()];
    idx /= ca.size();
    const auto &order_b = ob[idx % ob.size()];
    const auto &order_a = oa[idx / ob.size()];
    ExtractionPlan p;
    p.name = "pair";
    p.n_data = code.n();
    p.stabilizers = {a, b};
    p.orders = {order_a, order_b};
    p.catches = {{0, 1, a1, b1}, {0, 1, a2, b2}};
    for (size_t i = 0; i < shared.size(); ++i) {
      p.data_order[shared[i]] = (bits >> i) & 1 ? std::vector<size_t>{1, 0} : std::vector<size_t>{0, 1};
    }
    return p;
  };
  auto out = detail::run_search(total, make, code, opt, detail::resolve_filter(opt.filter, true));
  out.stats.bound = std::to_string(oa.size()) + "x" + std::to_string(ob.size()) + " orders x " +
                    std::to_string(ca.size() * cb.size()) + " catch placements x " + std::to_string(n_shared) +
                    " shared-qubit orders";
  if (no_catch) out.stats.bound = "empty: no catch gate couples two Z-basis ancillas";
  return out;
}

struct ParallelOptions : SearchOptions {
  size_t max_depth = SIZE_MAX;  // two-qubit-gate ticks
  // One entry per catch gate, naming two ancillas by stabilizer index. List
  // a pair twice for two gates. Catches need a finite max_depth.
  std::vector<std::pair<size_t, size_t>> catches;
};

namespace detail {

/// Every distinct plan obtained by giving each gate a tick in [1, depth]
/// with no qubit used twice in a tick.
inline std::vector<ExtractionPlan> tick_plans(const StabilizerCode &code, const std::vector<PauliOperator> &stabilizers,
                                              const std::vector<std::pair<size_t, size_t>> &catches, size_t depth) {
  struct Gate {
    std::vector<size_t> qubits;  // data qubits as q, ancilla i as n + i
    size_t ancilla;              // owning ancilla for data gates, SIZE_MAX for catches
    size_t data;
  };
  size_t n = code.n();
  std::vector<Gate> gates;
  for (size_t k = 0; k < catches.size(); ++k) gates.push_back({{n + catches[k].first, n + catches[k].second}, SIZE_MAX, k});
  for (size_t i = 0; i < stabilizers.size(); ++i) {
    for (size_t q : support_of(stabilizers[i])) gates.push_back({{n + i, q}, i, q});
  }
  std::vector<uint64_t> busy(n + stabilizers.size(), 0);
  std::vector<size_t> tick(gates.size());
  std::set<std::string> seen;
  std::vector<ExtractionPlan> out;
  auto emit = [&] {
    ExtractionPlan p;
    p.name = "parallel";
    p.n_data = n;
    p.stabilizers = stabilizers;
    p.orders.resize(stabilizers.size());
    std::vector<std::pair<size_t, size_t>> by_tick;  // (tick, gate)
    for (size_t g = 0; g < gates.size(); ++g) by_tick.emplace_back(tick[g], g);
    std::sort(by_tick.begin(), by_tick.end());
    std::map<size_t, std::vector<size_t>> touching;
    for (auto [t, g] : by_tick) {
      const auto &gate = gates[g];
      if (gate.ancilla == SIZE_MAX) {
        auto [a, b] = catches[gate.data];
        p.catches.push_back({a, b, p.orders[a].size(), p.orders[b].size()});
      } else {
        p.orders[gate.ancilla].push_back(gate.data);
        touching[gate.data].push_back(gate.ancilla);
      }
    }
    for (auto &[q, list] : touching) {
      if (list.size() > 1) p.data_order[q] = list;
    }
    std::ostringstream key;
    for (auto &o : p.orders) {
      for (size_t q : o) key << q << ",";
      key << ";";
    }
    for (auto &c : p.catches) key << c.a << c.b << ":" << c.slot_a << "," << c.slot_b << ";";
    for (auto &[q, list] : p.data_order) {
      key << q << ":";
      for (size_t a : list) key << a << ",";
    }
    if (seen.insert(key.str()).second) out.push_back(std::move(p));
  };
  std::function<void(size_t)> place = [&](size_t g) {
    if (g == gates.size()) {
      emit();
      return;
    }
    for (size_t t = 1; t <= depth; ++t) {
      uint64_t bit = uint64_t{1} << t;
      bool free = true;
      for (size_t q : gates[g].qubits) free &= !(busy[q] & bit);
      if (!free) continue;
      for (size_t q : gates[g].qubits) busy[q] |= bit;
      tick[g] = t;
      place(g + 1);
      for (size_t q : gates[g].qubits) busy[q] &= ~bit;
    }
  };
  place(0);
  return out;
}

}  // namespace detail

/// Several syndrome ancillas acting in parallel, optionally joined by catch
/// gates. With a finite max_depth every assignment of gates to ticks is
/// tried; otherwise every order of each support and every relative order
/// of the ancillas on each shared data qubit.
inline SynthOutput search_parallel_schedule(const StabilizerCode &code, const std::vector<PauliOperator> &stabilizers,
                                            const ParallelOptions &opt = {}) {
  for (auto [a, b] : opt.catches) {
    if (a >= stabilizers.size() || b >= stabilizers.size() || a == b) throw std::invalid_argument("bad catch pair");
    if (ancilla_basis(stabilizers[a]) == AncillaBasis::Z && ancilla_basis(stabilizers[b]) == AncillaBasis::Z) {
      throw std::invalid_argument("no catch gate couples two Z-basis ancillas");
    }
  }
  auto depth_ok = [&](const Circuit &c) { return round_profile(c).cnot_depth <= opt.max_depth; };
  auto filter = detail::resolve_filter(opt.filter, true);
  if (opt.max_depth != SIZE_MAX) {
    if (opt.max_depth > 62) throw std::invalid_argument("max_depth above 62 is not supported");
    auto plans = detail::tick_plans(code, stabilizers, opt.catches, opt.max_depth);
    auto out = detail::run_search(
        plans.size(), [&](size_t idx) { return std::optional<ExtractionPlan>(plans[idx]); }, code, opt, filter, depth_ok);
    out.stats.bound = std::to_string(plans.size()) + " distinct plans within depth " + std::to_string(opt.max_depth);
    return out;
  }
  if (!opt.catches.empty()) throw std::invalid_argument("catch gates need a finite max_depth");
  std::vector<std::vector<std::vector<size_t>>> orders;
  std::map<size_t, std::vector<size_t>> touching;
  for (size_t i = 0; i < stabilizers.size(); ++i) {
    auto s = detail::support_of(stabilizers[i]);
    orders.push_back(detail::all_orders(s));
    for (size_t q : s) touching[q].push_back(i);
  }
  std::vector<std::pair<size_t, std::vector<std::vector<size_t>>>> shared;
  for (auto &[q, list] : touching) {
    if (list.size() > 1) shared.emplace_back(q, detail::all_orders(list));
  }
  size_t total = 1;
  for (auto &o : orders) total *= o.size();
  for (auto &s : shared) total *= s.second.size();
  auto make = [&](size_t idx) -> std::optional<ExtractionPlan> {
    ExtractionPlan p;
    p.name = "parallel";
    p.n_data = code.n();
    p.stabilizers = stabilizers;
    for (auto it = shared.rbegin(); it != shared.rend(); ++it) {
      p.data_order[it->first] = it->second[idx % it->second.size()];
      idx /= it->second.size();
    }
    p.orders.resize(orders.size());
    for (size_t i = orders.size(); i-- > 0;) {
      p.orders[i] = orders[i][idx % orders[i].size()];
      idx /= orders[i].size();
    }
    return p;
  };
  auto out = detail::run_search(total, make, code, opt, filter);
  std::ostringstream bound;
  bound << total << " candidates (orders";
  for (auto &o : orders) bound << " " << o.size();
  bound << "; shared-qubit orders";
  for (auto &s : shared) bound << " " << s.second.size();
  bound << ")";
  out.stats.bound = bound.str();
  return out;
}

}  // namespace ftqec

#endif  // FTQEC_SYNTH_HPP
