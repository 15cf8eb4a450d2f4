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

#ifndef FTQEC_VERIFY_HPP
#define FTQEC_VERIFY_HPP

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ftqec/circuit.hpp"
#include "ftqec/code.hpp"
#include "ftqec/fault.hpp"

namespace ftqec {

/// One way of reaching an outcome: an input data error, a single fault in
/// one circuit of a family or protocol, or both absent.
struct FaultCase {
  std::optional<size_t> circuit;  // index into the family / schedule
  std::optional<FaultEvent> event;
  std::optional<PauliOperator> input;

  std::string str(const std::vector<const Circuit *> &circuits) const {
    std::string s;
    if (input) s += "input " + input->sparse();
    if (event) {
      if (!s.empty()) s += ", ";
      s += "fault " + event->str(*circuits[*circuit]);
      if (circuits.size() > 1) s += " in circuit " + std::to_string(*circuit + 1);
    }
    return s.empty() ? "no fault" : s;
  }
};

struct Counterexample {
  FaultCase cause;
  FaultOutcome outcome;  // flags concatenated over the family / schedule
  std::string reason;
  std::optional<FaultCase> other_cause = std::nullopt;  // second witness for indistinguishability
  std::optional<FaultOutcome> other_outcome = std::nullopt;
};

/// Flag-conditioned correction entries. Part X holds X corrections keyed on
/// Z-basis flags and Z-type syndrome bits; part Z is dual; a FULL part is
/// used for non-CSS codes.
struct ConditionalEntry {
  Sector part = Sector::FULL;
  BitVec flags;
  BitVec syndrome;
  PauliOperator correction;
};

struct VerdictReport {
  bool pass = true;
  std::string condition;
  std::vector<Counterexample> counterexamples;
  size_t events = 0;
  size_t classes = 0;
  std::vector<std::string> notes;
  std::vector<ConditionalEntry> table;
  std::vector<const Circuit *> circuits;  // for rendering events
  std::vector<BitVec> flag_masks;         // per part, over concatenated flags

  void fail(Counterexample c) {
    pass = false;
    counterexamples.push_back(std::move(c));
  }

  /// Line-oriented report: VERDICT, STAT, NOTE and COUNTEREXAMPLE lines.
  std::string render(size_t block_size = 0) const {
    auto show = [&](const PauliOperator &p) { return block_size ? p.sparse_blocks(block_size) : p.sparse(); };
    std::ostringstream out;
    out << "VERDICT " << (pass ? "PASS" : "FAIL") << " " << condition << "\n";
    out << "STAT events=" << events << " classes=" << classes << "\n";
    for (const auto &n : notes) out << "NOTE " << n << "\n";
    for (const auto &c : counterexamples) {
      out << "COUNTEREXAMPLE " << c.cause.str(circuits) << " -> residual " << show(c.outcome.residual) << " flags "
          << c.outcome.flags.str();
      if (c.other_cause) {
        out << " vs " << c.other_cause->str(circuits) << " -> residual " << show(c.other_outcome->residual)
            << " flags " << c.other_outcome->flags.str();
      }
      out << " : " << c.reason << "\n";
    }
    return out.str();
  }
};

namespace detail {

/// Bits of the concatenated flag vector that X (resp. Z) errors can flip:
/// outcomes of Z-basis (resp. X-basis) measurements.
inline BitVec measurement_basis_mask(const std::vector<const Circuit *> &cs, OpKind kind) {
  size_t total = 0;
  for (auto *c : cs) total += c->num_measurements();
  BitVec m(total);
  size_t off = 0;
  for (auto *c : cs) {
    for (size_t i = 0; i < c->num_measurements(); ++i) {
      if (c->locations()[c->measurements()[i]].kind == kind) m.set(off + i);
    }
    off += c->num_measurements();
  }
  return m;
}

inline BitVec generator_mask(const StabilizerCode &code, Sector type) {
  BitVec m(code.num_generators());
  for (size_t i = 0; i < code.num_generators(); ++i) {
    if (type == Sector::FULL || code.generator_type(i) == type) m.set(i);
  }
  return m;
}

struct Part {
  Sector sector;         // X, Z or FULL (the error component handled)
  FaultSector faults;    // fault sector enumerated
  BitVec flag_mask;      // flags visible to this part
  BitVec syndrome_mask;  // syndrome bits visible to this part
};

/// X errors are seen by Z-type generators and Z-basis measurements.
inline std::vector<Part> parts_for(const StabilizerCode &code, const std::vector<const Circuit *> &cs,
                                   bool all_sectors) {
  if (code.is_css() && !all_sectors) {
    return {{Sector::X, FaultSector::X_ONLY, measurement_basis_mask(cs, OpKind::MEAS_Z), generator_mask(code, Sector::Z)},
            {Sector::Z, FaultSector::Z_ONLY, measurement_basis_mask(cs, OpKind::MEAS_X), generator_mask(code, Sector::X)}};
  }
  size_t total = 0;
  for (auto *c : cs) total += c->num_measurements();
  BitVec all(total);
  for (size_t i = 0; i < total; ++i) all.set(i);
  return {{Sector::FULL, FaultSector::ALL, all, generator_mask(code, Sector::FULL)}};
}

/// Places one circuit's flags at its offset in the concatenated vector.
inline BitVec embed_flags(const std::vector<const Circuit *> &cs, size_t which, const BitVec &flags) {
  size_t total = 0, off = 0;
  for (size_t i = 0; i < cs.size(); ++i) {
    if (i == which) off = total;
    total += cs[i]->num_measurements();
  }
  BitVec out(total);
  for (size_t b : flags.ones()) out.set(off + b);
  return out;
}

/// Sector weight of a residual up to stabilizers: the larger of the X and Z
/// coset minima for CSS codes, the full-weight minimum otherwise.
inline size_t reduced_weight(const StabilizerCode &code, const PauliOperator &p) {
  if (code.is_css()) return std::max(code.coset_min_weight(p, Sector::X), code.coset_min_weight(p, Sector::Z));
  return code.coset_min_weight(p, Sector::FULL);
}

/// Builds key -> coset maps and reports collisions between inequivalent
/// residuals. Keys are (flags & mask, syndrome & mask).
class DistinguishabilityCheck {
 public:
  DistinguishabilityCheck(const StabilizerCode &code, VerdictReport &report, std::string what)
      : code_(code), report_(report), what_(std::move(what)) {}

  void add(const Part &part, const FaultCase &cause, const FaultOutcome &outcome) {
    BitVec f = outcome.flags & part.flag_mask;
    PauliOperator res = outcome.residual.part(part.sector);
    BitVec s = code_.syndrome_of(res) & part.syndrome_mask;
    auto key = std::make_tuple(static_cast<int>(part.sector), f, s);
    auto it = seen_.find(key);
    if (it == seen_.end()) {
      seen_.emplace(key, Entry{cause, outcome, res});
      return;
    }
    if (code_.stabilizer_equivalent(it->second.residual, res)) return;
    if (reported_.insert(key).second) {
      report_.fail({it->second.cause, it->second.outcome,
                    what_ + ": inequivalent residuals share flags and syndrome", cause, outcome});
    }
  }

  /// One entry per key, correction = lowest-weight representative.
  void emit_table(const std::vector<Part> &parts) {
    for (auto &[key, e] : seen_) {
      Sector sec = static_cast<Sector>(std::get<0>(key));
      Sector w = sec == Sector::FULL ? Sector::FULL : sec;
      report_.table.push_back({sec, std::get<1>(key), std::get<2>(key), code_.min_weight_representative(e.residual, w)});
    }
    report_.classes = seen_.size();
    for (const auto &p : parts) report_.flag_masks.push_back(p.flag_mask);
  }

 private:
  struct Entry {
    FaultCase cause;
    FaultOutcome outcome;
    PauliOperator residual;
  };
  const StabilizerCode &code_;
  VerdictReport &report_;
  std::string what_;
  std::map<std::tuple<int, BitVec, BitVec>, Entry> seen_;
  std::set<std::tuple<int, BitVec, BitVec>> reported_;
};

}  // namespace detail

struct AgpOptions {
  bool all_sectors = false;  // enumerate every payload instead of X and Z separately
};

/// Distance-3 fault-tolerance conditions for a family of extraction
/// circuits run in sequence, one fault in total, clean input:
///  A. a fault that leaves every measurement trivial leaves a residual of
///     sector weight <= 1 up to stabilizers;
///  B. among faults that flip some measurement of a circuit, the map
///     (flags, code syndrome) -> stabilizer coset is injective.
/// Each circuit is analysed on its own; a fault that flips nothing passes
/// its residual to the next circuit as an ordinary weight-one input.
inline VerdictReport verify_agp_distance3(const std::vector<Circuit> &family, const StabilizerCode &code,
                                          AgpOptions opt = {}) {
  VerdictReport report;
  report.condition = "agp-distance3";
  for (const auto &c : family) {
    report.circuits.push_back(&c);
    measured_operators(c, code);
  }
  auto parts = detail::parts_for(code, report.circuits, opt.all_sectors);
  detail::DistinguishabilityCheck check(code, report, "condition B");
  for (const auto &part : parts) {
    for (size_t ci = 0; ci < family.size(); ++ci) {
      for (const auto &row : full_fault_table(family[ci], part.faults)) {
        ++report.events;
        FaultCase cause{ci, row.event, std::nullopt};
        FaultOutcome outcome{row.outcome.residual, detail::embed_flags(report.circuits, ci, row.outcome.flags)};
        if ((outcome.flags & part.flag_mask).none()) {
          PauliOperator r = outcome.residual.part(part.sector);
          size_t w = part.sector == Sector::FULL ? detail::reduced_weight(code, r) : code.coset_min_weight(r, part.sector);
          if (w > 1) {
            report.fail({cause, outcome,
                         "condition A: no flag raised but residual has weight " + std::to_string(w) +
                             " up to stabilizers (equivalent to " +
                             code.min_weight_representative(r, part.sector).sparse() + ")"});
          }
        }
        check.add(part, cause, outcome);
      }
    }
  }
  check.emit_table(parts);
  return report;
}

/// Flag pattern -> set of residual classes (canonical minimum-weight
/// representatives) over single faults of one sector.
inline std::map<BitVec, std::set<PauliOperator>> conditional_error_sets(const Circuit &c, const StabilizerCode &code,
                                                                         FaultSector sector) {
  std::map<BitVec, std::set<PauliOperator>> out;
  Sector ws = code.is_css() ? weight_sector(sector) : Sector::FULL;
  for (const auto &row : single_fault_table(c, code, sector)) {
    out[row.outcome.flags].insert(code.min_weight_representative(row.outcome.residual, ws));
  }
  return out;
}

/// Union of the classes over all flag patterns selected by `mask` being hit.
inline std::set<PauliOperator> triggered_error_set(const Circuit &c, const StabilizerCode &code, FaultSector sector,
                                                   const BitVec &mask) {
  std::set<PauliOperator> out;
  for (auto &[flags, set] : conditional_error_sets(c, code, sector)) {
    if ((flags & mask).any()) out.insert(set.begin(), set.end());
  }
  return out;
}

/// Every pair of fault events (all payloads) either flips a measurement or
/// leaves a residual of weight <= 2 in each sector up to stabilizers.
inline VerdictReport verify_order2_detection(const Circuit &c, const StabilizerCode &code) {
  VerdictReport report;
  report.condition = "order2-detection";
  report.circuits.push_back(&c);
  measured_operators(c, code);
  auto rows = full_fault_table(c, FaultSector::ALL);
  for_each_fault_pair(rows, [&](const FaultTableRow &a, const FaultTableRow &b, const FaultOutcome &o) {
    ++report.events;
    if (o.flags.any()) return;
    size_t wx = code.coset_min_weight(o.residual.x_part(), Sector::X);
    size_t wz = code.coset_min_weight(o.residual.z_part(), Sector::Z);
    if (wx > 2 || wz > 2) {
      report.fail({{0, a.event, std::nullopt}, o,
                   "undetected pair with " + b.event.str(c) + " leaves sector weight " + std::to_string(std::max(wx, wz))});
    }
  });
  return report;
}

/// Error-detection criterion for distance-2 codes: no single fault yields a
/// nontrivial logical action while leaving every measurement and the final
/// syndrome trivial.
inline VerdictReport verify_detection(const std::vector<Circuit> &family, const StabilizerCode &code) {
  VerdictReport report;
  report.condition = "detection";
  for (const auto &c : family) {
    report.circuits.push_back(&c);
    measured_operators(c, code);
  }
  for (size_t ci = 0; ci < family.size(); ++ci) {
    for (const auto &row : full_fault_table(family[ci], FaultSector::ALL)) {
      ++report.events;
      if (row.outcome.flags.any()) continue;
      auto action = code.logical_action(row.outcome.residual);
      if (action && !action->trivial()) {
        report.fail({{ci, row.event, std::nullopt},
                     {row.outcome.residual, detail::embed_flags(report.circuits, ci, row.outcome.flags)},
                     "undetected logical error"});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Multi-round schedules.

/// Schedule flattened over repeats: one circuit per step plus the
/// permutation applied after it.
inline std::vector<std::pair<const Circuit *, const std::vector<size_t> *>> flatten(const Protocol &p) {
  std::vector<std::pair<const Circuit *, const std::vector<size_t> *>> out;
  for (size_t r = 0; r < p.repeat; ++r) {
    for (const auto &round : p.rounds) out.emplace_back(&round.circuit, &round.permutation);
  }
  return out;
}

/// Runs the schedule from `input` with at most one fault and stops after
/// the first round that flips a measurement, as the decode policy does.
/// The returned flags cover every round (zero after the stop).
inline FaultOutcome run_schedule(const Protocol &p, const PauliOperator &input, std::optional<size_t> fault_round,
                                 std::optional<FaultEvent> fault, size_t *stopped_at = nullptr) {
  auto steps = flatten(p);
  std::vector<const Circuit *> cs;
  for (auto &s : steps) cs.push_back(s.first);
  BitVec flags = detail::embed_flags(cs, 0, BitVec(0));
  PauliOperator residual = input;
  size_t off = 0;
  for (size_t r = 0; r < steps.size(); ++r) {
    std::vector<FaultEvent> faults;
    if (fault_round && *fault_round == r) faults.push_back(*fault);
    auto o = propagate(*steps[r].first, faults, &residual);
    residual = o.residual;
    if (!steps[r].second->empty()) apply_permutation(residual, *steps[r].second);
    for (size_t b : o.flags.ones()) flags.set(off + b);
    off += steps[r].first->num_measurements();
    if (o.flags.any()) {
      if (stopped_at) *stopped_at = r;
      return {residual, flags};
    }
  }
  if (stopped_at) *stopped_at = steps.size();
  return {residual, flags};
}

/// End-to-end check of a protocol under one fault anywhere (or one
/// weight-one input error, or none). The decode policy stops at the first
/// round with a nontrivial outcome, measures the full syndrome ideally and
/// corrects from a table keyed on (flags so far, syndrome). PASS iff that
/// key determines the residual up to stabilizers.
inline VerdictReport verify_protocol(const Protocol &p, const StabilizerCode &code, AgpOptions opt = {}) {
  VerdictReport report;
  report.condition = "protocol " + p.name;
  auto steps = flatten(p);
  for (auto &s : steps) {
    report.circuits.push_back(s.first);
  }
  for (const auto &round : p.rounds) measured_operators(round.circuit, code);
  auto parts = detail::parts_for(code, report.circuits, opt.all_sectors);
  detail::DistinguishabilityCheck check(code, report, "schedule");
  PauliOperator clean(code.n());
  for (const auto &part : parts) {
    std::vector<char> letters;
    if (part.sector == Sector::X) letters = {'X'};
    else if (part.sector == Sector::Z) letters = {'Z'};
    else letters = {'X', 'Y', 'Z'};
    std::vector<PauliOperator> inputs{clean};
    for (size_t q = 0; q < code.n(); ++q) {
      for (char l : letters) inputs.push_back(PauliOperator::on(code.n(), l, {q}));
    }
    for (const auto &in : inputs) {
      ++report.events;
      FaultCase cause{std::nullopt, std::nullopt, in};
      check.add(part, cause, run_schedule(p, in, std::nullopt, std::nullopt));
    }
    for (size_t r = 0; r < steps.size(); ++r) {
      for (const auto &e : enumerate_locations(*steps[r].first, part.faults)) {
        ++report.events;
        check.add(part, {r, e, std::nullopt}, run_schedule(p, clean, r, e));
      }
    }
  }
  check.emit_table(parts);
  return report;
}

// ---------------------------------------------------------------------------
// Two-block induction invariants.

/// Finite error set on a two-block code, each member labelled.
struct InvariantSet {
  std::string name;
  size_t block = 0;  // qubits per block
  std::vector<std::pair<std::string, PauliOperator>> errors;

  bool contains_label(const std::string &l) const {
    for (auto &e : errors) {
      if (e.first == l) return true;
    }
    return false;
  }
  InvariantSet without(const std::string &label) const {
    InvariantSet s = *this;
    std::erase_if(s.errors, [&](auto &e) { return e.first == label; });
    return s;
  }
};

namespace detail {

/// Blocked Pauli text "X6 | X2 X6"; the tokens Xbar and Zbar stand for the
/// transversal operator on that block.
inline PauliOperator parse_block_pauli(const std::string &text, size_t block, size_t blocks) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '|')) parts.push_back(part);
  if (parts.size() != blocks) throw std::invalid_argument("expected " + std::to_string(blocks) + " blocks in '" + text + "'");
  PauliOperator out(0);
  for (auto &pt : parts) {
    PauliOperator b(block);
    std::string rest;
    for (auto &tok : split_ws(pt)) {
      if (tok == "Xbar" || tok == "Zbar") {
        for (size_t q = 0; q < block; ++q) {
          if (tok[0] == 'X') b.x().flip(q);
          else b.z().flip(q);
        }
      } else {
        rest += tok + " ";
      }
    }
    if (!rest.empty()) b *= PauliOperator::parse(rest, block);
    out = out.tensor(b);
  }
  return out;
}

}  // namespace detail

/// Invariant set file:
///   invariant <name>
///   block <qubits per block>
///   identity                       the trivial error
///   singles X|Z                    P_j (x) I and I (x) P_j, labelled Aj, Bj
///   diagonal X|Z                   P_j (x) P_j, labelled E<j>
///   element <label> <A part> | <B part>
///   image <cycles> [swap-blocks]   replace every member by its image
/// Directives apply in file order; `image` acts on members listed so far.
inline InvariantSet load_invariant_set(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open invariant set " + path);
  InvariantSet s;
  std::string line;
  size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto t = detail::split_ws(line);
    if (t.empty()) continue;
    auto fail = [&](const std::string &m) { throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + m); };
    if (t[0] == "invariant" && t.size() == 2) {
      s.name = t[1];
      continue;
    }
    if (t[0] == "block" && t.size() == 2) {
      s.block = std::stoul(t[1]);
      continue;
    }
    if (s.block == 0) fail("'block' must come before members");
    size_t n = 2 * s.block;
    if (t[0] == "identity") {
      s.errors.emplace_back("I", PauliOperator(n));
    } else if ((t[0] == "singles" || t[0] == "diagonal") && t.size() == 2) {
      char l = t[1][0];
      for (size_t j = 0; j < s.block; ++j) {
        if (t[0] == "singles") {
          s.errors.emplace_back("A" + std::to_string(j + 1), PauliOperator::on(n, l, {j}));
          s.errors.emplace_back("B" + std::to_string(j + 1), PauliOperator::on(n, l, {s.block + j}));
        } else {
          s.errors.emplace_back("E" + std::to_string(j + 1), PauliOperator::on(n, l, {j, s.block + j}));
        }
      }
    } else if (t[0] == "element" && t.size() >= 3) {
      auto rest = line.substr(line.find(t[1], line.find("element") + 7) + t[1].size());
      try {
        s.errors.emplace_back(t[1], detail::parse_block_pauli(rest, s.block, 2));
      } catch (const std::exception &e) {
        fail(e.what());
      }
    } else if (t[0] == "image") {
      auto perm = parse_permutation(line.substr(line.find("image") + 5), n);
      for (auto &e : s.errors) apply_permutation(e.second, perm);
    } else {
      fail("bad invariant line");
    }
  }
  if (s.name.empty()) s.name = std::filesystem::path(path).stem().string();
  return s;
}

/// Lines "<label> <blocked Pauli>" (for example "a Z7 | Z4"); '#' starts a
/// comment.
inline std::vector<std::pair<std::string, PauliOperator>> load_labeled_table(const std::string &path, size_t block,
                                                                             size_t blocks = 2) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open table " + path);
  std::vector<std::pair<std::string, PauliOperator>> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto t = detail::split_ws(line);
    if (t.empty()) continue;
    auto rest = line.substr(line.find(t[0]) + t[0].size());
    try {
      out.emplace_back(t[0], detail::parse_block_pauli(rest, block, blocks));
    } catch (const std::exception &e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

/// Same set with the blocks exchanged and X replaced by Z.
inline InvariantSet dual_invariant_set(const InvariantSet &s) {
  InvariantSet d;
  d.name = s.name + "_dual";
  d.block = s.block;
  for (auto &[label, p] : s.errors) {
    PauliOperator q(2 * s.block);
    for (size_t i = 0; i < 2 * s.block; ++i) {
      size_t j = i < s.block ? i + s.block : i - s.block;
      char l = p.letter(i);
      q.set(j, l == 'X' ? 'Z' : l == 'Z' ? 'X' : l);
    }
    d.errors.emplace_back(label, q);
  }
  return d;
}

/// Label of the member equivalent to p, if any.
inline std::optional<std::string> invariant_member(const InvariantSet &s, const StabilizerCode &code2,
                                                   const PauliOperator &p) {
  for (auto &[label, e] : s.errors) {
    if (code2.stabilizer_equivalent(e, p)) return label;
  }
  return std::nullopt;
}

/// Checks the induction invariant of a two-block round in one sector:
///  (i) every single fault, followed by the permutation, lands in the set;
///  (ii) members have pairwise distinct syndromes;
///  (iii) every member that passes the round undetected lands in the set
///      after the permutation.
inline VerdictReport verify_invariant_closure(const Circuit &c, const std::vector<size_t> &permutation,
                                              const InvariantSet &set, const StabilizerCode &code2,
                                              FaultSector sector = FaultSector::X_ONLY) {
  VerdictReport report;
  report.condition = "invariant " + set.name;
  report.circuits.push_back(&c);
  measured_operators(c, code2);
  auto permuted = [&](PauliOperator p) {
    if (!permutation.empty()) apply_permutation(p, permutation);
    return p;
  };
  // (i)
  for (const auto &row : full_fault_table(c, sector)) {
    ++report.events;
    PauliOperator r = permuted(row.outcome.residual);
    if (!invariant_member(set, code2, r)) {
      report.fail({{0, row.event, std::nullopt}, {r, row.outcome.flags}, "bullet (i): fault output not in the set"});
    }
  }
  // (ii)
  std::map<BitVec, std::string> by_syndrome;
  for (auto &[label, e] : set.errors) {
    auto [it, fresh] = by_syndrome.emplace(code2.syndrome_of(e), label);
    if (!fresh) {
      report.fail({{std::nullopt, std::nullopt, e}, {e, BitVec(c.num_measurements())},
                   "bullet (ii): members " + it->second + " and " + label + " share a syndrome"});
    }
  }
  report.classes = by_syndrome.size();
  // (iii)
  size_t undetected = 0;
  for (auto &[label, e] : set.errors) {
    auto o = propagate(c, {}, &e);
    if (o.flags.any()) continue;
    ++undetected;
    PauliOperator r = permuted(o.residual);
    auto m = invariant_member(set, code2, r);
    if (!m) {
      report.fail({{std::nullopt, std::nullopt, e}, {r, o.flags},
                   "bullet (iii): undetected member " + label + " leaves the set"});
    } else if (label != "I" && *m != label) {
      report.notes.push_back("closure " + label + " -> " + *m);
    }
  }
  report.notes.push_back("undetected members " + std::to_string(undetected) + " of " + std::to_string(set.errors.size()));
  return report;
}

// ---------------------------------------------------------------------------
// Syndrome-parity gadget on two blocks.

/// Checks a circuit that measures the parity of one syndrome across two
/// copies of a code. The single-fault residuals of `sector` must lie in
/// `expected` (up to stabilizers) and include every labelled entry; every
/// nontrivial residual must have P_S P_T outside the single-block normalizer
/// with trivial syndrome, i.e. a nontrivial single-block syndrome; and
/// residuals must be distinguishable by the two blocks' separate syndromes.
inline VerdictReport verify_parity_gadget(const Circuit &c, const StabilizerCode &block_code,
                                          const std::vector<std::pair<std::string, PauliOperator>> &expected,
                                          FaultSector sector = FaultSector::Z_ONLY) {
  VerdictReport report;
  report.condition = "parity-gadget";
  report.circuits.push_back(&c);
  auto code2 = direct_sum(block_code, block_code);
  measured_operators(c, code2);
  size_t n = block_code.n();
  Sector ws = weight_sector(sector);
  auto single = [&](const PauliOperator &p) -> std::optional<std::string> {
    // (P, I) or (I, P) of weight one up to stabilizers, or the identity.
    auto a = p.block(0, n), b = p.block(n, n);
    bool a_triv = block_code.in_stabilizer(a), b_triv = block_code.in_stabilizer(b);
    if (a_triv && b_triv) return "I";
    if (b_triv && block_code.coset_min_weight(a, ws) == 1) return "single";
    if (a_triv && block_code.coset_min_weight(b, ws) == 1) return "single";
    return std::nullopt;
  };
  std::set<std::string> hit;
  std::map<BitVec, PauliOperator> by_syndrome;
  for (const auto &row : full_fault_table(c, sector)) {
    ++report.events;
    const auto &r = row.outcome.residual;
    std::optional<std::string> label = single(r);
    if (!label) {
      for (auto &[l, e] : expected) {
        if (code2.stabilizer_equivalent(e, r)) label = l;
      }
    }
    if (!label) {
      report.fail({{0, row.event, std::nullopt}, row.outcome, "residual not in the expected list"});
      continue;
    }
    hit.insert(*label);
    auto prod = r.block(0, n) * r.block(n, n);
    if (*label != "I" && block_code.syndrome_of(prod).none()) {
      report.fail({{0, row.event, std::nullopt}, row.outcome, "product of the two blocks has trivial syndrome"});
    }
    auto syn = code2.syndrome_of(r);
    auto [it, fresh] = by_syndrome.emplace(syn, r);
    if (!fresh && !code2.stabilizer_equivalent(it->second, r)) {
      report.fail({{0, row.event, std::nullopt}, row.outcome,
                   "indistinguishable from " + it->second.sparse_blocks(n) + " by the separate syndromes"});
    }
  }
  for (auto &[l, e] : expected) {
    if (!hit.count(l)) {
      report.pass = false;
      report.notes.push_back("expected entry " + l + " (" + e.sparse_blocks(n) + ") not produced by any fault");
    }
  }
  report.classes = by_syndrome.size();
  // Documented limitation: a diagonal pair of equal single-qubit errors
  // commutes with the parity measurement.
  char other = sector == FaultSector::Z_ONLY ? 'X' : 'Z';
  for (size_t q = 0; q < n; ++q) {
    PauliOperator diag = PauliOperator::on(2 * n, other, {q, n + q});
    if (propagate(c, {}, &diag).flags.none()) {
      report.notes.push_back(std::string("limitation: ") + other + std::to_string(q + 1) + " (x) " + other +
                             std::to_string(q + 1) + " is not detected");
      break;
    }
  }
  return report;
}

}  // namespace ftqec

#endif  // FTQEC_VERIFY_HPP
