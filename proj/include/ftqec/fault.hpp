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

#ifndef FTQEC_FAULT_HPP
#define FTQEC_FAULT_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "ftqec/circuit.hpp"
#include "ftqec/code.hpp"

namespace ftqec {

enum class FaultSector { X_ONLY, Z_ONLY, ALL };

inline FaultSector parse_fault_sector(const std::string &s) {
  if (s == "x" || s == "X") return FaultSector::X_ONLY;
  if (s == "z" || s == "Z") return FaultSector::Z_ONLY;
  if (s == "all" || s == "ALL") return FaultSector::ALL;
  throw std::invalid_argument("sector must be x, z or all, got '" + s + "'");
}

/// One fault at one location. For Pauli payloads, operand i carries the
/// letter with code (payload >> 2i) & 3 in the x | z << 1 encoding, so
/// payload 1 on a CNOT is "XI" (X on the control). A measurement flip has
/// payload 0 and flip set.
struct FaultEvent {
  uint32_t location = 0;
  uint8_t payload = 0;
  bool flip = false;

  auto operator<=>(const FaultEvent &) const = default;

  char letter(size_t operand) const { return "IXZY"[(payload >> (2 * operand)) & 3]; }

  std::string payload_str(const Circuit &c) const {
    if (flip) return "FLIP";
    std::string s;
    for (size_t i = 0; i < c.locations()[location].qubits.size(); ++i) s += letter(i);
    return s;
  }
  std::string str(const Circuit &c) const {
    const auto &loc = c.locations()[location];
    std::string s = std::to_string(location + 1);
    if (!loc.label.empty()) s += "@" + loc.label;
    return s + ":" + payload_str(c);
  }
};

struct FaultOutcome {
  PauliOperator residual;  // on data qubits
  BitVec flags;            // one bit per measurement

  bool operator==(const FaultOutcome &) const = default;
  bool detected() const { return flags.any(); }
};

namespace detail {

inline bool letter_in_sector(unsigned code, FaultSector s) {
  switch (s) {
    case FaultSector::X_ONLY: return code == 0 || code == 1;
    case FaultSector::Z_ONLY: return code == 0 || code == 2;
    case FaultSector::ALL: return true;
  }
  return false;
}

}  // namespace detail

/// Every fault event of the circuit in (location, payload) order. X_ONLY
/// keeps payloads built from I and X, Z_ONLY from I and Z; outcome flips of
/// Z-basis measurements count as X faults and of X-basis ones as Z faults.
inline std::vector<FaultEvent> enumerate_locations(const Circuit &c, FaultSector sector = FaultSector::ALL) {
  std::vector<FaultEvent> out;
  for (uint32_t i = 0; i < c.locations().size(); ++i) {
    const auto &loc = c.locations()[i];
    if (loc.kind == OpKind::PERMUTE) continue;
    size_t a = loc.qubits.size();
    unsigned limit = 1u << (2 * a);
    for (unsigned p = 1; p < limit; ++p) {
      bool ok = true;
      for (size_t k = 0; k < a; ++k) ok &= detail::letter_in_sector((p >> (2 * k)) & 3, sector);
      if (ok) out.push_back({i, static_cast<uint8_t>(p), false});
    }
    if (is_measurement(loc.kind)) {
      bool ok = sector == FaultSector::ALL || (sector == FaultSector::X_ONLY) == (loc.kind == OpKind::MEAS_Z);
      if (ok) out.push_back({i, 0, true});
    }
  }
  return out;
}

/// Inserts a REST location for every live qubit left idle in a tick. Data
/// qubits are always live; ancillas are live from preparation to
/// measurement.
inline Circuit with_idle_rests(const Circuit &c) {
  Circuit out(c.n_data(), c.n_ancilla());
  out.set_name(c.name());
  std::vector<bool> live(c.n_qubits(), false);
  for (size_t q = 0; q < c.n_data(); ++q) live[q] = true;
  size_t i = 0;
  const auto &locs = c.locations();
  while (i < locs.size()) {
    size_t tick = locs[i].tick;
    std::vector<bool> busy(c.n_qubits(), false);
    std::vector<bool> live_before = live;
    size_t j = i;
    for (; j < locs.size() && locs[j].tick == tick; ++j) {
      const auto &loc = locs[j];
      for (size_t q : loc.qubits) busy[q] = true;
      if (is_prep(loc.kind)) live[loc.qubits[0]] = true;
      if (is_measurement(loc.kind) && !c.is_data(loc.qubits[0])) live[loc.qubits[0]] = false;
      out.append(loc);
    }
    for (size_t q = 0; q < c.n_qubits(); ++q) {
      if (live_before[q] && !busy[q]) {
        Location r;
        r.kind = OpKind::REST;
        r.tick = tick;
        r.qubits = {q};
        out.append(r);
      }
    }
    i = j;
  }
  return out;
}

namespace detail {

inline void inject(PauliOperator &frame, const Location &loc, const FaultEvent &e) {
  for (size_t k = 0; k < loc.qubits.size(); ++k) {
    unsigned code = (e.payload >> (2 * k)) & 3;
    size_t q = loc.qubits[k];
    if (code & 1) frame.x().flip(q);
    if (code & 2) frame.z().flip(q);
  }
}

}  // namespace detail

/// Forward Pauli-frame propagation of a fault set, optionally on top of an
/// input data error. Faults act after their location, except at
/// measurements where Pauli payloads act just before the readout.
inline FaultOutcome propagate(const Circuit &c, const std::vector<FaultEvent> &faults,
                              const PauliOperator *input = nullptr) {
  std::vector<std::vector<const FaultEvent *>> at(c.locations().size());
  for (const auto &f : faults) {
    if (f.location >= c.locations().size()) throw std::out_of_range("fault location out of range");
    at[f.location].push_back(&f);
  }
  PauliOperator frame(c.n_qubits());
  if (input) {
    if (input->num_qubits() != c.n_data()) throw std::invalid_argument("input error has wrong qubit count");
    for (size_t q = 0; q < c.n_data(); ++q) frame.set(q, input->letter(q));
  }
  BitVec flags(c.num_measurements());
  size_t mi = 0;
  for (size_t i = 0; i < c.locations().size(); ++i) {
    const auto &loc = c.locations()[i];
    switch (loc.kind) {
      case OpKind::PREP_Z:
      case OpKind::PREP_X: frame.set(loc.qubits[0], 'I'); break;
      case OpKind::PERMUTE: apply_permutation(frame, loc.permutation); break;
      case OpKind::MEAS_Z:
      case OpKind::MEAS_X: {
        bool flip = false;
        for (const auto *f : at[i]) {
          if (f->flip) {
            flip = !flip;
          } else {
            detail::inject(frame, loc, *f);
          }
        }
        size_t q = loc.qubits[0];
        flip ^= loc.kind == OpKind::MEAS_Z ? frame.x()[q] : frame.z()[q];
        flags.set(mi++, flip);
        continue;
      }
      default: conjugate(frame, loc); break;
    }
    for (const auto *f : at[i]) detail::inject(frame, loc, *f);
  }
  return {frame.block(0, c.n_data()), flags};
}

inline FaultOutcome propagate(const Circuit &c, const FaultEvent &fault) { return propagate(c, std::vector{fault}); }

struct FaultTableRow {
  FaultEvent event;
  FaultOutcome outcome;
};

/// Every event with its outcome, no deduplication.
inline std::vector<FaultTableRow> full_fault_table(const Circuit &c, FaultSector sector) {
  std::vector<FaultTableRow> rows;
  for (const auto &e : enumerate_locations(c, sector)) rows.push_back({e, propagate(c, e)});
  return rows;
}

/// One row per distinct (residual up to stabilizer, flags), keeping the
/// first event in (location, payload) order.
inline std::vector<FaultTableRow> single_fault_table(const Circuit &c, const StabilizerCode &code, FaultSector sector) {
  struct Key {
    BitVec res, flags;
    bool operator==(const Key &) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key &k) const { return k.res.hash() * 131 + k.flags.hash(); }
  };
  std::unordered_set<Key, KeyHash> seen;
  std::vector<FaultTableRow> out;
  for (auto &row : full_fault_table(c, sector)) {
    Key k{code.canonical(row.outcome.residual).symplectic(), row.outcome.flags};
    if (seen.insert(k).second) out.push_back(std::move(row));
  }
  return out;
}

inline Sector weight_sector(FaultSector s) {
  return s == FaultSector::X_ONLY ? Sector::X : s == FaultSector::Z_ONLY ? Sector::Z : Sector::FULL;
}

/// Calls fn(a, b, outcome) for every unordered pair of distinct events,
/// using linearity of frame propagation to combine single-event outcomes.
inline void for_each_fault_pair(const std::vector<FaultTableRow> &rows,
                                const std::function<void(const FaultTableRow &, const FaultTableRow &,
                                                         const FaultOutcome &)> &fn) {
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = i + 1; j < rows.size(); ++j) {
      FaultOutcome o{rows[i].outcome.residual * rows[j].outcome.residual, rows[i].outcome.flags ^ rows[j].outcome.flags};
      fn(rows[i], rows[j], o);
    }
  }
}

/// TSV: location, payload, residual, flags, coset-min-weight.
inline std::string fault_table_tsv(const Circuit &c, const StabilizerCode &code, const std::vector<FaultTableRow> &rows,
                                   FaultSector sector) {
  std::ostringstream out;
  out << "location\tpayload\tresidual\tflags\tcoset_min_weight\n";
  Sector ws = code.is_css() ? weight_sector(sector) : Sector::FULL;
  for (const auto &r : rows) {
    const auto &loc = c.locations()[r.event.location];
    out << r.event.location + 1;
    if (!loc.label.empty()) out << "@" << loc.label;
    out << "\t" << r.event.payload_str(c) << "\t" << r.outcome.residual.sparse() << "\t" << r.outcome.flags.str()
        << "\t" << code.coset_min_weight(r.outcome.residual, ws) << "\n";
  }
  return out.str();
}

/// Order-2 rows: pairs of events at distinct locations.
inline std::string fault_pair_tsv(const Circuit &c, const StabilizerCode &code, const std::vector<FaultTableRow> &rows,
                                  FaultSector sector) {
  std::ostringstream out;
  out << "location_a\tpayload_a\tlocation_b\tpayload_b\tresidual\tflags\tcoset_min_weight\n";
  Sector ws = code.is_css() ? weight_sector(sector) : Sector::FULL;
  for_each_fault_pair(rows, [&](const FaultTableRow &a, const FaultTableRow &b, const FaultOutcome &o) {
    if (a.event.location == b.event.location) return;
    out << a.event.location + 1 << "\t" << a.event.payload_str(c) << "\t" << b.event.location + 1 << "\t"
        << b.event.payload_str(c) << "\t" << o.residual.sparse() << "\t" << o.flags.str() << "\t"
        << code.coset_min_weight(o.residual, ws) << "\n";
  });
  return out.str();
}

}  // namespace ftqec

#endif  // FTQEC_FAULT_HPP
