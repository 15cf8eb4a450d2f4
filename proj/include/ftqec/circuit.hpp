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

#ifndef FTQEC_CIRCUIT_HPP
#define FTQEC_CIRCUIT_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ftqec/code.hpp"
#include "ftqec/pauli.hpp"

namespace ftqec {

class CircuitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OpKind { PREP_Z, PREP_X, CNOT, CZ, MEAS_Z, MEAS_X, REST, SWAP, PERMUTE };

inline size_t arity(OpKind k) {
  switch (k) {
    case OpKind::CNOT:
    case OpKind::CZ:
    case OpKind::SWAP: return 2;
    case OpKind::PERMUTE: return 0;
    default: return 1;
  }
}
inline bool is_measurement(OpKind k) { return k == OpKind::MEAS_Z || k == OpKind::MEAS_X; }
inline bool is_prep(OpKind k) { return k == OpKind::PREP_Z || k == OpKind::PREP_X; }
inline bool is_two_qubit_gate(OpKind k) { return k == OpKind::CNOT || k == OpKind::CZ; }

struct Location {
  OpKind kind = OpKind::REST;
  size_t tick = 0;
  std::vector<size_t> qubits;        // CNOT: control, target
  std::vector<size_t> permutation;   // PERMUTE: image of each data qubit
  std::optional<PauliOperator> expects;  // MEAS: declared stabilizer on data
  std::string label;                 // optional marker ("@a" in text)
};

/// Time-ordered list of locations over data qubits 0..n_data-1 followed by
/// ancillas n_data..n_data+n_ancilla-1. Text names are d1..dN and a0..aM.
class Circuit {
 public:
  Circuit() = default;
  Circuit(size_t n_data, size_t n_ancilla) : n_data_(n_data), n_ancilla_(n_ancilla) {}

  size_t n_data() const { return n_data_; }
  size_t n_ancilla() const { return n_ancilla_; }
  size_t n_qubits() const { return n_data_ + n_ancilla_; }
  size_t num_ticks() const { return locations_.empty() ? 0 : locations_.back().tick + 1; }
  const std::vector<Location> &locations() const { return locations_; }
  const std::string &name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  /// Location indices of measurements, in measurement order.
  const std::vector<size_t> &measurements() const { return measurements_; }
  size_t num_measurements() const { return measurements_.size(); }

  std::string qubit_name(size_t q) const {
    return q < n_data_ ? "d" + std::to_string(q + 1) : "a" + std::to_string(q - n_data_);
  }
  bool is_data(size_t q) const { return q < n_data_; }

  /// Appends a location; tick must not decrease.
  void append(Location loc) {
    if (!locations_.empty() && loc.tick < locations_.back().tick) throw CircuitError("ticks must be non-decreasing");
    if (is_measurement(loc.kind)) measurements_.push_back(locations_.size());
    for (size_t q : loc.qubits) {
      if (q >= n_qubits()) throw CircuitError("qubit index out of range");
    }
    locations_.push_back(std::move(loc));
  }

  /// Checks the structural invariants; throws CircuitError naming the first
  /// violation.
  void validate() const {
    std::vector<bool> live(n_qubits(), false);
    for (size_t q = 0; q < n_data_; ++q) live[q] = true;
    std::map<size_t, std::set<size_t>> busy;
    for (size_t i = 0; i < locations_.size(); ++i) {
      const auto &loc = locations_[i];
      std::string where = "location " + std::to_string(i + 1) + " (tick " + std::to_string(loc.tick + 1) + ")";
      if (loc.qubits.size() != arity(loc.kind)) throw CircuitError(where + ": wrong operand count");
      if (loc.qubits.size() == 2 && loc.qubits[0] == loc.qubits[1]) {
        throw CircuitError(where + ": both operands are " + qubit_name(loc.qubits[0]));
      }
      for (size_t q : loc.qubits) {
        if (!busy[loc.tick].insert(q).second) {
          throw CircuitError(where + ": qubit " + qubit_name(q) + " used twice in one tick");
        }
      }
      if (loc.kind == OpKind::PERMUTE) {
        if (loc.permutation.size() != n_data_) throw CircuitError(where + ": permutation must cover all data qubits");
        std::vector<bool> seen(n_data_, false);
        for (size_t v : loc.permutation) {
          if (v >= n_data_ || seen[v]) throw CircuitError(where + ": not a permutation");
          seen[v] = true;
        }
        continue;
      }
      if (is_prep(loc.kind)) {
        live[loc.qubits[0]] = true;
        continue;
      }
      for (size_t q : loc.qubits) {
        if (!live[q]) throw CircuitError(where + ": ancilla " + qubit_name(q) + " used without preparation");
      }
      if (is_measurement(loc.kind) && !is_data(loc.qubits[0])) live[loc.qubits[0]] = false;
    }
  }

 private:
  std::string name_;
  size_t n_data_ = 0;
  size_t n_ancilla_ = 0;
  std::vector<Location> locations_;
  std::vector<size_t> measurements_;
};

// ---------------------------------------------------------------------------
// Pauli conjugation by the gate set. Shared by forward fault propagation and
// Heisenberg back-propagation (every gate here is self-inverse).

inline void conjugate(PauliOperator &p, const Location &loc) {
  switch (loc.kind) {
    case OpKind::CNOT: {
      size_t c = loc.qubits[0], t = loc.qubits[1];
      if (p.x()[c]) p.x().flip(t);
      if (p.z()[t]) p.z().flip(c);
      break;
    }
    case OpKind::CZ: {
      size_t a = loc.qubits[0], b = loc.qubits[1];
      if (p.x()[a]) p.z().flip(b);
      if (p.x()[b]) p.z().flip(a);
      break;
    }
    case OpKind::SWAP: {
      size_t a = loc.qubits[0], b = loc.qubits[1];
      char la = p.letter(a), lb = p.letter(b);
      p.set(a, lb);
      p.set(b, la);
      break;
    }
    default: break;
  }
}

/// Moves the Pauli on data qubit i to data qubit perm[i]; inverse moves back.
inline void apply_permutation(PauliOperator &p, const std::vector<size_t> &perm, bool inverse = false) {
  PauliOperator out = p;
  for (size_t i = 0; i < perm.size(); ++i) {
    out.set(i, 'I');
  }
  for (size_t i = 0; i < perm.size(); ++i) {
    if (inverse) {
      out.set(i, p.letter(perm[i]));
    } else {
      out.set(perm[i], p.letter(i));
    }
  }
  p = out;
}

// ---------------------------------------------------------------------------
// Text format.

namespace detail {

inline std::vector<std::string> split_ws(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

/// Parses cycle notation "(1 4 2)(3 5 6)(7)" over 1-based labels into an
/// image vector of size n (unlisted points are fixed).
inline std::vector<size_t> parse_cycles(const std::string &text, size_t n) {
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  std::vector<bool> seen(n, false);
  size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) { ++pos; continue; }
    if (text[pos] != '(') throw CircuitError("expected '(' in permutation '" + text + "'");
    size_t close = text.find(')', pos);
    if (close == std::string::npos) throw CircuitError("unclosed cycle in permutation '" + text + "'");
    std::string inner = text.substr(pos + 1, close - pos - 1);
    std::replace(inner.begin(), inner.end(), ',', ' ');
    std::vector<size_t> cyc;
    for (auto &tok : split_ws(inner)) {
      size_t v = std::stoul(tok);
      if (v < 1 || v > n) throw CircuitError("permutation point " + tok + " out of range");
      if (seen[v - 1]) throw CircuitError("permutation point " + tok + " repeated");
      seen[v - 1] = true;
      cyc.push_back(v - 1);
    }
    for (size_t i = 0; i < cyc.size(); ++i) perm[cyc[i]] = cyc[(i + 1) % cyc.size()];
    pos = close + 1;
  }
  return perm;
}

inline std::string render_cycles(const std::vector<size_t> &perm) {
  std::string out;
  std::vector<bool> seen(perm.size(), false);
  for (size_t s = 0; s < perm.size(); ++s) {
    if (seen[s]) continue;
    out += "(";
    size_t i = s;
    bool first = true;
    while (!seen[i]) {
      seen[i] = true;
      if (!first) out += " ";
      out += std::to_string(i + 1);
      first = false;
      i = perm[i];
    }
    out += ")";
  }
  return out;
}

}  // namespace detail

/// Permutation that applies `cycles` inside each of two equal blocks and
/// exchanges the blocks: qubit i of one block goes to qubit cycles(i) of the
/// other.
inline std::vector<size_t> block_swap_permutation(const std::vector<size_t> &within, size_t block) {
  std::vector<size_t> perm(2 * block);
  for (size_t i = 0; i < block; ++i) {
    perm[i] = block + within[i];
    perm[block + i] = within[i];
  }
  return perm;
}

/// Parses the permutation forms accepted in circuit and protocol files:
/// "(1 4 2)(3 5 6)(7)" over all data qubits, or the same followed by
/// "swap-blocks" to act inside each of two blocks and exchange them.
inline std::vector<size_t> parse_permutation(std::string text, size_t n_data) {
  const std::string kw = "swap-blocks";
  auto at = text.find(kw);
  if (at != std::string::npos) {
    text.erase(at, kw.size());
    if (n_data % 2) throw CircuitError("swap-blocks needs an even number of data qubits");
    return block_swap_permutation(detail::parse_cycles(text, n_data / 2), n_data / 2);
  }
  return detail::parse_cycles(text, n_data);
}

/// Grammar (one location per line, `tick` ends a time step, `#` comments):
///   qubits data=<n> ancilla=<m>      optional header
///   prep z a0 | prep x a1
///   cnot d4 a0 | cz a0 d2 | swap a0 a1
///   meas z a0 [expects <pauli>] | meas x a1 [expects <pauli>]
///   rest d2
///   permute (1 4 2)(3 5 6)(7) [swap-blocks]
/// Any token "@name" labels the location.
inline Circuit parse_circuit(const std::string &text, size_t default_n_data = 0, const std::string &source = "<circuit>") {
  struct Raw {
    size_t line, col;
    std::vector<std::string> tok;
    std::string label;
    std::string rest;
    size_t tick;
  };
  std::vector<Raw> raws;
  size_t n_data = default_n_data, n_anc = 0;
  bool header = false;
  size_t max_d = 0, max_a = 0;
  bool any_a = false;
  std::string name;
  std::stringstream in(text);
  std::string line;
  size_t lineno = 0, tick = 0;
  bool tick_has_ops = false;
  auto fail = [&](size_t ln, size_t col, const std::string &msg) {
    throw CircuitError(source + ":" + std::to_string(ln) + ":" + std::to_string(col) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    size_t col = line.find_first_not_of(" \t") + 1;
    if (toks[0] == "tick") {
      if (toks.size() != 1) fail(lineno, col, "'tick' takes no operands");
      ++tick;
      tick_has_ops = false;
      continue;
    }
    if (toks[0] == "qubits") {
      for (size_t i = 1; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string::npos) fail(lineno, col, "expected key=value in qubits header");
        std::string k = toks[i].substr(0, eq);
        size_t v = std::stoul(toks[i].substr(eq + 1));
        if (k == "data") n_data = v;
        else if (k == "ancilla") n_anc = v;
        else fail(lineno, col, "unknown qubits key '" + k + "'");
      }
      header = true;
      continue;
    }
    if (toks[0] == "name") {
      if (toks.size() != 2) fail(lineno, col, "'name' takes one operand");
      name = toks[1];
      continue;
    }
    Raw r{lineno, col, {}, {}, {}, tick};
    for (auto &t : toks) {
      if (t[0] == '@') {
        r.label = t.substr(1);
      } else {
        r.tok.push_back(t);
      }
    }
    if (r.tok[0] == "permute") {
      auto p = line.find("permute");
      r.rest = line.substr(p + 7);
      auto at = r.rest.find('@');
      if (at != std::string::npos) {
        auto end = r.rest.find_first_of(" \t", at);
        r.rest.erase(at, end == std::string::npos ? std::string::npos : end - at);
      }
    }
    for (size_t i = 1; i < r.tok.size(); ++i) {
      const auto &t = r.tok[i];
      if (t == "expects") break;
      if (t.size() >= 2 && (t[0] == 'd' || t[0] == 'a') && std::isdigit(static_cast<unsigned char>(t[1]))) {
        size_t v = std::stoul(t.substr(1));
        if (t[0] == 'd') {
          if (v == 0) fail(lineno, col, "data labels start at d1");
          max_d = std::max(max_d, v);
        } else {
          any_a = true;
          max_a = std::max(max_a, v);
        }
      }
    }
    tick_has_ops = true;
    raws.push_back(std::move(r));
  }
  (void)tick_has_ops;
  if (!header) {
    n_data = std::max(n_data, max_d);
    n_anc = any_a ? max_a + 1 : 0;
  } else if (max_d > n_data || (any_a && max_a >= n_anc)) {
    throw CircuitError(source + ": qubit label exceeds the declared qubit counts");
  }
  Circuit c(n_data, n_anc);
  c.set_name(name);
  auto qubit = [&](const Raw &r, const std::string &t) -> size_t {
    if (t.size() < 2 || (t[0] != 'd' && t[0] != 'a')) fail(r.line, r.col, "expected qubit name, got '" + t + "'");
    size_t v = 0;
    try {
      size_t used = 0;
      v = std::stoul(t.substr(1), &used);
      if (used + 1 != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception &) {
      fail(r.line, r.col, "bad qubit name '" + t + "'");
    }
    return t[0] == 'd' ? v - 1 : n_data + v;
  };
  std::map<size_t, std::set<size_t>> busy;
  for (const auto &r : raws) {
    Location loc;
    loc.tick = r.tick;
    loc.label = r.label;
    const auto &op = r.tok[0];
    auto need = [&](size_t k) {
      if (r.tok.size() < k) fail(r.line, r.col, "'" + op + "' needs " + std::to_string(k - 1) + " operands");
    };
    if (op == "prep" || op == "meas") {
      need(3);
      char basis = static_cast<char>(std::tolower(r.tok[1][0]));
      if (r.tok[1].size() != 1 || (basis != 'z' && basis != 'x')) fail(r.line, r.col, "basis must be x or z");
      if (op == "prep") loc.kind = basis == 'z' ? OpKind::PREP_Z : OpKind::PREP_X;
      else loc.kind = basis == 'z' ? OpKind::MEAS_Z : OpKind::MEAS_X;
      loc.qubits = {qubit(r, r.tok[2])};
      if (r.tok.size() > 3) {
        if (op != "meas" || r.tok[3] != "expects" || r.tok.size() < 5) fail(r.line, r.col, "unexpected trailing tokens");
        std::string p;
        for (size_t i = 4; i < r.tok.size(); ++i) p += r.tok[i] + " ";
        try {
          loc.expects = PauliOperator::parse(p, n_data);
        } catch (const std::exception &e) {
          fail(r.line, r.col, e.what());
        }
      }
    } else if (op == "cnot" || op == "cz" || op == "swap") {
      need(3);
      if (r.tok.size() != 3) fail(r.line, r.col, "'" + op + "' takes exactly two qubits");
      loc.kind = op == "cnot" ? OpKind::CNOT : op == "cz" ? OpKind::CZ : OpKind::SWAP;
      loc.qubits = {qubit(r, r.tok[1]), qubit(r, r.tok[2])};
      if (loc.qubits[0] == loc.qubits[1]) fail(r.line, r.col, "control equals target (" + r.tok[1] + ")");
    } else if (op == "rest") {
      need(2);
      if (r.tok.size() != 2) fail(r.line, r.col, "'rest' takes one qubit");
      loc.kind = OpKind::REST;
      loc.qubits = {qubit(r, r.tok[1])};
    } else if (op == "permute") {
      loc.kind = OpKind::PERMUTE;
      try {
        loc.permutation = parse_permutation(r.rest, n_data);
      } catch (const std::exception &e) {
        fail(r.line, r.col, e.what());
      }
    } else {
      fail(r.line, r.col, "unknown operation '" + op + "'");
    }
    for (size_t q : loc.qubits) {
      if (!busy[loc.tick].insert(q).second) {
        fail(r.line, r.col, "qubit " + c.qubit_name(q) + " used twice in tick " + std::to_string(loc.tick + 1));
      }
    }
    c.append(std::move(loc));
  }
  c.validate();
  return c;
}

inline Circuit load_circuit(const std::string &path, size_t default_n_data = 0) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open circuit file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  auto c = parse_circuit(ss.str(), default_n_data, path);
  if (c.name().empty()) c.set_name(std::filesystem::path(path).stem().string());
  return c;
}

/// Canonical text: explicit header, one location per line, ticks separated.
inline std::string render_circuit(const Circuit &c) {
  std::ostringstream out;
  if (!c.name().empty()) out << "name " << c.name() << "\n";
  out << "qubits data=" << c.n_data() << " ancilla=" << c.n_ancilla() << "\n";
  size_t tick = 0;
  for (const auto &loc : c.locations()) {
    while (tick < loc.tick) {
      out << "tick\n";
      ++tick;
    }
    switch (loc.kind) {
      case OpKind::PREP_Z: out << "prep z " << c.qubit_name(loc.qubits[0]); break;
      case OpKind::PREP_X: out << "prep x " << c.qubit_name(loc.qubits[0]); break;
      case OpKind::MEAS_Z: out << "meas z " << c.qubit_name(loc.qubits[0]); break;
      case OpKind::MEAS_X: out << "meas x " << c.qubit_name(loc.qubits[0]); break;
      case OpKind::CNOT: out << "cnot " << c.qubit_name(loc.qubits[0]) << " " << c.qubit_name(loc.qubits[1]); break;
      case OpKind::CZ: out << "cz " << c.qubit_name(loc.qubits[0]) << " " << c.qubit_name(loc.qubits[1]); break;
      case OpKind::SWAP: out << "swap " << c.qubit_name(loc.qubits[0]) << " " << c.qubit_name(loc.qubits[1]); break;
      case OpKind::REST: out << "rest " << c.qubit_name(loc.qubits[0]); break;
      case OpKind::PERMUTE: out << "permute " << detail::render_cycles(loc.permutation); break;
    }
    if (loc.expects) out << " expects " << loc.expects->sparse();
    if (!loc.label.empty()) out << " @" << loc.label;
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Ideal semantics.

/// Back-propagates `op` (on all qubits, placed just before location `end`)
/// to time zero. Preparations absorb their own basis and reject the other;
/// the result must not touch ancillas.
inline PauliOperator back_propagate(const Circuit &c, PauliOperator op, size_t end) {
  for (size_t i = end; i-- > 0;) {
    const auto &loc = c.locations()[i];
    switch (loc.kind) {
      case OpKind::PREP_Z:
      case OpKind::PREP_X: {
        size_t q = loc.qubits[0];
        bool bad = loc.kind == OpKind::PREP_Z ? op.x()[q] : op.z()[q];
        if (bad) {
          throw CircuitError("operator anticommutes with the preparation of " + c.qubit_name(q) + " at tick " +
                             std::to_string(loc.tick + 1));
        }
        op.set(q, 'I');
        break;
      }
      case OpKind::PERMUTE: apply_permutation(op, loc.permutation, true); break;
      default: conjugate(op, loc); break;
    }
  }
  for (size_t q = c.n_data(); q < c.n_qubits(); ++q) {
    if (op.letter(q) != 'I') throw CircuitError("operator depends on unprepared ancilla " + c.qubit_name(q));
  }
  return op.block(0, c.n_data());
}

struct MeasurementCheck {
  std::vector<PauliOperator> measured;  // per measurement, on data qubits
  bool preserves_codespace = true;      // every generator maps into the stabilizer group
  bool logical_identity = true;         // every logical maps to itself up to stabilizers
  bool has_permutation = false;
};

/// Data operator measured by each measurement, checked against the code and
/// the declared `expects` operators. Throws CircuitError when a measured
/// operator is outside the stabilizer group or differs from its declaration.
inline MeasurementCheck measured_operators(const Circuit &c, const StabilizerCode &code) {
  if (code.n() != c.n_data()) {
    throw CircuitError("circuit has " + std::to_string(c.n_data()) + " data qubits but code " + code.name() + " has " +
                       std::to_string(code.n()));
  }
  c.validate();
  MeasurementCheck out;
  size_t nq = c.n_qubits();
  for (size_t mi = 0; mi < c.measurements().size(); ++mi) {
    size_t li = c.measurements()[mi];
    const auto &loc = c.locations()[li];
    PauliOperator basis(nq);
    basis.set(loc.qubits[0], loc.kind == OpKind::MEAS_Z ? 'Z' : 'X');
    PauliOperator m = back_propagate(c, basis, li);
    if (!code.in_stabilizer(m)) {
      throw CircuitError("measurement " + std::to_string(mi + 1) + " of " + c.qubit_name(loc.qubits[0]) + " measures " +
                         m.sparse() + ", which is not in the stabilizer group");
    }
    if (loc.expects && *loc.expects != m) {
      throw CircuitError("measurement " + std::to_string(mi + 1) + " declares " + loc.expects->sparse() + " but measures " +
                         m.sparse());
    }
    out.measured.push_back(m);
  }
  for (const auto &loc : c.locations()) out.has_permutation |= loc.kind == OpKind::PERMUTE;
  auto pad = [&](const PauliOperator &p) { return p.tensor(PauliOperator(c.n_ancilla())); };
  size_t end = c.locations().size();
  for (const auto &g : code.generators()) {
    try {
      if (!code.in_stabilizer(back_propagate(c, pad(g), end))) out.preserves_codespace = false;
    } catch (const CircuitError &) {
      out.preserves_codespace = false;
    }
  }
  auto check_logicals = [&](const std::vector<PauliOperator> &ls) {
    for (const auto &l : ls) {
      try {
        if (!code.stabilizer_equivalent(back_propagate(c, pad(l), end), l)) out.logical_identity = false;
      } catch (const CircuitError &) {
        out.logical_identity = false;
      }
    }
  };
  check_logicals(code.logical_x());
  check_logicals(code.logical_z());
  if (!out.preserves_codespace) throw CircuitError("circuit does not map the codespace to itself");
  if (!out.has_permutation && !out.logical_identity) throw CircuitError("circuit acts nontrivially on the logical qubits");
  return out;
}

inline size_t cnot_count(const Circuit &c) {
  return static_cast<size_t>(std::count_if(c.locations().begin(), c.locations().end(),
                                           [](const Location &l) { return l.kind == OpKind::CNOT; }));
}

struct RoundProfile {
  size_t prep_rounds = 0;
  size_t cnot_depth = 0;
  size_t meas_rounds = 0;
  bool operator==(const RoundProfile &) const = default;
};

/// Number of ticks containing a preparation, a two-qubit gate and a
/// measurement respectively.
inline RoundProfile round_profile(const Circuit &c) {
  std::map<size_t, std::array<bool, 3>> per_tick;
  for (const auto &l : c.locations()) {
    auto &t = per_tick[l.tick];
    t[0] |= is_prep(l.kind);
    t[1] |= is_two_qubit_gate(l.kind);
    t[2] |= is_measurement(l.kind);
  }
  RoundProfile p;
  for (auto &[tick, flags] : per_tick) {
    p.prep_rounds += flags[0];
    p.cnot_depth += flags[1];
    p.meas_rounds += flags[2];
  }
  return p;
}

// ---------------------------------------------------------------------------
// Connectivity layouts.

/// Undirected interaction graph over qubit names ("d1", "a0").
struct Layout {
  std::string name;
  bool complete = false;
  std::set<std::pair<std::string, std::string>> edges;

  static Layout complete_graph() { return Layout{"complete", true, {}}; }
  void add_edge(const std::string &a, const std::string &b) { edges.insert(std::minmax(a, b)); }
  bool adjacent(const std::string &a, const std::string &b) const {
    return complete || edges.count(std::minmax(a, b)) > 0;
  }
};

/// "layout <name>", "edge <q> <q>", "path <q> <q> ...", "complete".
inline Layout parse_layout(std::istream &in, const std::string &source = "<layout>") {
  Layout l;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto t = detail::split_ws(line);
    if (t.empty()) continue;
    if (t[0] == "layout" && t.size() == 2) {
      l.name = t[1];
    } else if (t[0] == "complete") {
      l.complete = true;
    } else if (t[0] == "edge" && t.size() == 3) {
      l.add_edge(t[1], t[2]);
    } else if (t[0] == "path" && t.size() >= 3) {
      for (size_t i = 2; i < t.size(); ++i) l.add_edge(t[i - 1], t[i]);
    } else {
      throw CircuitError(source + ":" + std::to_string(lineno) + ": bad layout line");
    }
  }
  return l;
}

inline Layout load_layout(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open layout file " + path);
  return parse_layout(f, path);
}

struct LocalityViolation {
  size_t location;
  std::string a, b;  // physical sites that are not adjacent
};

/// Every two-qubit gate (and swap) whose current sites are not adjacent.
/// Swaps exchange the sites of their two qubits.
inline std::vector<LocalityViolation> check_locality(const Circuit &c, const Layout &layout) {
  std::vector<std::string> site(c.n_qubits());
  for (size_t q = 0; q < c.n_qubits(); ++q) site[q] = c.qubit_name(q);
  std::vector<LocalityViolation> out;
  for (size_t i = 0; i < c.locations().size(); ++i) {
    const auto &loc = c.locations()[i];
    if (loc.qubits.size() != 2) continue;
    const auto &a = site[loc.qubits[0]];
    const auto &b = site[loc.qubits[1]];
    if (!layout.adjacent(a, b)) out.push_back({i, a, b});
    if (loc.kind == OpKind::SWAP) std::swap(site[loc.qubits[0]], site[loc.qubits[1]]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Protocols.

struct ProtocolRound {
  Circuit circuit;
  std::vector<size_t> permutation;  // applied after the round; empty = none
  std::string source;
};

/// Rounds executed in order, the whole list `repeat` times.
struct Protocol {
  std::string name;
  std::string code_path;
  std::vector<ProtocolRound> rounds;
  size_t repeat = 1;
  std::string decode_policy = "lookup";
  bool verified = true;
  size_t blocks = 1;  // rounds act on this many copies of the code
};

/// "protocol <name>", "code <path>", "round <circuit path> [permute <perm>]",
/// "repeat <k>", "decode <policy>", "unverified", "blocks <k>". Paths are relative to the
/// protocol file.
inline Protocol load_protocol(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open protocol file " + path);
  auto dir = std::filesystem::path(path).parent_path();
  Protocol p;
  std::string line;
  size_t lineno = 0;
  std::vector<std::pair<std::string, std::string>> round_specs;
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto t = detail::split_ws(line);
    if (t.empty()) continue;
    auto fail = [&](const std::string &m) { throw CircuitError(path + ":" + std::to_string(lineno) + ": " + m); };
    if (t[0] == "protocol" && t.size() == 2) {
      p.name = t[1];
    } else if (t[0] == "code" && t.size() == 2) {
      p.code_path = (dir / t[1]).string();
    } else if (t[0] == "round" && t.size() >= 2) {
      std::string perm;
      if (t.size() > 2) {
        if (t[2] != "permute") fail("expected 'permute' after round circuit");
        perm = line.substr(line.find("permute") + 7);
      }
      round_specs.emplace_back((dir / t[1]).string(), perm);
    } else if (t[0] == "repeat" && t.size() == 2) {
      p.repeat = std::stoul(t[1]);
    } else if (t[0] == "decode" && t.size() == 2) {
      p.decode_policy = t[1];
    } else if (t[0] == "blocks" && t.size() == 2) {
      p.blocks = std::stoul(t[1]);
      if (p.blocks == 0) fail("blocks must be positive");
    } else if (t[0] == "unverified") {
      p.verified = false;
    } else {
      fail("bad protocol line");
    }
  }
  if (p.code_path.empty()) throw CircuitError(path + ": protocol names no code");
  size_t width = load_code(p.code_path).n() * p.blocks;
  for (auto &[cpath, perm] : round_specs) {
    ProtocolRound r{load_circuit(cpath, width), {}, cpath};
    if (r.circuit.n_data() != width) throw CircuitError(cpath + ": data qubit count differs from code");
    if (!perm.empty()) r.permutation = parse_permutation(perm, width);
    p.rounds.push_back(std::move(r));
  }
  if (p.rounds.empty()) throw CircuitError(path + ": protocol has no rounds");
  if (p.name.empty()) p.name = std::filesystem::path(path).stem().string();
  return p;
}

/// The code a protocol's rounds act on: the named code, repeated over its
/// blocks.
inline StabilizerCode load_protocol_code(const Protocol &p) {
  auto block = load_code(p.code_path);
  auto out = block;
  for (size_t i = 1; i < p.blocks; ++i) out = direct_sum(out, block);
  return out;
}

}  // namespace ftqec

#endif  // FTQEC_CIRCUIT_HPP
