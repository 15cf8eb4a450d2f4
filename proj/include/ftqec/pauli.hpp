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

#ifndef FTQEC_PAULI_HPP
#define FTQEC_PAULI_HPP

#include <cctype>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ftqec/bitvec.hpp"

namespace ftqec {

enum class Sector { X, Z, FULL };

/// Phaseless n-qubit Pauli operator in binary symplectic form.
///
/// Qubit i carries X iff x[i], Z iff z[i], Y iff both. Indices are 0-based
/// here; the text forms use 1-based labels ("X4 X5").
class PauliOperator {
 public:
  PauliOperator() = default;
  explicit PauliOperator(size_t n) : x_(n), z_(n) {}
  PauliOperator(BitVec x, BitVec z) : x_(std::move(x)), z_(std::move(z)) {
    if (x_.size() != z_.size()) throw std::invalid_argument("x and z parts differ in length");
  }

  static PauliOperator identity(size_t n) { return PauliOperator(n); }

  /// Letter ('I','X','Y','Z') on a set of 0-based qubits.
  static PauliOperator on(size_t n, char letter, std::initializer_list<size_t> qubits) {
    return on(n, letter, std::vector<size_t>(qubits));
  }
  static PauliOperator on(size_t n, char letter, const std::vector<size_t> &qubits) {
    PauliOperator p(n);
    for (size_t q : qubits) p.set(q, letter);
    return p;
  }
  /// Same as on() but with the 1-based labels used in text.
  static PauliOperator on1(size_t n, char letter, std::initializer_list<size_t> labels) {
    PauliOperator p(n);
    for (size_t q : labels) p.set(q - 1, letter);
    return p;
  }

  size_t num_qubits() const { return x_.size(); }
  const BitVec &x() const { return x_; }
  const BitVec &z() const { return z_; }
  BitVec &x() { return x_; }
  BitVec &z() { return z_; }

  char letter(size_t q) const { return "IXZY"[x_[q] | (z_[q] << 1)]; }
  void set(size_t q, char letter) {
    switch (letter) {
      case 'I': x_.set(q, false); z_.set(q, false); break;
      case 'X': x_.set(q, true); z_.set(q, false); break;
      case 'Y': x_.set(q, true); z_.set(q, true); break;
      case 'Z': x_.set(q, false); z_.set(q, true); break;
      default: throw std::invalid_argument(std::string("not a Pauli letter: ") + letter);
    }
  }

  bool is_identity() const { return x_.none() && z_.none(); }

  PauliOperator &operator*=(const PauliOperator &other) {
    check_size(other);
    x_ ^= other.x_;
    z_ ^= other.z_;
    return *this;
  }
  friend PauliOperator operator*(PauliOperator a, const PauliOperator &b) { return a *= b; }

  bool operator==(const PauliOperator &) const = default;
  auto operator<=>(const PauliOperator &other) const {
    if (auto c = x_ <=> other.x_; c != 0) return c;
    return z_ <=> other.z_;
  }

  /// Symplectic form <p,q> = p.x.q.z + p.z.q.x over GF(2).
  bool anticommutes(const PauliOperator &other) const {
    check_size(other);
    return x_.dot(other.z_) ^ z_.dot(other.x_);
  }
  bool commutes(const PauliOperator &other) const { return !anticommutes(other); }

  size_t weight(Sector sector = Sector::FULL) const {
    switch (sector) {
      case Sector::X: return x_.popcount();
      case Sector::Z: return z_.popcount();
      case Sector::FULL: return (x_ | z_).popcount();
    }
    return 0;
  }

  /// Restriction to one sector (the other component cleared).
  PauliOperator x_part() const { return PauliOperator(x_, BitVec(x_.size())); }
  PauliOperator z_part() const { return PauliOperator(BitVec(z_.size()), z_); }
  PauliOperator part(Sector sector) const {
    return sector == Sector::X ? x_part() : sector == Sector::Z ? z_part() : *this;
  }

  /// Concatenated x|z vector of length 2n.
  BitVec symplectic() const { return x_.concat(z_); }
  static PauliOperator from_symplectic(const BitVec &v) {
    size_t n = v.size() / 2;
    return PauliOperator(v.slice(0, n), v.slice(n, n));
  }

  /// Tensor product (block concatenation).
  PauliOperator tensor(const PauliOperator &other) const {
    return PauliOperator(x_.concat(other.x_), z_.concat(other.z_));
  }
  PauliOperator block(size_t start, size_t len) const {
    return PauliOperator(x_.slice(start, len), z_.slice(start, len));
  }

  /// Dense form over {I,X,Y,Z}, e.g. "IIIXXXX".
  std::string dense() const {
    std::string s(num_qubits(), 'I');
    for (size_t q = 0; q < num_qubits(); ++q) s[q] = letter(q);
    return s;
  }

  /// Sparse form with 1-based labels, e.g. "X4 X5"; "I" for the identity.
  std::string sparse() const {
    std::string s;
    for (size_t q = 0; q < num_qubits(); ++q) {
      char c = letter(q);
      if (c == 'I') continue;
      if (!s.empty()) s += ' ';
      s += c;
      s += std::to_string(q + 1);
    }
    return s.empty() ? "I" : s;
  }

  /// Sparse form split into equal blocks joined by " | ", labels restart at 1.
  std::string sparse_blocks(size_t block_size) const {
    std::string s;
    for (size_t start = 0; start < num_qubits(); start += block_size) {
      if (!s.empty()) s += " | ";
      s += block(start, block_size).sparse();
    }
    return s;
  }

  /// Parses the dense form, the sparse form, or blocked sparse forms joined
  /// by '|' (each block of width n / blocks).
  static PauliOperator parse(std::string_view text, size_t n) {
    std::string t(text);
    if (t.find('|') != std::string::npos) {
      std::vector<std::string> parts;
      std::stringstream ss(t);
      std::string part;
      while (std::getline(ss, part, '|')) parts.push_back(part);
      if (parts.empty() || n % parts.size() != 0) {
        throw std::invalid_argument("block count does not divide qubit count in '" + t + "'");
      }
      size_t width = n / parts.size();
      PauliOperator out(0);
      for (const auto &p : parts) out = out.tensor(parse(p, width));
      return out;
    }
    auto tokens = split_ws(t);
    bool dense = tokens.size() == 1 && tokens[0].size() == n && tokens[0].find_first_of("0123456789") == std::string::npos;
    PauliOperator p(n);
    if (dense) {
      for (size_t q = 0; q < n; ++q) p.set(q, static_cast<char>(std::toupper(tokens[0][q])));
      return p;
    }
    for (const auto &tok : tokens) {
      if (tok == "I") continue;
      char c = static_cast<char>(std::toupper(tok[0]));
      if (c != 'X' && c != 'Y' && c != 'Z' && c != 'I') {
        throw std::invalid_argument("bad Pauli token '" + tok + "'");
      }
      // Either "X4" or a run of labels "X4,5,6" / "X4,5".
      std::string rest = tok.substr(1);
      if (rest.empty()) throw std::invalid_argument("missing qubit label in '" + tok + "'");
      std::stringstream rs(rest);
      std::string lab;
      while (std::getline(rs, lab, ',')) {
        size_t idx = 0;
        try {
          size_t used = 0;
          idx = std::stoul(lab, &used);
          if (used != lab.size()) throw std::invalid_argument(lab);
        } catch (const std::exception &) {
          throw std::invalid_argument("bad qubit label in '" + tok + "'");
        }
        if (idx < 1 || idx > n) {
          throw std::invalid_argument("qubit label " + lab + " out of range 1.." + std::to_string(n));
        }
        if (p.letter(idx - 1) != 'I') {
          throw std::invalid_argument("qubit " + lab + " listed twice in '" + t + "'");
        }
        p.set(idx - 1, c);
      }
    }
    return p;
  }

 private:
  static std::vector<std::string> split_ws(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }
  void check_size(const PauliOperator &other) const {
    if (other.num_qubits() != num_qubits()) {
      throw std::invalid_argument("Pauli length mismatch: " + std::to_string(num_qubits()) + " vs " +
                                  std::to_string(other.num_qubits()));
    }
  }

  BitVec x_;
  BitVec z_;
};

inline PauliOperator multiply(const PauliOperator &p, const PauliOperator &q) { return p * q; }
inline bool commutes(const PauliOperator &p, const PauliOperator &q) { return p.commutes(q); }
inline size_t weight(const PauliOperator &p, Sector sector = Sector::FULL) { return p.weight(sector); }

struct PauliHash {
  size_t operator()(const PauliOperator &p) const { return p.x().hash() * 31 + p.z().hash(); }
};

/// One bit per stabilizer generator, in generator order.
using SyndromeVector = BitVec;

}  // namespace ftqec

#endif  // FTQEC_PAULI_HPP
