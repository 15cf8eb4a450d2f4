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

#ifndef FTQEC_CODE_HPP
#define FTQEC_CODE_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ftqec/gf2.hpp"
#include "ftqec/pauli.hpp"

namespace ftqec {

/// Raised when a generator set or logical choice violates a code invariant.
class CodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Plaquette {
  std::string color;
  std::vector<size_t> qubits;  // 0-based
  bool operator==(const Plaquette &) const = default;
};

/// Logical component of an operator in the normalizer: bit i of x (z) is set
/// when the operator contains logical X_i (Z_i).
struct LogicalClass {
  BitVec x;
  BitVec z;
  bool trivial() const { return x.none() && z.none(); }
  bool operator==(const LogicalClass &) const = default;
};

class StabilizerCode;
StabilizerCode build_code(std::string name, std::vector<PauliOperator> generators,
                          std::vector<PauliOperator> logical_x, std::vector<PauliOperator> logical_z,
                          std::vector<Plaquette> plaquettes = {});

/// Stabilizer generators plus a chosen symplectic basis of logical operators.
/// Only build_code() constructs one, so every instance satisfies the code
/// invariants.
class StabilizerCode {
 public:
  const std::string &name() const { return name_; }
  size_t n() const { return n_; }
  size_t k() const { return logical_x_.size(); }
  size_t num_generators() const { return generators_.size(); }
  const std::vector<PauliOperator> &generators() const { return generators_; }
  const std::vector<PauliOperator> &logical_x() const { return logical_x_; }
  const std::vector<PauliOperator> &logical_z() const { return logical_z_; }
  const std::vector<Plaquette> &plaquettes() const { return plaquettes_; }
  bool experimental() const { return experimental_; }
  void set_experimental(bool v) { experimental_ = v; }

  /// Sector::X / Sector::Z for pure generators, Sector::FULL for mixed ones.
  Sector generator_type(size_t i) const { return types_[i]; }
  bool is_css() const {
    return std::none_of(types_.begin(), types_.end(), [](Sector s) { return s == Sector::FULL; });
  }
  /// CSS and the X and Z generator supports coincide.
  bool is_self_dual() const {
    if (!is_css()) return false;
    std::vector<BitVec> xs, zs;
    for (size_t i = 0; i < generators_.size(); ++i) {
      (types_[i] == Sector::X ? xs : zs).push_back(types_[i] == Sector::X ? generators_[i].x() : generators_[i].z());
    }
    if (xs.size() != zs.size()) return false;
    gf2::Basis bx(n_);
    for (auto &v : xs) bx.insert(v);
    return std::all_of(zs.begin(), zs.end(), [&](const BitVec &v) { return bx.contains(v); });
  }

  SyndromeVector syndrome_of(const PauliOperator &p) const {
    check_size(p);
    SyndromeVector s(generators_.size());
    for (size_t i = 0; i < generators_.size(); ++i) {
      if (generators_[i].anticommutes(p)) s.set(i);
    }
    return s;
  }

  bool in_stabilizer(const PauliOperator &p) const {
    check_size(p);
    return stab_basis_.contains(p.symplectic());
  }

  bool stabilizer_equivalent(const PauliOperator &p, const PauliOperator &q) const { return in_stabilizer(p * q); }

  /// Logical class of p, or nullopt when p has a nonzero syndrome.
  std::optional<LogicalClass> logical_action(const PauliOperator &p) const {
    if (syndrome_of(p).any()) return std::nullopt;
    auto coeffs = full_basis_.solve(p.symplectic());
    if (!coeffs) {
      throw std::logic_error("operator with zero syndrome lies outside the normalizer span; logical set incomplete");
    }
    size_t m = generators_.size(), kk = k();
    LogicalClass cls{BitVec(kk), BitVec(kk)};
    for (size_t i = 0; i < kk; ++i) {
      if ((*coeffs)[m + i]) cls.x.set(i);
      if ((*coeffs)[m + kk + i]) cls.z.set(i);
    }
    return cls;
  }

  /// Minimum weight over the stabilizer coset p.S. For Sector::X (Z) only the
  /// pure X-type (Z-type) generators are used and only that component of p
  /// is considered.
  size_t coset_min_weight(const PauliOperator &p, Sector sector = Sector::FULL) const {
    return min_weight_representative(p, sector).weight(sector);
  }

  PauliOperator min_weight_representative(const PauliOperator &p, Sector sector = Sector::FULL) const {
    check_size(p);
    std::vector<const PauliOperator *> gens;
    for (size_t i = 0; i < generators_.size(); ++i) {
      if (sector == Sector::FULL || types_[i] == sector) gens.push_back(&generators_[i]);
    }
    if (gens.size() > 24) throw CodeError("stabilizer group too large for coset enumeration");
    PauliOperator cur = p.part(sector);
    PauliOperator best = cur;
    size_t best_w = cur.weight(sector);
    // Gray-code walk over all 2^m group elements.
    uint64_t total = uint64_t{1} << gens.size();
    for (uint64_t i = 1; i < total; ++i) {
      cur *= *gens[std::countr_zero(i)];
      size_t w = cur.weight(sector);
      if (w < best_w || (w == best_w && cur < best)) {
        best_w = w;
        best = cur;
      }
    }
    return best;
  }

  /// Canonical coset representative: elimination against a fixed basis of
  /// the stabilizer group, so equivalent operators map to the same value.
  PauliOperator canonical(const PauliOperator &p) const {
    return PauliOperator::from_symplectic(stab_basis_.residual(p.symplectic()));
  }

 private:
  friend StabilizerCode build_code(std::string, std::vector<PauliOperator>, std::vector<PauliOperator>,
                                   std::vector<PauliOperator>, std::vector<Plaquette>);
  StabilizerCode() : stab_basis_(0), full_basis_(0) {}

  void check_size(const PauliOperator &p) const {
    if (p.num_qubits() != n_) {
      throw std::invalid_argument("operator on " + std::to_string(p.num_qubits()) + " qubits used with code " + name_ +
                                  " on " + std::to_string(n_));
    }
  }

  std::string name_;
  size_t n_ = 0;
  std::vector<PauliOperator> generators_;
  std::vector<PauliOperator> logical_x_;
  std::vector<PauliOperator> logical_z_;
  std::vector<Plaquette> plaquettes_;
  std::vector<Sector> types_;
  bool experimental_ = false;
  gf2::Basis stab_basis_;
  gf2::Basis full_basis_;  // generators, then logical X, then logical Z
};

inline StabilizerCode build_code(std::string name, std::vector<PauliOperator> generators,
                                 std::vector<PauliOperator> logical_x, std::vector<PauliOperator> logical_z,
                                 std::vector<Plaquette> plaquettes) {
  if (generators.empty()) throw CodeError("code " + name + " has no generators");
  size_t n = generators[0].num_qubits();
  if (n == 0) throw CodeError("code " + name + " has zero qubits");
  auto check_len = [&](const PauliOperator &p, const std::string &what) {
    if (p.num_qubits() != n) throw CodeError(what + " has " + std::to_string(p.num_qubits()) + " qubits, expected " + std::to_string(n));
  };
  for (size_t i = 0; i < generators.size(); ++i) check_len(generators[i], "generator " + std::to_string(i + 1));
  for (auto &l : logical_x) check_len(l, "logical X");
  for (auto &l : logical_z) check_len(l, "logical Z");

  for (size_t i = 0; i < generators.size(); ++i) {
    for (size_t j = i + 1; j < generators.size(); ++j) {
      if (generators[i].anticommutes(generators[j])) {
        throw CodeError("generators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " do not commute");
      }
    }
  }
  StabilizerCode code;
  code.stab_basis_ = gf2::Basis(2 * n);
  for (size_t i = 0; i < generators.size(); ++i) {
    if (!code.stab_basis_.insert(generators[i].symplectic())) {
      throw CodeError("generator " + std::to_string(i + 1) + " is dependent on the preceding generators");
    }
  }
  size_t k = n - generators.size();
  if (logical_x.size() != k || logical_z.size() != k) {
    throw CodeError("expected " + std::to_string(k) + " logical X/Z pairs, got " + std::to_string(logical_x.size()) + "/" +
                    std::to_string(logical_z.size()));
  }
  auto check_comm = [&](const std::vector<PauliOperator> &ls, const std::string &what) {
    for (size_t i = 0; i < ls.size(); ++i) {
      for (size_t g = 0; g < generators.size(); ++g) {
        if (ls[i].anticommutes(generators[g])) {
          throw CodeError(what + std::to_string(i + 1) + " anticommutes with generator " + std::to_string(g + 1));
        }
      }
      for (size_t j = i + 1; j < ls.size(); ++j) {
        if (ls[i].anticommutes(ls[j])) {
          throw CodeError(what + std::to_string(i + 1) + " and " + what + std::to_string(j + 1) + " anticommute");
        }
      }
    }
  };
  check_comm(logical_x, "logical X");
  check_comm(logical_z, "logical Z");
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0; j < k; ++j) {
      bool anti = logical_x[i].anticommutes(logical_z[j]);
      if (anti != (i == j)) {
        throw CodeError("wrong logical pairing: logical X" + std::to_string(i + 1) + (anti ? " anticommutes" : " commutes") +
                        " with logical Z" + std::to_string(j + 1));
      }
    }
  }
  for (const auto &pl : plaquettes) {
    for (size_t q : pl.qubits) {
      if (q >= n) throw CodeError("plaquette qubit " + std::to_string(q + 1) + " out of range");
    }
  }

  code.name_ = std::move(name);
  code.n_ = n;
  code.full_basis_ = gf2::Basis(2 * n);
  for (const auto &g : generators) code.full_basis_.insert(g.symplectic());
  for (const auto &l : logical_x) code.full_basis_.insert(l.symplectic());
  for (const auto &l : logical_z) code.full_basis_.insert(l.symplectic());
  for (const auto &g : generators) {
    code.types_.push_back(g.z().none() ? Sector::X : g.x().none() ? Sector::Z : Sector::FULL);
  }
  code.generators_ = std::move(generators);
  code.logical_x_ = std::move(logical_x);
  code.logical_z_ = std::move(logical_z);
  code.plaquettes_ = std::move(plaquettes);
  return code;
}

/// Completes commuting, independent generators with a symplectic basis of
/// logical operators. CSS generator sets get pure X and pure Z logicals.
inline std::pair<std::vector<PauliOperator>, std::vector<PauliOperator>> complete_logicals(
    const std::vector<PauliOperator> &generators) {
  size_t n = generators.at(0).num_qubits();
  // Normalizer = {v : <v, g> = 0 for all g}; as a null space, swap x/z of
  // each generator so that the dot product is the symplectic form.
  std::vector<BitVec> rows;
  for (const auto &g : generators) rows.push_back(g.z().concat(g.x()));
  auto normalizer = gf2::null_space(rows, 2 * n);

  bool css = std::all_of(generators.begin(), generators.end(),
                         [](const PauliOperator &g) { return g.x().none() || g.z().none(); });

  gf2::Basis span(2 * n);
  for (const auto &g : generators) span.insert(g.symplectic());
  std::vector<PauliOperator> cands;
  if (css) {
    // Split the normalizer into pure-X and pure-Z parts.
    std::vector<BitVec> zrows, xrows;
    for (const auto &g : generators) {
      if (g.x().none()) zrows.push_back(g.z());
      else xrows.push_back(g.x());
    }
    for (auto &v : gf2::null_space(zrows, n)) cands.emplace_back(v, BitVec(n));
    for (auto &v : gf2::null_space(xrows, n)) cands.emplace_back(BitVec(n), v);
  } else {
    for (auto &v : normalizer) cands.push_back(PauliOperator::from_symplectic(v));
  }
  // Lower weight first, for readable logical operators.
  std::stable_sort(cands.begin(), cands.end(),
                   [](const PauliOperator &a, const PauliOperator &b) { return a.weight() < b.weight(); });

  std::vector<PauliOperator> lx, lz;
  std::vector<PauliOperator> pool;
  for (auto &c : cands) {
    if (span.insert(c.symplectic())) pool.push_back(c);
  }
  // Symplectic Gram-Schmidt over the pool (independent mod stabilizers).
  while (!pool.empty()) {
    size_t vi = pool.size();
    for (size_t i = 0; i < pool.size(); ++i) {
      if (!css || pool[i].z().none()) { vi = i; break; }
    }
    if (vi == pool.size()) throw CodeError("logical completion failed: no X-type candidate left");
    PauliOperator v = pool[vi];
    pool.erase(pool.begin() + static_cast<long>(vi));
    size_t wi = pool.size();
    for (size_t i = 0; i < pool.size(); ++i) {
      if (pool[i].anticommutes(v)) { wi = i; break; }
    }
    if (wi == pool.size()) throw CodeError("logical completion failed: no partner for " + v.sparse());
    PauliOperator w = pool[wi];
    pool.erase(pool.begin() + static_cast<long>(wi));
    for (auto &p : pool) {
      bool a = p.anticommutes(w);  // component along v
      bool b = p.anticommutes(v);  // component along w
      if (a) p *= v;
      if (b) p *= w;
    }
    lx.push_back(v);
    lz.push_back(w);
  }
  return {lx, lz};
}

struct CodeParameters {
  size_t n = 0;
  size_t k = 0;
  size_t d = 0;
  bool d_is_lower_bound = false;  // no logical found up to the search cap; d >= cap + 1
  std::string str() const {
    return "[[" + std::to_string(n) + "," + std::to_string(k) + "," + (d_is_lower_bound ? ">=" : "") + std::to_string(d) +
           "]]";
  }
};

/// n, k and the distance found by exhaustive search over Paulis of weight at
/// most max_search_weight. Throws if more than max_operators would be tried.
inline CodeParameters code_parameters(const StabilizerCode &code, size_t max_search_weight,
                                      uint64_t max_operators = 50'000'000) {
  if (max_search_weight < 1) throw std::invalid_argument("max_search_weight must be at least 1");
  size_t n = code.n();
  CodeParameters out{n, code.k(), 0, false};
  if (code.k() == 0) {
    out.d = 0;
    return out;
  }
  // Count operators before enumerating.
  uint64_t total = 0, binom = 1, pow3 = 1;
  for (size_t w = 1; w <= max_search_weight && w <= n; ++w) {
    binom = binom * (n - w + 1) / w;
    pow3 *= 3;
    total += binom * pow3;
    if (total > max_operators) {
      throw CodeError("distance search would enumerate more than " + std::to_string(max_operators) + " operators");
    }
  }
  // Syndrome contribution of single-qubit X and Z, used incrementally.
  std::vector<SyndromeVector> sx(n), sz(n);
  for (size_t q = 0; q < n; ++q) {
    sx[q] = code.syndrome_of(PauliOperator::on(n, 'X', {q}));
    sz[q] = code.syndrome_of(PauliOperator::on(n, 'Z', {q}));
  }
  for (size_t w = 1; w <= max_search_weight && w <= n; ++w) {
    std::vector<size_t> support(w);
    for (size_t i = 0; i < w; ++i) support[i] = i;
    while (true) {
      uint64_t combos = 1;
      for (size_t i = 0; i < w; ++i) combos *= 3;
      for (uint64_t c = 0; c < combos; ++c) {
        SyndromeVector s(code.num_generators());
        uint64_t t = c;
        PauliOperator p(n);
        for (size_t i = 0; i < w; ++i) {
          char l = "XYZ"[t % 3];
          t /= 3;
          if (l != 'Z') s ^= sx[support[i]];
          if (l != 'X') s ^= sz[support[i]];
          p.set(support[i], l);
        }
        if (s.none() && !code.in_stabilizer(p)) {
          out.d = w;
          return out;
        }
      }
      // Next combination.
      size_t i = w;
      while (i > 0 && support[i - 1] == n - w + i - 1) --i;
      if (i == 0) break;
      ++support[i - 1];
      for (size_t j = i; j < w; ++j) support[j] = support[j - 1] + 1;
    }
  }
  out.d = max_search_weight + 1;
  out.d_is_lower_bound = true;
  return out;
}

/// The [[n, n-2, 2]] single-plaquette code with stabilizers X^n and Z^n.
inline StabilizerCode erasure_code(size_t n) {
  if (n < 2 || n % 2) throw CodeError("erasure code needs an even block size, got " + std::to_string(n));
  std::vector<size_t> all(n);
  for (size_t q = 0; q < n; ++q) all[q] = q;
  std::vector<PauliOperator> gens{PauliOperator::on(n, 'X', all), PauliOperator::on(n, 'Z', all)};
  auto [lx, lz] = complete_logicals(gens);
  return build_code("erasure-" + std::to_string(n), gens, lx, lz, {Plaquette{"white", all}});
}

/// Direct sum of two codes on disjoint qubit blocks (first block first).
inline StabilizerCode direct_sum(const StabilizerCode &a, const StabilizerCode &b, std::string name = {}) {
  auto lift = [&](const std::vector<PauliOperator> &ops, bool first) {
    std::vector<PauliOperator> out;
    for (const auto &p : ops) {
      out.push_back(first ? p.tensor(PauliOperator(b.n())) : PauliOperator(a.n()).tensor(p));
    }
    return out;
  };
  auto gens = lift(a.generators(), true);
  for (auto &g : lift(b.generators(), false)) gens.push_back(g);
  auto lx = lift(a.logical_x(), true);
  for (auto &g : lift(b.logical_x(), false)) lx.push_back(g);
  auto lz = lift(a.logical_z(), true);
  for (auto &g : lift(b.logical_z(), false)) lz.push_back(g);
  std::vector<Plaquette> pls = a.plaquettes();
  for (auto pl : b.plaquettes()) {
    for (auto &q : pl.qubits) q += a.n();
    pls.push_back(pl);
  }
  return build_code(name.empty() ? a.name() + "+" + b.name() : std::move(name), gens, lx, lz, pls);
}

// ---------------------------------------------------------------------------
// Color-code merging.

/// Fuses plaquette `plaquette_a` of block `block_a` with plaquette
/// `plaquette_b` of block `block_b`. The corner qubits (each lying only in its
/// plaquette) are deleted and the remaining vertices form one plaquette.
struct MergeJoin {
  size_t block_a = 0;
  size_t plaquette_a = 0;
  size_t corner_a = 0;  // 0-based qubit within block_a
  size_t block_b = 0;
  size_t plaquette_b = 0;
  size_t corner_b = 0;
  std::string color;  // color of the fused plaquette; empty keeps block_a's
};

struct MergeSpec {
  std::string name;
  std::vector<StabilizerCode> blocks;
  std::vector<MergeJoin> joins;
};

/// Builds the merged color code: every plaquette (fused or not) contributes
/// one X and one Z generator. Logical operators come from complete_logicals.
inline StabilizerCode merge_codes(const MergeSpec &spec) {
  if (spec.blocks.empty()) throw CodeError("merge spec has no blocks");
  if (spec.joins.empty() && spec.blocks.size() == 1) return spec.blocks[0];
  for (const auto &b : spec.blocks) {
    if (b.plaquettes().empty()) throw CodeError("block " + b.name() + " has no plaquette data");
  }
  // Global indices before deletion.
  std::vector<size_t> offset;
  size_t total = 0;
  for (const auto &b : spec.blocks) {
    offset.push_back(total);
    total += b.n();
  }
  std::vector<bool> removed(total, false);
  std::vector<std::vector<bool>> plaquette_used(spec.blocks.size());
  for (size_t i = 0; i < spec.blocks.size(); ++i) plaquette_used[i].assign(spec.blocks[i].plaquettes().size(), false);

  auto check_corner = [&](size_t blk, size_t pl, size_t corner) {
    const auto &code = spec.blocks.at(blk);
    const auto &plaq = code.plaquettes().at(pl);
    if (std::find(plaq.qubits.begin(), plaq.qubits.end(), corner) == plaq.qubits.end()) {
      throw CodeError("corner qubit " + std::to_string(corner + 1) + " is not on the fused plaquette");
    }
    for (size_t j = 0; j < code.plaquettes().size(); ++j) {
      const auto &qs = code.plaquettes()[j].qubits;
      if (j != pl && std::find(qs.begin(), qs.end(), corner) != qs.end()) {
        throw CodeError("corner qubit " + std::to_string(corner + 1) + " lies on more than one plaquette");
      }
    }
    if (plaquette_used[blk][pl]) throw CodeError("plaquette fused twice");
    if (removed[offset[blk] + corner]) throw CodeError("corner qubit removed twice");
    plaquette_used[blk][pl] = true;
    removed[offset[blk] + corner] = true;
  };
  for (const auto &j : spec.joins) {
    check_corner(j.block_a, j.plaquette_a, j.corner_a);
    check_corner(j.block_b, j.plaquette_b, j.corner_b);
  }
  std::vector<size_t> new_index(total, SIZE_MAX);
  size_t n = 0;
  for (size_t g = 0; g < total; ++g) {
    if (!removed[g]) new_index[g] = n++;
  }
  std::vector<Plaquette> plaquettes;
  auto map_qubits = [&](size_t blk, const std::vector<size_t> &qs, std::vector<size_t> &out) {
    for (size_t q : qs) {
      size_t g = offset[blk] + q;
      if (!removed[g]) out.push_back(new_index[g]);
    }
  };
  for (size_t b = 0; b < spec.blocks.size(); ++b) {
    for (size_t p = 0; p < spec.blocks[b].plaquettes().size(); ++p) {
      if (plaquette_used[b][p]) continue;
      Plaquette pl{spec.blocks[b].plaquettes()[p].color, {}};
      map_qubits(b, spec.blocks[b].plaquettes()[p].qubits, pl.qubits);
      plaquettes.push_back(pl);
    }
  }
  for (const auto &j : spec.joins) {
    Plaquette pl{j.color.empty() ? spec.blocks[j.block_a].plaquettes()[j.plaquette_a].color : j.color, {}};
    map_qubits(j.block_a, spec.blocks[j.block_a].plaquettes()[j.plaquette_a].qubits, pl.qubits);
    map_qubits(j.block_b, spec.blocks[j.block_b].plaquettes()[j.plaquette_b].qubits, pl.qubits);
    std::sort(pl.qubits.begin(), pl.qubits.end());
    plaquettes.push_back(pl);
  }
  std::vector<PauliOperator> gens;
  for (const auto &pl : plaquettes) gens.push_back(PauliOperator::on(n, 'X', pl.qubits));
  for (const auto &pl : plaquettes) gens.push_back(PauliOperator::on(n, 'Z', pl.qubits));
  for (size_t i = 0; i < gens.size(); ++i) {
    for (size_t j = i + 1; j < gens.size(); ++j) {
      if (gens[i].anticommutes(gens[j])) {
        throw CodeError("fused plaquettes " + gens[i].sparse() + " and " + gens[j].sparse() + " do not commute");
      }
    }
  }
  if (gf2::rank([&] {
        std::vector<BitVec> r;
        for (auto &g : gens) r.push_back(g.symplectic());
        return r;
      }()) != gens.size()) {
    throw CodeError("fused plaquette generators are dependent");
  }
  auto [lx, lz] = complete_logicals(gens);
  return build_code(spec.name, gens, lx, lz, plaquettes);
}

// ---------------------------------------------------------------------------
// Line-oriented code file:
//   code <name> n=<n>
//   stab <pauli>
//   logicalX <pauli>
//   logicalZ <pauli>
//   plaquette <color> <1-based indices>
//   experimental
// Lines starting with '#' are comments. Missing logicals are completed.

inline StabilizerCode parse_code(std::istream &in, const std::string &source = "<code>") {
  std::string line, name;
  size_t n = 0;
  std::vector<PauliOperator> gens, lx, lz;
  std::vector<Plaquette> pls;
  bool experimental = false;
  size_t lineno = 0;
  auto fail = [&](const std::string &msg) { throw CodeError(source + ":" + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::stringstream ss(line);
    std::string kw;
    if (!(ss >> kw)) continue;
    std::string rest;
    std::getline(ss, rest);
    try {
      if (kw == "code") {
        std::stringstream rs(rest);
        std::string ntok;
        rs >> name >> ntok;
        if (ntok.rfind("n=", 0) != 0) fail("expected n=<qubits> after code name");
        n = std::stoul(ntok.substr(2));
      } else if (n == 0) {
        fail("'code <name> n=<n>' header must come first");
      } else if (kw == "stab") {
        gens.push_back(PauliOperator::parse(rest, n));
      } else if (kw == "logicalX") {
        lx.push_back(PauliOperator::parse(rest, n));
      } else if (kw == "logicalZ") {
        lz.push_back(PauliOperator::parse(rest, n));
      } else if (kw == "plaquette") {
        std::stringstream rs(rest);
        Plaquette pl;
        rs >> pl.color;
        size_t q;
        while (rs >> q) {
          if (q < 1 || q > n) fail("plaquette index out of range");
          pl.qubits.push_back(q - 1);
        }
        pls.push_back(pl);
      } else if (kw == "experimental") {
        experimental = true;
      } else {
        fail("unknown keyword '" + kw + "'");
      }
    } catch (const CodeError &) {
      throw;
    } catch (const std::exception &e) {
      fail(e.what());
    }
  }
  if (n == 0) throw CodeError(source + ": missing code header");
  if (lx.empty() && lz.empty() && gens.size() < n) {
    std::tie(lx, lz) = complete_logicals(gens);
  }
  auto code = build_code(name, gens, lx, lz, pls);
  code.set_experimental(experimental);
  return code;
}

inline StabilizerCode load_code(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open code file " + path);
  return parse_code(f, path);
}

/// Merge spec file:
///   merge <name>
///   block <code path>                       (paths relative to the spec)
///   join <block> <color> <block> <color>    (1-based blocks)
///   experimental
/// The corner of each fused plaquette is its unique qubit on no other
/// plaquette.
inline StabilizerCode load_merge(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open merge spec " + path);
  auto dir = std::filesystem::path(path).parent_path();
  MergeSpec spec;
  bool experimental = false;
  std::string line;
  size_t lineno = 0;
  auto fail = [&](const std::string &m) { throw CodeError(path + ":" + std::to_string(lineno) + ": " + m); };
  auto find_plaquette = [&](size_t blk, const std::string &color) {
    const auto &pls = spec.blocks.at(blk).plaquettes();
    for (size_t i = 0; i < pls.size(); ++i) {
      if (pls[i].color == color) return i;
    }
    fail("block " + std::to_string(blk + 1) + " has no " + color + " plaquette");
    return size_t{0};
  };
  auto find_corner = [&](size_t blk, size_t pl) {
    const auto &pls = spec.blocks[blk].plaquettes();
    for (size_t q : pls[pl].qubits) {
      size_t count = 0;
      for (const auto &other : pls) count += std::count(other.qubits.begin(), other.qubits.end(), q);
      if (count == 1) return q;
    }
    fail("plaquette has no corner qubit");
    return size_t{0};
  };
  while (std::getline(f, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::stringstream ss(line);
    std::string kw;
    if (!(ss >> kw)) continue;
    if (kw == "merge") {
      ss >> spec.name;
    } else if (kw == "block") {
      std::string p;
      ss >> p;
      spec.blocks.push_back(load_code((dir / p).string()));
    } else if (kw == "join") {
      size_t a, b;
      std::string ca, cb;
      if (!(ss >> a >> ca >> b >> cb) || a < 1 || b < 1 || a > spec.blocks.size() || b > spec.blocks.size()) {
        fail("expected: join <block> <color> <block> <color>");
      }
      MergeJoin j;
      j.block_a = a - 1;
      j.block_b = b - 1;
      j.plaquette_a = find_plaquette(j.block_a, ca);
      j.plaquette_b = find_plaquette(j.block_b, cb);
      j.corner_a = find_corner(j.block_a, j.plaquette_a);
      j.corner_b = find_corner(j.block_b, j.plaquette_b);
      ss >> j.color;
      spec.joins.push_back(j);
    } else if (kw == "experimental") {
      experimental = true;
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }
  auto code = merge_codes(spec);
  code.set_experimental(experimental);
  return code;
}

inline std::string render_code(const StabilizerCode &code) {
  std::ostringstream out;
  out << "code " << code.name() << " n=" << code.n() << "\n";
  if (code.experimental()) out << "experimental\n";
  for (const auto &g : code.generators()) out << "stab " << g.dense() << "\n";
  for (const auto &l : code.logical_x()) out << "logicalX " << l.dense() << "\n";
  for (const auto &l : code.logical_z()) out << "logicalZ " << l.dense() << "\n";
  for (const auto &pl : code.plaquettes()) {
    out << "plaquette " << pl.color;
    for (size_t q : pl.qubits) out << " " << q + 1;
    out << "\n";
  }
  return out.str();
}

}  // namespace ftqec

#endif  // FTQEC_CODE_HPP
