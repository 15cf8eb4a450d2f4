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

#ifndef FTQEC_DECODER_HPP
#define FTQEC_DECODER_HPP

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftqec/code.hpp"
#include "ftqec/verify.hpp"

namespace ftqec {

/// Syndrome (and flag) to correction tables. A table has one part per
/// error component: X and Z for CSS codes, FULL otherwise. Each part keeps
/// exact (flags, syndrome) entries and a minimum-weight default indexed by
/// syndrome alone.
class DecodeTable {
 public:
  struct Part {
    Sector sector = Sector::FULL;
    BitVec flag_mask;
    BitVec syndrome_mask;
    std::vector<size_t> syndrome_bits;  // positions of syndrome_mask
    std::map<std::pair<BitVec, BitVec>, PauliOperator> entries;
    std::vector<PauliOperator> fallback;  // by packed syndrome index

    size_t index(const BitVec &syndrome) const {
      size_t idx = 0;
      for (size_t i = 0; i < syndrome_bits.size(); ++i) idx |= size_t{syndrome[syndrome_bits[i]]} << i;
      return idx;
    }
  };

  size_t n = 0;
  size_t num_generators = 0;
  size_t num_flags = 0;
  std::vector<Part> parts;

  /// Exact key lookup per part, else the minimum-weight default.
  PauliOperator decode(const BitVec &flags, const BitVec &syndrome) const {
    if (syndrome.size() != num_generators) throw std::invalid_argument("syndrome length differs from the table");
    if (flags.size() != num_flags) throw std::invalid_argument("flag vector length differs from the table");
    PauliOperator c(n);
    for (const auto &p : parts) {
      BitVec f = flags & p.flag_mask;
      BitVec s = syndrome & p.syndrome_mask;
      auto it = p.entries.find({f, s});
      c *= it != p.entries.end() ? it->second : p.fallback[p.index(syndrome)];
    }
    return c;
  }
};

inline PauliOperator decode(const DecodeTable &t, const BitVec &flags, const BitVec &syndrome) {
  return t.decode(flags, syndrome);
}

namespace detail {

/// Fills part.fallback with the first Pauli found for every syndrome,
/// enumerating by weight, then qubit subsets in lexicographic order, then
/// letters in the order X, Z, Y.
inline void fill_min_weight(DecodeTable::Part &part, const StabilizerCode &code) {
  size_t m = part.syndrome_bits.size();
  if (m > 24) throw std::invalid_argument("too many syndrome bits for a materialized table");
  size_t total = size_t{1} << m;
  part.fallback.assign(total, PauliOperator(code.n()));
  std::vector<bool> done(total, false);
  done[0] = true;
  size_t filled = 1;
  std::vector<char> letters = part.sector == Sector::X ? std::vector<char>{'X'}
                              : part.sector == Sector::Z ? std::vector<char>{'Z'}
                                                         : std::vector<char>{'X', 'Z', 'Y'};
  size_t n = code.n();
  for (size_t w = 1; w <= n && filled < total; ++w) {
    std::vector<size_t> idx(w);
    for (size_t i = 0; i < w; ++i) idx[i] = i;
    while (true) {
      std::vector<size_t> choice(w, 0);
      while (true) {
        PauliOperator p(n);
        for (size_t i = 0; i < w; ++i) p.set(idx[i], letters[choice[i]]);
        size_t s = part.index(code.syndrome_of(p));
        if (!done[s]) {
          done[s] = true;
          part.fallback[s] = p;
          ++filled;
        }
        size_t k = w;
        while (k > 0 && ++choice[k - 1] == letters.size()) choice[--k] = 0;
        if (k == 0) break;
      }
      if (filled == total) break;
      size_t k = w;
      while (k > 0 && idx[k - 1] == n - w + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (size_t i = k; i < w; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  if (filled < total) throw std::logic_error("some syndromes are unreachable");
}

inline DecodeTable empty_table(const StabilizerCode &code, const std::vector<BitVec> &flag_masks, size_t num_flags) {
  DecodeTable t;
  t.n = code.n();
  t.num_generators = code.num_generators();
  t.num_flags = num_flags;
  std::vector<Sector> sectors = code.is_css() ? std::vector<Sector>{Sector::X, Sector::Z} : std::vector<Sector>{Sector::FULL};
  if (!flag_masks.empty() && flag_masks.size() != sectors.size()) {
    // Verdicts run in all-sector mode on a CSS code use one FULL part.
    sectors = {Sector::FULL};
  }
  for (size_t i = 0; i < sectors.size(); ++i) {
    DecodeTable::Part p;
    p.sector = sectors[i];
    Sector seen_by = sectors[i] == Sector::X ? Sector::Z : sectors[i] == Sector::Z ? Sector::X : Sector::FULL;
    p.syndrome_mask = generator_mask(code, seen_by);
    p.syndrome_bits = p.syndrome_mask.ones();
    p.flag_mask = flag_masks.empty() ? BitVec(num_flags) : flag_masks[i];
    fill_min_weight(p, code);
    t.parts.push_back(std::move(p));
  }
  return t;
}

}  // namespace detail

/// Flag-free minimum-weight table.
inline DecodeTable build_lookup(const StabilizerCode &code) { return detail::empty_table(code, {}, 0); }

/// Table from a passing verdict: flag-conditioned keys map to the enumerated
/// residual class; everything else falls back to build_lookup.
inline DecodeTable build_flag_table(const VerdictReport &verdict, const StabilizerCode &code) {
  if (!verdict.pass) throw std::invalid_argument("refusing to build a decode table from a failed verdict");
  size_t num_flags = verdict.flag_masks.empty() ? 0 : verdict.flag_masks[0].size();
  auto t = detail::empty_table(code, verdict.flag_masks, num_flags);
  for (const auto &e : verdict.table) {
    for (auto &p : t.parts) {
      if (p.sector == e.part) p.entries[{e.flags, e.syndrome}] = e.correction;
    }
  }
  return t;
}

/// Table keyed on syndrome alone whose entries are the members of an
/// invariant set (members must have distinct syndromes).
inline DecodeTable build_invariant_table(const InvariantSet &set, const StabilizerCode &code2) {
  auto t = detail::empty_table(code2, {}, 0);
  for (auto &[label, e] : set.errors) {
    for (auto &p : t.parts) {
      PauliOperator comp = e.part(p.sector);
      if (comp.is_identity() && !e.is_identity()) continue;
      BitVec s = code2.syndrome_of(comp) & p.syndrome_mask;
      auto [it, fresh] = p.entries.emplace(std::make_pair(BitVec(0), s), comp);
      if (!fresh && !code2.stabilizer_equivalent(it->second, comp)) {
        throw std::invalid_argument("invariant members share a syndrome: " + label);
      }
    }
  }
  return t;
}

/// Sorted TSV: part, flags, syndrome, correction (dense). Default entries
/// are written with flags "-".
inline std::string export_table(const DecodeTable &t) {
  std::ostringstream out;
  out << "# n=" << t.n << " generators=" << t.num_generators << " flags=" << t.num_flags << "\n";
  out << "part\tflags\tsyndrome\tcorrection\n";
  auto name = [](Sector s) { return s == Sector::X ? "X" : s == Sector::Z ? "Z" : "FULL"; };
  for (const auto &p : t.parts) {
    out << "# part " << name(p.sector) << " flag_mask " << p.flag_mask.str() << "\n";
    for (size_t s = 0; s < p.fallback.size(); ++s) {
      BitVec syn(t.num_generators);
      for (size_t i = 0; i < p.syndrome_bits.size(); ++i) {
        if ((s >> i) & 1) syn.set(p.syndrome_bits[i]);
      }
      out << name(p.sector) << "\t-\t" << syn.str() << "\t" << p.fallback[s].dense() << "\n";
    }
    for (const auto &[key, c] : p.entries) {
      out << name(p.sector) << "\t" << (key.first.empty() ? "" : key.first.str()) << "\t" << key.second.str() << "\t"
          << c.dense() << "\n";
    }
  }
  return out.str();
}

/// Reads entries written by export_table back into a table built for the
/// same code (defaults are recomputed and checked against the file).
inline DecodeTable import_table(std::istream &in, const StabilizerCode &code) {
  std::string line;
  size_t num_flags = 0;
  std::vector<BitVec> masks;
  struct Row {
    std::string part, flags, syn, corr;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.rfind("# n=", 0) == 0) {
      auto at = line.find("flags=");
      num_flags = std::stoul(line.substr(at + 6));
      continue;
    }
    if (line.rfind("# part", 0) == 0) {
      std::stringstream ss(line.substr(6));
      std::string name, kw, mask;
      ss >> name >> kw >> mask;
      masks.push_back(BitVec::from_string(mask));
      continue;
    }
    if (line.empty() || line[0] == '#' || line.rfind("part\t", 0) == 0) continue;
    std::stringstream ss(line);
    Row r;
    std::getline(ss, r.part, '\t');
    std::getline(ss, r.flags, '\t');
    std::getline(ss, r.syn, '\t');
    std::getline(ss, r.corr, '\t');
    rows.push_back(r);
  }
  bool any_flags = false;
  for (auto &m : masks) any_flags |= m.size() > 0;
  auto t = detail::empty_table(code, any_flags ? masks : std::vector<BitVec>{}, num_flags);
  for (const auto &r : rows) {
    Sector s = r.part == "X" ? Sector::X : r.part == "Z" ? Sector::Z : Sector::FULL;
    for (auto &p : t.parts) {
      if (p.sector != s) continue;
      auto syn = BitVec::from_string(r.syn);
      auto corr = PauliOperator::parse(r.corr, code.n());
      if (r.flags == "-") {
        if (p.fallback[p.index(syn)] != corr) throw std::invalid_argument("default entry differs: " + r.syn);
      } else {
        p.entries[{BitVec::from_string(r.flags), syn}] = corr;
      }
    }
  }
  return t;
}

}  // namespace ftqec

#endif  // FTQEC_DECODER_HPP
