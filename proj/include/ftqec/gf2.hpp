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

#ifndef FTQEC_GF2_HPP
#define FTQEC_GF2_HPP

#include <optional>
#include <vector>

#include "ftqec/bitvec.hpp"

namespace ftqec::gf2 {

/// Incrementally built row-echelon basis over GF(2).
///
/// Each stored row remembers which inserted vectors it is a combination of,
/// so reduce() can report the coefficients that express a vector in the span.
class Basis {
 public:
  explicit Basis(size_t width) : width_(width) {}

  size_t width() const { return width_; }
  size_t rank() const { return rows_.size(); }
  size_t inserted() const { return inserted_; }

  /// Inserts v; returns false if v was already in the span.
  bool insert(const BitVec &v) {
    size_t id = inserted_++;
    for (auto &r : rows_) r.combo = grow(r.combo);
    BitVec combo(inserted_);
    combo.set(id);
    BitVec w = v;
    for (const auto &r : rows_) {
      if (w[r.pivot]) {
        w ^= r.vec;
        combo ^= r.combo;
      }
    }
    size_t p = w.first_one();
    if (p >= width_) return false;
    // Keep the basis fully reduced so pivot columns are unique.
    for (auto &r : rows_) {
      if (r.vec[p]) {
        r.vec ^= w;
        r.combo ^= combo;
      }
    }
    rows_.push_back({std::move(w), std::move(combo), p});
    return true;
  }

  /// Residual of v after elimination (zero iff v is in the span).
  BitVec residual(const BitVec &v) const {
    BitVec w = v;
    for (const auto &r : rows_) {
      if (w[r.pivot]) w ^= r.vec;
    }
    return w;
  }

  bool contains(const BitVec &v) const { return residual(v).none(); }

  /// Coefficients over the inserted vectors that sum to v, if v is in the span.
  std::optional<BitVec> solve(const BitVec &v) const {
    BitVec w = v;
    BitVec combo(inserted_);
    for (const auto &r : rows_) {
      if (w[r.pivot]) {
        w ^= r.vec;
        combo ^= r.combo;
      }
    }
    if (w.any()) return std::nullopt;
    return combo;
  }

 private:
  struct Row {
    BitVec vec;
    BitVec combo;
    size_t pivot;
  };
  BitVec grow(const BitVec &c) const {
    BitVec out(inserted_);
    for (size_t i : c.ones()) out.set(i);
    return out;
  }

  size_t width_;
  size_t inserted_ = 0;
  std::vector<Row> rows_;
};

inline size_t rank(const std::vector<BitVec> &rows) {
  if (rows.empty()) return 0;
  Basis b(rows[0].size());
  for (const auto &r : rows) b.insert(r);
  return b.rank();
}

/// Vectors in the null space of the given rows (rows * v = 0), as a basis.
inline std::vector<BitVec> null_space(const std::vector<BitVec> &rows, size_t width) {
  // Gaussian elimination to reduced row echelon form.
  std::vector<BitVec> m = rows;
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < width && r < m.size(); ++c) {
    size_t sel = r;
    while (sel < m.size() && !m[sel][c]) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[r], m[sel]);
    for (size_t i = 0; i < m.size(); ++i) {
      if (i != r && m[i][c]) m[i] ^= m[r];
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(width, false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<BitVec> out;
  for (size_t f = 0; f < width; ++f) {
    if (is_pivot[f]) continue;
    BitVec v(width);
    v.set(f);
    for (size_t i = 0; i < pivots.size(); ++i) {
      if (m[i][f]) v.set(pivots[i]);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace ftqec::gf2

#endif  // FTQEC_GF2_HPP
