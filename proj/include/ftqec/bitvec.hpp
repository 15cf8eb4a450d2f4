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

#ifndef FTQEC_BITVEC_HPP
#define FTQEC_BITVEC_HPP

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ftqec {

/// Packed GF(2) vector. Bits past size() are always zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static BitVec from_string(std::string_view bits) {
    BitVec v(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i);
      } else if (bits[i] != '0') {
        throw std::invalid_argument("bit string may only contain 0 and 1: " + std::string(bits));
      }
    }
    return v;
  }

  size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool operator[](size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  bool get(size_t i) const { return (*this)[i]; }
  void set(size_t i, bool value = true) {
    uint64_t mask = uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  BitVec &operator^=(const BitVec &other) {
    check_size(other);
    for (size_t k = 0; k < words_.size(); ++k) {
      words_[k] ^= other.words_[k];
    }
    return *this;
  }
  BitVec &operator&=(const BitVec &other) {
    check_size(other);
    for (size_t k = 0; k < words_.size(); ++k) {
      words_[k] &= other.words_[k];
    }
    return *this;
  }
  BitVec &operator|=(const BitVec &other) {
    check_size(other);
    for (size_t k = 0; k < words_.size(); ++k) {
      words_[k] |= other.words_[k];
    }
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec &b) { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec &b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec &b) { return a |= b; }

  bool any() const {
    for (uint64_t w : words_) {
      if (w) return true;
    }
    return false;
  }
  bool none() const { return !any(); }
  size_t popcount() const {
    size_t c = 0;
    for (uint64_t w : words_) c += std::popcount(w);
    return c;
  }
  /// Parity of the bitwise AND.
  bool dot(const BitVec &other) const {
    check_size(other);
    uint64_t acc = 0;
    for (size_t k = 0; k < words_.size(); ++k) acc ^= words_[k] & other.words_[k];
    return std::popcount(acc) & 1;
  }

  /// Index of the lowest set bit, or size() when none.
  size_t first_one() const {
    for (size_t k = 0; k < words_.size(); ++k) {
      if (words_[k]) return k * 64 + std::countr_zero(words_[k]);
    }
    return n_;
  }

  std::vector<size_t> ones() const {
    std::vector<size_t> out;
    for (size_t k = 0; k < words_.size(); ++k) {
      uint64_t w = words_[k];
      while (w) {
        out.push_back(k * 64 + std::countr_zero(w));
        w &= w - 1;
      }
    }
    return out;
  }

  /// Concatenation, used for the symplectic x|z layout.
  BitVec concat(const BitVec &tail) const {
    BitVec out(n_ + tail.n_);
    for (size_t i : ones()) out.set(i);
    for (size_t i : tail.ones()) out.set(n_ + i);
    return out;
  }
  BitVec slice(size_t start, size_t len) const {
    BitVec out(len);
    for (size_t i = 0; i < len; ++i) {
      if (get(start + i)) out.set(i);
    }
    return out;
  }

  std::span<const uint64_t> words() const { return words_; }
  std::span<uint64_t> words() { return words_; }

  std::string str() const {
    std::string s(n_, '0');
    for (size_t i : ones()) s[i] = '1';
    return s;
  }

  bool operator==(const BitVec &other) const = default;
  std::strong_ordering operator<=>(const BitVec &other) const {
    if (auto c = n_ <=> other.n_; c != 0) return c;
    // Compare as bit strings, lowest index first.
    for (size_t i = 0; i < n_; ++i) {
      bool a = get(i), b = other.get(i);
      if (a != b) return a ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return std::strong_ordering::equal;
  }

  size_t hash() const {
    size_t h = n_ * 0x9E3779B97F4A7C15ull;
    for (uint64_t w : words_) {
      h ^= std::hash<uint64_t>{}(w) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  void check_size(const BitVec &other) const {
    if (other.n_ != n_) {
      throw std::invalid_argument("bit vector length mismatch: " + std::to_string(n_) + " vs " +
                                  std::to_string(other.n_));
    }
  }

  size_t n_ = 0;
  std::vector<uint64_t> words_;
};

struct BitVecHash {
  size_t operator()(const BitVec &v) const { return v.hash(); }
};

}  // namespace ftqec

#endif  // FTQEC_BITVEC_HPP
