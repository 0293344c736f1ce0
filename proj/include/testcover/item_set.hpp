// Copyright 2026 The testcover Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace testcover {

/// Items are numbered 1..n at every external boundary.
using Item = std::size_t;

/// A subset of a fixed universe of n items, stored as a packed bitmask.
///
/// Positions are 0-based (position p holds item p + 1). The universe size is
/// part of the value: two sets over different universes never compare equal.
/// Ordering is lexicographic on the ascending item lists, so {1,2} < {1,3} <
/// {2} and a proper prefix sorts first ({1} < {1,2}).
class ItemSet {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ItemSet() = default;
  explicit ItemSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  /// Builds a set from 1-based items. Throws std::invalid_argument when an
  /// item falls outside [1, universe].
  static ItemSet from_items(std::size_t universe, std::span<const Item> items) {
    ItemSet s(universe);
    for (Item i : items) {
      if (i == 0 || i > universe) {
        throw std::invalid_argument("item " + std::to_string(i) +
                                    " outside [1," + std::to_string(universe) +
                                    "]");
      }
      s.insert(i - 1);
    }
    return s;
  }
  static ItemSet from_items(std::size_t universe,
                            std::initializer_list<Item> items) {
    return from_items(universe, std::span<const Item>(items.begin(), items.size()));
  }

  static ItemSet full(std::size_t universe) {
    ItemSet s(universe);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    return s;
  }

  std::size_t universe() const { return universe_; }

  bool has(std::size_t pos) const {
    return (words_[pos >> 6] >> (pos & 63)) & 1U;
  }
  void insert(std::size_t pos) { words_[pos >> 6] |= std::uint64_t{1} << (pos & 63); }
  void erase(std::size_t pos) { words_[pos >> 6] &= ~(std::uint64_t{1} << (pos & 63)); }

  bool contains_item(Item i) const { return i >= 1 && i <= universe_ && has(i - 1); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    for (auto w : words_)
      if (w != 0) return false;
    return true;
  }
  bool is_full() const { return count() == universe_; }

  /// Lowest position >= from, or npos.
  std::size_t next(std::size_t from) const {
    if (from >= universe_) return npos;
    std::size_t wi = from >> 6;
    std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (w != 0) return (wi << 6) + static_cast<std::size_t>(std::countr_zero(w));
      if (++wi == words_.size()) return npos;
      w = words_[wi];
    }
  }
  std::size_t first() const { return next(0); }

  ItemSet complement() const {
    ItemSet s(*this);
    for (auto& w : s.words_) w = ~w;
    s.trim();
    return s;
  }

  ItemSet& operator&=(const ItemSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  ItemSet& operator|=(const ItemSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  ItemSet& operator^=(const ItemSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  /// Set difference.
  ItemSet& operator-=(const ItemSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend ItemSet operator&(ItemSet a, const ItemSet& b) { return a &= b; }
  friend ItemSet operator|(ItemSet a, const ItemSet& b) { return a |= b; }
  friend ItemSet operator^(ItemSet a, const ItemSet& b) { return a ^= b; }
  friend ItemSet operator-(ItemSet a, const ItemSet& b) { return a -= b; }

  bool is_subset_of(const ItemSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool is_proper_subset_of(const ItemSet& o) const {
    return is_subset_of(o) && *this != o;
  }
  bool intersects(const ItemSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  std::size_t intersection_count(const ItemSet& o) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }

  /// Ascending 1-based items.
  std::vector<Item> items() const {
    std::vector<Item> out;
    out.reserve(count());
    for (auto p = first(); p != npos; p = next(p + 1)) out.push_back(p + 1);
    return out;
  }

  /// "{1,3,4}"
  std::string to_string() const {
    std::string s = "{";
    bool sep = false;
    for (auto p = first(); p != npos; p = next(p + 1)) {
      if (sep) s += ',';
      s += std::to_string(p + 1);
      sep = true;
    }
    return s + "}";
  }

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const ItemSet& a, const ItemSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

  friend std::strong_ordering operator<=>(const ItemSet& a, const ItemSet& b) {
    if (a.universe_ != b.universe_) return a.universe_ <=> b.universe_;
    // The first point of difference between the two sorted item lists is the
    // lowest element d of the symmetric difference. The set holding d is
    // smaller iff the other set still has some element past d; otherwise the
    // other set is a proper prefix.
    for (std::size_t wi = 0; wi < a.words_.size(); ++wi) {
      std::uint64_t diff = a.words_[wi] ^ b.words_[wi];
      if (diff == 0) continue;
      std::size_t d = (wi << 6) + static_cast<std::size_t>(std::countr_zero(diff));
      const ItemSet& holder = a.has(d) ? a : b;
      const ItemSet& other = a.has(d) ? b : a;
      bool holder_smaller = other.next(d + 1) != npos;
      bool a_smaller = (&holder == &a) == holder_smaller;
      return a_smaller ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  }

 private:
  void trim() {
    if (universe_ & 63) words_.back() &= (std::uint64_t{1} << (universe_ & 63)) - 1;
  }

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ItemSetHash {
  std::size_t operator()(const ItemSet& s) const noexcept {
    std::size_t h = std::hash<std::size_t>{}(s.universe());
    for (auto w : s.words()) h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace testcover
