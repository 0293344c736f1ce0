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

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "testcover/item_set.hpp"

namespace testcover {

/// Position of a test inside an Instance.
struct TestRef {
  std::size_t index = 0;
  friend auto operator<=>(const TestRef&, const TestRef&) = default;
};

/// Disjoint nonempty classes covering [n], ordered by smallest member.
struct Partition {
  std::vector<ItemSet> classes;

  std::size_t size() const { return classes.size(); }
  friend bool operator==(const Partition&, const Partition&) = default;
};

struct ValidationReport {
  std::size_t n = 0;
  /// (earlier index, later index) pairs of identical tests.
  std::vector<std::pair<std::size_t, std::size_t>> duplicates;
  /// (test index, offending item).
  std::vector<std::pair<std::size_t, Item>> out_of_range;
  std::vector<std::size_t> empty_tests;
  bool test_cover = false;

  bool ok() const {
    return n >= 1 && duplicates.empty() && out_of_range.empty() &&
           empty_tests.empty() && test_cover;
  }

  std::string summary() const {
    std::string s;
    if (n == 0) s += "item count must be positive\n";
    for (auto [a, b] : duplicates)
      s += "duplicate test: " + std::to_string(b + 1) + " repeats " + std::to_string(a + 1) + "\n";
    for (auto [t, i] : out_of_range)
      s += "test " + std::to_string(t + 1) + ": item " + std::to_string(i) + " out of range\n";
    for (auto t : empty_tests) s += "test " + std::to_string(t + 1) + " is empty\n";
    s += test_cover ? "collection is a test cover\n" : "collection is not a test cover\n";
    return s;
  }
};

namespace detail {

/// Per-item class labels of an induced partition. Labels are assigned in
/// order of first appearance, so label order equals smallest-member order.
struct ClassLabels {
  std::vector<std::uint32_t> label;
  std::size_t count = 0;

  explicit ClassLabels(std::size_t n = 0) : label(n, 0), count(n == 0 ? 0 : 1) {}
};

/// Splits every class of `in` by `test`, writing the result to `out`.
class Refiner {
 public:
  void refine(const ClassLabels& in, const ItemSet& test, ClassLabels& out) {
    const std::size_t n = in.label.size();
    remap_.assign(2 * in.count, kUnset);
    out.label.resize(n);
    std::uint32_t next = 0;
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t key = 2 * std::size_t{in.label[p]} + (test.has(p) ? 1 : 0);
      if (remap_[key] == kUnset) remap_[key] = next++;
      out.label[p] = remap_[key];
    }
    out.count = next;
  }

 private:
  static constexpr std::uint32_t kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> remap_;
};

inline Partition to_partition(const ClassLabels& labels) {
  const std::size_t n = labels.label.size();
  Partition part;
  part.classes.assign(labels.count, ItemSet(n));
  for (std::size_t p = 0; p < n; ++p) part.classes[labels.label[p]].insert(p);
  return part;
}

}  // namespace detail

/// A Test Cover instance: items 1..n and a sequence of tests.
///
/// Construction never rejects duplicate or empty tests; it records them in
/// the validation report instead. Solvers require validated() to be true.
class Instance {
 public:
  Instance() = default;

  /// Every test must be a set over the universe n.
  Instance(std::size_t n, std::vector<ItemSet> tests) : n_(n), tests_(std::move(tests)) {
    for (const auto& t : tests_) {
      if (t.universe() != n_) throw std::invalid_argument("test universe differs from n");
    }
    report_ = compute_report();
  }

  /// Builds from 1-based item lists; out-of-range items throw
  /// std::invalid_argument (use validate() on raw lists to collect them).
  static Instance from_lists(std::size_t n, const std::vector<std::vector<Item>>& lists) {
    std::vector<ItemSet> tests;
    tests.reserve(lists.size());
    for (const auto& l : lists) tests.push_back(ItemSet::from_items(n, l));
    return Instance(n, std::move(tests));
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return tests_.size(); }
  const std::vector<ItemSet>& tests() const { return tests_; }
  const ItemSet& test(TestRef r) const { return tests_.at(r.index); }
  const ValidationReport& report() const { return report_; }
  bool validated() const { return report_.ok(); }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.n_ == b.n_ && a.tests_ == b.tests_;
  }

 private:
  ValidationReport compute_report() const {
    ValidationReport r;
    r.n = n_;
    std::unordered_map<ItemSet, std::size_t, ItemSetHash> seen;
    for (std::size_t i = 0; i < tests_.size(); ++i) {
      if (tests_[i].empty()) r.empty_tests.push_back(i);
      auto [it, fresh] = seen.emplace(tests_[i], i);
      if (!fresh) r.duplicates.emplace_back(it->second, i);
    }
    detail::ClassLabels cur(n_), nxt;
    detail::Refiner refiner;
    for (const auto& t : tests_) {
      refiner.refine(cur, t, nxt);
      std::swap(cur, nxt);
    }
    r.test_cover = cur.count == n_;
    return r;
  }

  std::size_t n_ = 0;
  std::vector<ItemSet> tests_;
  ValidationReport report_;
};

/// Checks raw 1-based item lists, including items an Instance cannot hold.
inline ValidationReport validate(std::size_t n, const std::vector<std::vector<Item>>& lists) {
  std::vector<ItemSet> tests;
  std::vector<std::pair<std::size_t, Item>> bad;
  for (std::size_t t = 0; t < lists.size(); ++t) {
    ItemSet s(n);
    for (Item i : lists[t]) {
      if (i == 0 || i > n) {
        bad.emplace_back(t, i);
      } else {
        s.insert(i - 1);
      }
    }
    tests.push_back(std::move(s));
  }
  ValidationReport r = Instance(n, std::move(tests)).report();
  r.out_of_range = std::move(bad);
  return r;
}

inline const ValidationReport& validate(const Instance& inst) { return inst.report(); }

inline void require_validated(const Instance& inst) {
  if (!inst.validated()) {
    throw std::invalid_argument("instance is not a validated test cover:\n" + inst.report().summary());
  }
}

/// True iff exactly one of the 1-based items i, j lies in the test.
inline bool separates(const ItemSet& test, Item i, Item j) {
  const std::size_t n = test.universe();
  if (i == j) throw std::invalid_argument("separates: items must differ");
  if (i == 0 || j == 0 || i > n || j > n) throw std::invalid_argument("separates: item out of range");
  return test.has(i - 1) != test.has(j - 1);
}

inline void check_refs(const Instance& inst, std::span<const TestRef> sub) {
  for (auto r : sub) {
    if (r.index >= inst.m()) throw std::invalid_argument("test reference out of range");
  }
}

/// Classes of items left unseparated by every test of `sub`.
inline Partition induced_partition(const Instance& inst, std::span<const TestRef> sub) {
  check_refs(inst, sub);
  detail::ClassLabels cur(inst.n()), nxt;
  detail::Refiner refiner;
  for (auto r : sub) {
    refiner.refine(cur, inst.test(r), nxt);
    std::swap(cur, nxt);
  }
  return detail::to_partition(cur);
}

inline std::size_t class_count(const Instance& inst, std::span<const TestRef> sub) {
  check_refs(inst, sub);
  detail::ClassLabels cur(inst.n()), nxt;
  detail::Refiner refiner;
  for (auto r : sub) {
    refiner.refine(cur, inst.test(r), nxt);
    std::swap(cur, nxt);
  }
  return cur.count;
}

inline bool is_test_cover(const Instance& inst, std::span<const TestRef> sub) {
  return class_count(inst, sub) == inst.n();
}

inline std::vector<TestRef> all_tests(const Instance& inst) {
  std::vector<TestRef> refs(inst.m());
  for (std::size_t i = 0; i < refs.size(); ++i) refs[i].index = i;
  return refs;
}

struct SingletonClosure {
  Instance instance;
  /// index_map[old] is the position of the old test in the closed instance.
  std::vector<TestRef> index_map;
  std::size_t added = 0;
};

/// Appends every missing singleton {i} after the original tests.
inline SingletonClosure add_all_singletons(const Instance& inst) {
  std::vector<ItemSet> tests = inst.tests();
  std::vector<bool> present(inst.n(), false);
  for (const auto& t : tests) {
    if (t.count() == 1) present[t.first()] = true;
  }
  SingletonClosure out;
  for (std::size_t p = 0; p < inst.n(); ++p) {
    if (present[p]) continue;
    ItemSet s(inst.n());
    s.insert(p);
    tests.push_back(std::move(s));
    ++out.added;
  }
  out.index_map = all_tests(inst);
  out.instance = Instance(inst.n(), std::move(tests));
  return out;
}

/// [n] \ test. Separates exactly the pairs `test` separates.
inline ItemSet complement_test(std::size_t n, const ItemSet& test) {
  if (test.universe() != n) throw std::invalid_argument("complement_test: universe mismatch");
  if (test.empty() || test.is_full()) {
    throw std::invalid_argument("complement_test: test must be a nonempty proper subset of [n]");
  }
  return test.complement();
}

}  // namespace testcover
