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
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "testcover/core.hpp"
#include "testcover/errors.hpp"
#include "testcover/reductions.hpp"

namespace testcover {

/// Terminal state of the mini-test greedy.
struct GreedyState {
  /// Chosen tests in insertion order.
  std::vector<TestRef> F;
  Partition classes;
  /// True when the run stopped because |F| reached 2k - 2.
  bool saturated = false;
  std::size_t k = 0;
};

/// A step that would raise the class count induced by the current family.
struct ImprovingStep {
  std::vector<TestRef> tests;
  std::size_t gain = 0;
};

namespace detail {

/// Evaluates class-count gains of one or two extra tests on top of a fixed
/// family.
class GainScanner {
 public:
  GainScanner(const Instance& inst, std::span<const TestRef> family)
      : inst_(inst), in_family_(inst.m(), 0), base_(inst.n()), one_(inst.n()), two_(inst.n()) {
    ClassLabels tmp(inst.n());
    for (auto r : family) {
      in_family_.at(r.index) = 1;
      refiner_.refine(base_, inst.test(r), tmp);
      std::swap(base_, tmp);
    }
  }

  std::size_t base_count() const { return base_.count; }
  bool in_family(std::size_t idx) const { return in_family_[idx] != 0; }

  std::optional<ImprovingStep> first_pair(std::size_t min_gain) {
    const std::size_t m = inst_.m();
    for (std::size_t a = 0; a < m; ++a) {
      if (in_family(a)) continue;
      refiner_.refine(base_, inst_.tests()[a], one_);
      // A second test at most doubles the count.
      if (2 * one_.count < base_.count + min_gain) continue;
      for (std::size_t b = a + 1; b < m; ++b) {
        if (in_family(b)) continue;
        refiner_.refine(one_, inst_.tests()[b], two_);
        if (two_.count >= base_.count + min_gain) {
          return ImprovingStep{{TestRef{a}, TestRef{b}}, two_.count - base_.count};
        }
      }
    }
    return std::nullopt;
  }

  std::optional<ImprovingStep> first_single(std::size_t min_gain) {
    for (std::size_t a = 0; a < inst_.m(); ++a) {
      if (in_family(a)) continue;
      refiner_.refine(base_, inst_.tests()[a], one_);
      if (one_.count >= base_.count + min_gain) {
        return ImprovingStep{{TestRef{a}}, one_.count - base_.count};
      }
    }
    return std::nullopt;
  }

 private:
  const Instance& inst_;
  std::vector<char> in_family_;
  ClassLabels base_, one_, two_;
  Refiner refiner_;
};

}  // namespace detail

/// First pair of tests outside `family` (lexicographic) that raises the class
/// count by at least min_gain.
inline std::optional<ImprovingStep> first_improving_pair(const Instance& inst,
                                                         std::span<const TestRef> family,
                                                         std::size_t min_gain = 3) {
  check_refs(inst, family);
  return detail::GainScanner(inst, family).first_pair(min_gain);
}

inline std::optional<ImprovingStep> first_improving_single(const Instance& inst,
                                                           std::span<const TestRef> family,
                                                           std::size_t min_gain = 2) {
  check_refs(inst, family);
  return detail::GainScanner(inst, family).first_single(min_gain);
}

/// Greedy-mini-test. Before every step the run stops (saturated) once
/// |F| >= 2k - 2; otherwise it takes the first pair adding at least three
/// classes, else the first single test adding at least two, else it stops
/// unsaturated. Pairs are tried before singles and both are scanned in
/// lexicographic index order.
inline GreedyState greedy_mini_test(const Instance& inst, std::size_t k) {
  require_validated(inst);
  if (k == 0) throw std::invalid_argument("greedy_mini_test: k must be positive");
  GreedyState st;
  st.k = k;
  while (true) {
    if (st.F.size() + 2 >= 2 * k) {
      st.saturated = true;
      break;
    }
    detail::GainScanner scan(inst, st.F);
    auto step = scan.first_pair(3);
    if (!step) step = scan.first_single(2);
    if (!step) break;
    st.F.insert(st.F.end(), step->tests.begin(), step->tests.end());
  }
  st.classes = induced_partition(inst, st.F);
  return st;
}

/// Extends F one class-splitting test at a time until it is a test cover.
///
/// Each round looks at the first class (by smallest member) with two or more
/// items. In singletons-only mode the added test is {i} for the smallest item
/// i of that class; otherwise it is the lowest-index test outside the family
/// that splits the class. If F induced at least |F| + k classes the result
/// has at most n - k tests.
inline std::vector<TestRef> extend_partial_to_cover(const Instance& inst,
                                                    std::span<const TestRef> F,
                                                    bool singletons_only) {
  require_validated(inst);
  check_refs(inst, F);
  std::vector<TestRef> out(F.begin(), F.end());
  std::vector<char> used(inst.m(), 0);
  for (auto r : F) used[r.index] = 1;

  std::vector<std::size_t> singleton_of(inst.n(), inst.m());
  for (std::size_t t = 0; t < inst.m(); ++t) {
    if (inst.tests()[t].count() == 1) singleton_of[inst.tests()[t].first()] = t;
  }

  detail::ClassLabels cur(inst.n()), nxt;
  detail::Refiner refiner;
  for (auto r : F) {
    refiner.refine(cur, inst.test(r), nxt);
    std::swap(cur, nxt);
  }
  while (cur.count < inst.n()) {
    // Labels are numbered by smallest member, so the first label seen twice
    // belongs to the first multi-item class; its first occurrence is its
    // smallest item.
    std::vector<std::size_t> first_at(cur.count, inst.n());
    std::size_t target = cur.count;
    for (std::size_t p = 0; p < inst.n() && target == cur.count; ++p) {
      auto l = cur.label[p];
      if (first_at[l] == inst.n()) {
        first_at[l] = p;
      } else {
        target = l;
      }
    }
    const std::size_t anchor = first_at[target];
    std::size_t pick = inst.m();
    if (singletons_only) {
      pick = singleton_of[anchor];
      if (pick == inst.m()) {
        throw std::invalid_argument("extend_partial_to_cover: singleton {" +
                                    std::to_string(anchor + 1) + "} missing");
      }
    } else {
      for (std::size_t t = 0; t < inst.m() && pick == inst.m(); ++t) {
        if (used[t]) continue;
        const auto& test = inst.tests()[t];
        bool in = false, out_ = false;
        for (std::size_t p = 0; p < inst.n(); ++p) {
          if (cur.label[p] != target) continue;
          (test.has(p) ? in : out_) = true;
        }
        if (in && out_) pick = t;
      }
      if (pick == inst.m()) {
        throw InvariantViolation("extend_partial_to_cover: no test splits a remaining class");
      }
    }
    used[pick] = 1;
    out.push_back(TestRef{pick});
    refiner.refine(cur, inst.tests()[pick], nxt);
    std::swap(cur, nxt);
  }
  return out;
}

/// Greedy approximation: repeatedly take the test separating the most
/// still-unseparated pairs, ties to the lowest index. Runs greedy set cover
/// on the pair-separation instance.
inline std::vector<TestRef> greedy_setcover_approx(const Instance& inst) {
  auto picks = greedy_set_cover(tc_to_sc(inst));
  std::vector<TestRef> out;
  out.reserve(picks.size());
  for (auto p : picks) out.push_back(TestRef{p});
  return out;
}

}  // namespace testcover
