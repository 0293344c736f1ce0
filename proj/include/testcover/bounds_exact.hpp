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

// Exhaustive solvers. These are the ground truth the reduction pipeline is
// checked against, so they favour plain enumeration over cleverness.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "testcover/core.hpp"
#include "testcover/errors.hpp"

namespace testcover {

struct ExactResult {
  std::size_t optimum = 0;
  std::vector<TestRef> witness;
};

/// ceil(log2 n): no test cover on n items is smaller.
inline std::size_t log_lower_bound(std::size_t n) {
  if (n == 0) throw std::invalid_argument("log_lower_bound: n must be positive");
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

namespace detail {

/// Saturating binomial sum: number of subcollections of size <= max_size.
inline std::uint64_t subsets_up_to(std::size_t m, std::size_t max_size) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t c = 1;  // C(m, s)
  for (std::size_t s = 0; s <= std::min(m, max_size); ++s) {
    if (total > kMax - c) return kMax;
    total += c;
    // C(m, s+1) = C(m, s) * (m - s) / (s + 1), computed without overflow.
    unsigned __int128 next = static_cast<unsigned __int128>(c) * (m - s) / (s + 1);
    c = next > kMax ? kMax : static_cast<std::uint64_t>(next);
  }
  return total;
}

/// Can `classes` classes reach `target` with `slots` more tests? Each test at
/// most doubles the class count.
inline bool reachable(std::size_t classes, std::size_t slots, std::size_t target) {
  if (slots >= 63) return true;
  unsigned __int128 best = static_cast<unsigned __int128>(classes) << slots;
  return best >= target;
}

/// Finds the lexicographically least s-subcollection whose induced class
/// count is at least target(s). First elements are dealt round-robin to the
/// workers; the winner is the smallest first element that succeeds, so the
/// answer does not depend on the worker count.
class SubsetSearch {
 public:
  SubsetSearch(const Instance& inst, const SolverConfig& cfg) : inst_(inst), cfg_(cfg) {}

  std::optional<std::vector<TestRef>> find(std::size_t s, std::size_t target) {
    const std::size_t m = inst_.m();
    if (s > m) return std::nullopt;
    if (s == 0) {
      if ((inst_.n() == 0 ? 0 : 1) >= target) return std::vector<TestRef>{};
      return std::nullopt;
    }
    if (target > inst_.n()) return std::nullopt;

    const std::size_t workers = std::max<std::size_t>(1, std::min(cfg_.workers, m - s + 1));
    std::atomic<std::size_t> best_first{std::numeric_limits<std::size_t>::max()};
    std::vector<std::optional<std::vector<TestRef>>> found(workers);
    std::vector<std::exception_ptr> errors(workers);

    auto run = [&](std::size_t w) {
      try {
        Worker worker(*this, s, target);
        for (std::size_t a = w; a + s <= m; a += workers) {
          if (a >= best_first.load()) break;
          if (auto hit = worker.search_from(a)) {
            found[w] = std::move(hit);
            std::size_t cur = best_first.load();
            while (a < cur && !best_first.compare_exchange_weak(cur, a)) {
            }
            break;
          }
        }
      } catch (...) {
        errors[w] = std::current_exception();
        best_first.store(0);
      }
    };

    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);

    std::optional<std::vector<TestRef>> best;
    for (auto& f : found) {
      if (f && (!best || *f < *best)) best = std::move(f);
    }
    return best;
  }

 private:
  class Worker {
   public:
    Worker(SubsetSearch& owner, std::size_t s, std::size_t target)
        : owner_(owner), s_(s), target_(target), stack_(s + 1, ClassLabels(owner.inst_.n())),
          chosen_(s) {}

    std::optional<std::vector<TestRef>> search_from(std::size_t first) {
      if (!step(0, first)) return std::nullopt;
      if (dfs(1, first + 1)) {
        std::vector<TestRef> out(s_);
        for (std::size_t d = 0; d < s_; ++d) out[d].index = chosen_[d];
        return out;
      }
      return std::nullopt;
    }

   private:
    // Adds test `a` at depth d; false if the branch is pruned.
    bool step(std::size_t d, std::size_t a) {
      if ((++nodes_ & 1023U) == 0) owner_.check_deadline();
      refiner_.refine(stack_[d], owner_.inst_.tests()[a], stack_[d + 1]);
      chosen_[d] = a;
      return reachable(stack_[d + 1].count, s_ - d - 1, target_);
    }

    bool dfs(std::size_t d, std::size_t start) {
      if (d == s_) return stack_[d].count >= target_;
      const std::size_t m = owner_.inst_.m();
      for (std::size_t a = start; a + (s_ - d) <= m; ++a) {
        if (step(d, a) && dfs(d + 1, a + 1)) return true;
      }
      return false;
    }

    SubsetSearch& owner_;
    std::size_t s_;
    std::size_t target_;
    std::vector<ClassLabels> stack_;
    std::vector<std::size_t> chosen_;
    Refiner refiner_;
    std::uint64_t nodes_ = 0;
  };

  void check_deadline() const {
    if (cfg_.deadline && std::chrono::steady_clock::now() > *cfg_.deadline) {
      throw TimeoutError("search exceeded its deadline");
    }
  }

  const Instance& inst_;
  const SolverConfig& cfg_;
};

inline void require_budget(std::size_t m, std::size_t max_size, const SolverConfig& cfg,
                           const char* what) {
  auto need = subsets_up_to(m, max_size);
  if (need > cfg.max_enumeration) {
    throw ResourceLimitError(std::string(what) + ": " + std::to_string(need) +
                             " subcollections exceed the enumeration cap of " +
                             std::to_string(cfg.max_enumeration));
  }
}

}  // namespace detail

/// Minimum test cover by size-ordered exhaustive search. The witness is the
/// lexicographically least optimal index set.
inline ExactResult min_test_cover_exact(const Instance& inst, const SolverConfig& cfg = {}) {
  require_validated(inst);
  if (inst.m() > cfg.cap_m) {
    throw ResourceLimitError("min_test_cover_exact: m=" + std::to_string(inst.m()) +
                             " exceeds cap " + std::to_string(cfg.cap_m));
  }
  detail::SubsetSearch search(inst, cfg);
  for (std::size_t s = log_lower_bound(inst.n()); s <= inst.m(); ++s) {
    if (auto hit = search.find(s, inst.n())) return ExactResult{s, std::move(*hit)};
  }
  throw InvariantViolation("validated instance has no test cover");
}

/// A subcollection of at most 2k tests inducing at least |F'| + k classes,
/// searched in (size, lexicographic) order. Absent when none exists.
inline std::optional<std::vector<TestRef>> find_k_mini_brute(const Instance& inst, std::size_t k,
                                                             const SolverConfig& cfg = {}) {
  require_validated(inst);
  if (k == 0) throw std::invalid_argument("find_k_mini_brute: k must be positive");
  const std::size_t max_size = std::min(inst.m(), 2 * k);
  detail::require_budget(inst.m(), max_size, cfg, "find_k_mini_brute");
  detail::SubsetSearch search(inst, cfg);
  for (std::size_t s = 0; s <= max_size; ++s) {
    if (s + k > inst.n()) break;
    if (auto hit = search.find(s, s + k)) return hit;
  }
  return std::nullopt;
}

/// Is there a test cover with at most k tests? Answers NO outright below
/// ceil(log2 n), otherwise enumerates subcollections of size <= k.
inline bool decide_k_param(const Instance& inst, std::size_t k, const SolverConfig& cfg = {}) {
  require_validated(inst);
  const std::size_t lower = log_lower_bound(inst.n());
  if (k < lower) return false;
  const std::size_t max_size = std::min(inst.m(), k);
  detail::require_budget(inst.m(), max_size, cfg, "decide_k_param");
  detail::SubsetSearch search(inst, cfg);
  for (std::size_t s = lower; s <= max_size; ++s) {
    if (search.find(s, inst.n())) return true;
  }
  return false;
}

/// Is there a test cover with at most n - k tests? Decided through the exact
/// optimum.
inline bool decide_nk_brute(const Instance& inst, std::size_t k, const SolverConfig& cfg = {}) {
  if (k == 0) throw std::invalid_argument("decide_nk_brute: k must be positive");
  auto result = min_test_cover_exact(inst, cfg);
  return k <= inst.n() && result.optimum <= inst.n() - k;
}

}  // namespace testcover
