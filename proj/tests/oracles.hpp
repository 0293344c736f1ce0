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

// Brute-force reference implementations over plain bitmasks. Nothing here
// calls into the library except the converters at the bottom, so the
// library's answers can be checked against them.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "testcover/core.hpp"
#include "testcover/reductions.hpp"

namespace oracle {

using Mask = std::uint32_t;

/// Tests as masks over items 0..n-1.
struct Raw {
  int n = 0;
  std::vector<Mask> tests;
};

/// Number of classes induced by the tests picked by `sel` (bit t = test t):
/// items are equivalent iff they have the same membership vector.
inline int classes(const Raw& r, std::uint64_t sel) {
  std::set<std::uint64_t> seen;
  for (int i = 0; i < r.n; ++i) {
    std::uint64_t sig = 0;
    for (std::size_t t = 0; t < r.tests.size(); ++t) {
      if ((sel >> t) & 1U) sig |= static_cast<std::uint64_t>((r.tests[t] >> i) & 1U) << t;
    }
    seen.insert(sig);
  }
  return static_cast<int>(seen.size());
}

/// Pairwise check: every pair i<j separated by some selected test.
inline bool separates_all(const Raw& r, std::uint64_t sel) {
  for (int i = 0; i < r.n; ++i) {
    for (int j = i + 1; j < r.n; ++j) {
      bool hit = false;
      for (std::size_t t = 0; t < r.tests.size() && !hit; ++t) {
        if (((sel >> t) & 1U) && (((r.tests[t] >> i) ^ (r.tests[t] >> j)) & 1U)) hit = true;
      }
      if (!hit) return false;
    }
  }
  return true;
}

inline std::uint64_t all_sel(const Raw& r) { return (std::uint64_t{1} << r.tests.size()) - 1; }

/// Minimum test cover size over all 2^m subcollections, -1 if none.
inline int min_cover(const Raw& r) {
  int best = -1;
  for (std::uint64_t sel = 0; sel <= all_sel(r); ++sel) {
    int s = std::popcount(sel);
    if (best >= 0 && s >= best) continue;
    if (separates_all(r, sel)) best = s;
  }
  return best;
}

/// Sorted index lists of every minimum cover, least first.
inline std::vector<std::size_t> least_min_cover(const Raw& r) {
  int best = min_cover(r);
  std::vector<std::size_t> out;
  bool have = false;
  for (std::uint64_t sel = 0; sel <= all_sel(r); ++sel) {
    if (std::popcount(sel) != best || !separates_all(r, sel)) continue;
    std::vector<std::size_t> idx;
    for (std::size_t t = 0; t < r.tests.size(); ++t)
      if ((sel >> t) & 1U) idx.push_back(t);
    if (!have || idx < out) out = idx;
    have = true;
  }
  return out;
}

/// Is there F' with |F'| <= 2k inducing >= |F'| + k classes?
inline bool has_k_mini(const Raw& r, int k) {
  for (std::uint64_t sel = 0; sel <= all_sel(r); ++sel) {
    int s = std::popcount(sel);
    if (s <= 2 * k && classes(r, sel) >= s + k) return true;
  }
  return false;
}

/// Minimum set cover by enumeration; sets are masks over the ground set.
inline int min_set_cover(int ground, const std::vector<std::uint64_t>& sets) {
  const std::uint64_t full = ground == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << ground) - 1;
  int best = -1;
  for (std::uint64_t sel = 0; sel < (std::uint64_t{1} << sets.size()); ++sel) {
    int s = std::popcount(sel);
    if (best >= 0 && s >= best) continue;
    std::uint64_t cov = 0;
    for (std::size_t i = 0; i < sets.size(); ++i)
      if ((sel >> i) & 1U) cov |= sets[i];
    if (cov == full) best = s;
  }
  return best;
}

/// Independence number by enumeration of vertex subsets (vertices 0-based).
inline int alpha(int p, const std::vector<std::pair<int, int>>& edges) {
  int best = 0;
  for (Mask s = 0; s < (Mask{1} << p); ++s) {
    bool ok = true;
    for (auto [u, v] : edges)
      if (((s >> u) & 1U) && ((s >> v) & 1U)) ok = false;
    if (ok) best = std::max(best, std::popcount(s));
  }
  return best;
}

inline int min_vertex_cover(int p, const std::vector<std::pair<int, int>>& edges) { return p - alpha(p, edges); }

/// Calls f(tests) for every set of distinct nonempty masks over [n] with
/// at most max_m members (as ascending mask lists).
inline void for_each_collection(int n, int max_m, const std::function<void(const std::vector<Mask>&)>& f) {
  const Mask limit = Mask{1} << n;
  std::vector<Mask> cur;
  std::function<void(Mask)> rec = [&](Mask start) {
    f(cur);
    if (static_cast<int>(cur.size()) == max_m) return;
    for (Mask s = start; s < limit; ++s) {
      cur.push_back(s);
      rec(s + 1);
      cur.pop_back();
    }
  };
  rec(1);
}

/// Random distinct nonempty tests, each item in with probability 1/2.
inline Raw random_raw(std::mt19937_64& rng, int n, int m) {
  Raw r;
  r.n = n;
  std::set<Mask> seen;
  const Mask limit = Mask{1} << n;
  m = std::min<int>(m, static_cast<int>(limit - 1));
  while (static_cast<int>(r.tests.size()) < m) {
    Mask s = static_cast<Mask>(rng() % limit);
    if (s != 0 && seen.insert(s).second) r.tests.push_back(s);
  }
  return r;
}

/// Appends singletons {i} (in item order) until the collection separates
/// every pair.
inline void close_to_cover(Raw& r) {
  for (int i = 0; i < r.n && !separates_all(r, all_sel(r)); ++i) {
    Mask s = Mask{1} << i;
    if (std::find(r.tests.begin(), r.tests.end(), s) == r.tests.end()) r.tests.push_back(s);
  }
}

// Converters.

inline testcover::Instance to_instance(const Raw& r) {
  std::vector<testcover::ItemSet> tests;
  for (Mask m : r.tests) {
    testcover::ItemSet s(r.n);
    for (int i = 0; i < r.n; ++i)
      if ((m >> i) & 1U) s.insert(i);
    tests.push_back(std::move(s));
  }
  return testcover::Instance(r.n, std::move(tests));
}

inline Raw from_instance(const testcover::Instance& inst) {
  Raw r;
  r.n = static_cast<int>(inst.n());
  for (const auto& t : inst.tests()) {
    Mask m = 0;
    for (auto i : t.items()) m |= Mask{1} << (i - 1);
    r.tests.push_back(m);
  }
  return r;
}

inline std::uint64_t to_sel(const std::vector<testcover::TestRef>& refs) {
  std::uint64_t sel = 0;
  for (auto r : refs) sel |= std::uint64_t{1} << r.index;
  return sel;
}

}  // namespace oracle
