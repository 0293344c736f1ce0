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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "testcover/core.hpp"
#include "testcover/errors.hpp"

namespace testcover {

/// Simple undirected graph on vertices 1..p. Edges are stored as (u, v) with
/// u < v, in input order.
class Graph {
 public:
  Graph() = default;

  /// Rejects self-loops, out-of-range endpoints and repeated edges.
  Graph(std::size_t p, std::vector<std::pair<std::size_t, std::size_t>> edges) : p_(p) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [u, v] : edges) {
      if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
      if (u == 0 || v == 0 || u > p || v > p) {
        throw std::invalid_argument("edge endpoint out of range");
      }
      auto e = std::minmax(u, v);
      if (!seen.insert(e).second) {
        throw std::invalid_argument("duplicate edge " + std::to_string(e.first) + "-" +
                                    std::to_string(e.second));
      }
      edges_.emplace_back(e.first, e.second);
    }
  }

  std::size_t p() const { return p_; }
  std::size_t q() const { return edges_.size(); }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

 private:
  std::size_t p_ = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

/// Where each test of an independent-set reduction came from.
struct TestOrigin {
  enum class Kind { kVertex, kEdgePair };
  Kind kind;
  /// Vertex j for kVertex, edge i for kEdgePair (both 1-based).
  std::size_t index;
};

struct IsToTcMapping {
  std::size_t p = 0;
  std::size_t q = 0;
  /// q - 1 + p: the test count of the construction before any omission.
  std::size_t nominal_tests = 0;
  /// Item e_i is item i and e'_i is item q + i.
  std::vector<std::string> item_labels;
  std::vector<TestOrigin> test_origin;
  /// Isolated vertices; their vertex test would be empty.
  std::vector<std::size_t> omitted_vertices;
  /// (kept vertex, dropped vertex) when two vertex tests coincide. This only
  /// happens for the endpoints of an edge forming its own component.
  std::vector<std::pair<std::size_t, std::size_t>> merged_twins;
};

struct IsToTcResult {
  Instance instance;
  IsToTcMapping mapping;
};

/// Builds the Test Cover instance whose minimum is q - 1 + (minimum vertex
/// cover of g). Items are e_1..e_q, e'_1..e'_q; tests are the edge sets
/// incident to each vertex plus {e_i, e'_i} for i < q.
inline IsToTcResult is_to_tc(const Graph& g) {
  const std::size_t q = g.q();
  if (q < 2) throw std::invalid_argument("is_to_tc: the graph needs at least two edges");
  const std::size_t n = 2 * q;

  IsToTcResult out;
  auto& map = out.mapping;
  map.p = g.p();
  map.q = q;
  map.nominal_tests = q - 1 + g.p();
  for (std::size_t i = 1; i <= q; ++i) map.item_labels.push_back("e" + std::to_string(i));
  for (std::size_t i = 1; i <= q; ++i) map.item_labels.push_back("e" + std::to_string(i) + "'");

  std::vector<ItemSet> tests;
  std::unordered_map<ItemSet, std::size_t, ItemSetHash> owner;
  for (std::size_t j = 1; j <= g.p(); ++j) {
    ItemSet t(n);
    for (std::size_t i = 0; i < q; ++i) {
      auto [u, v] = g.edges()[i];
      if (u == j || v == j) t.insert(i);
    }
    if (t.empty()) {
      map.omitted_vertices.push_back(j);
      continue;
    }
    auto [it, fresh] = owner.emplace(t, j);
    if (!fresh) {
      map.merged_twins.emplace_back(it->second, j);
      continue;
    }
    tests.push_back(std::move(t));
    map.test_origin.push_back({TestOrigin::Kind::kVertex, j});
  }
  for (std::size_t i = 0; i + 1 < q; ++i) {
    ItemSet t(n);
    t.insert(i);
    t.insert(q + i);
    tests.push_back(std::move(t));
    map.test_origin.push_back({TestOrigin::Kind::kEdgePair, i + 1});
  }
  out.instance = Instance(n, std::move(tests));
  if (!out.instance.validated()) {
    throw InvariantViolation("is_to_tc produced an invalid instance:\n" +
                             out.instance.report().summary());
  }
  return out;
}

/// Exact minimum vertex cover by enumeration of vertex subsets.
inline std::size_t min_vertex_cover_exact(const Graph& g, std::size_t cap_p = 20) {
  if (g.p() > cap_p) {
    throw ResourceLimitError("min_vertex_cover_exact: p=" + std::to_string(g.p()) +
                             " exceeds cap " + std::to_string(cap_p));
  }
  std::size_t best = g.p();
  const std::uint64_t limit = std::uint64_t{1} << g.p();
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size >= best) continue;
    bool covers = true;
    for (auto [u, v] : g.edges()) {
      if (!((mask >> (u - 1)) & 1U) && !((mask >> (v - 1)) & 1U)) {
        covers = false;
        break;
      }
    }
    if (covers) best = size;
  }
  return best;
}

/// A covering family over ground elements 0..ground_size-1.
struct SetCoverInstance {
  std::size_t ground_size = 0;
  /// Each set lists ascending element indices.
  std::vector<std::vector<std::size_t>> sets;
  /// Optional printable names, one per ground element.
  std::vector<std::string> labels;
};

/// The Set Cover instance on item pairs: set q holds the pairs test q
/// separates. Pairs (i, j), i < j, are indexed in lexicographic order.
inline SetCoverInstance tc_to_sc(const Instance& inst) {
  require_validated(inst);
  const std::size_t n = inst.n();
  SetCoverInstance sc;
  sc.ground_size = n * (n - 1) / 2;
  sc.labels.reserve(sc.ground_size);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j)
      sc.labels.push_back(std::to_string(i) + "-" + std::to_string(j));
  for (const auto& t : inst.tests()) {
    std::vector<std::size_t> set;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++idx)
        if (t.has(i) != t.has(j)) set.push_back(idx);
    sc.sets.push_back(std::move(set));
  }
  return sc;
}

/// Index of the ground element for the 1-based item pair i < j.
inline std::size_t pair_index(std::size_t n, Item i, Item j) {
  if (i >= j || j > n || i == 0) throw std::invalid_argument("pair_index: need 1 <= i < j <= n");
  // Pairs starting below i occupy sum_{a < i} (n - a) slots.
  return (i - 1) * n - (i - 1) * i / 2 + (j - i - 1);
}

/// Greedy set cover: take the set covering the most uncovered elements, ties
/// to the lowest index, until the ground set is covered.
inline std::vector<std::size_t> greedy_set_cover(const SetCoverInstance& sc) {
  std::vector<char> covered(sc.ground_size, 0);
  std::size_t remaining = sc.ground_size;
  {
    std::vector<char> reach(sc.ground_size, 0);
    for (const auto& s : sc.sets)
      for (auto e : s) {
        if (e >= sc.ground_size) throw std::invalid_argument("set element outside the ground set");
        reach[e] = 1;
      }
    if (std::count(reach.begin(), reach.end(), 1) != static_cast<std::ptrdiff_t>(sc.ground_size)) {
      throw std::invalid_argument("greedy_set_cover: the sets do not cover the ground set");
    }
  }
  std::vector<std::size_t> chosen;
  std::vector<char> used(sc.sets.size(), 0);
  while (remaining > 0) {
    std::size_t best = sc.sets.size();
    std::size_t best_gain = 0;
    for (std::size_t s = 0; s < sc.sets.size(); ++s) {
      if (used[s]) continue;
      std::size_t gain = 0;
      for (auto e : sc.sets[s]) gain += covered[e] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = s;
      }
    }
    used[best] = 1;
    chosen.push_back(best);
    for (auto e : sc.sets[best]) {
      if (!covered[e]) {
        covered[e] = 1;
        --remaining;
      }
    }
  }
  return chosen;
}

}  // namespace testcover
