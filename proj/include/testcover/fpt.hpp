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

// Kernelization for "is there a test cover with at most n - k tests".
//
// The pipeline closes the instance under singletons, runs the mini-test
// greedy, and when the greedy neither saturates nor already yields a k-mini
// test cover it works on the classes C_1..C_l that the greedy family F
// induces. Every test outside F splits at most one class. Within a class C,
// the local portions S & C of the tests splitting C form a laminar family
// once every portion larger than |C|/2 is replaced by its complement; their
// containment order is an out-tree rooted at C. Two rules shrink the
// instance without changing the answer:
//
//  * path rule: a root-to-leaf path with 32k vertices sharing one signature
//    loses every test whose local portion is the 16k-th of them;
//  * sibling rule: a vertex with 2k+2 pairwise strongly isomorphic child
//    subtrees loses one of those subtrees, its tests and its items.
//
// What remains is decided by exhaustive k-mini search.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "testcover/bounds_exact.hpp"
#include "testcover/core.hpp"
#include "testcover/errors.hpp"
#include "testcover/greedy.hpp"

namespace testcover {

/// Global portions S \ C of all tests whose local portion is a given set.
struct Signature {
  /// Sorted, pairwise distinct.
  std::vector<ItemSet> globals;
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct TreeVertex {
  ItemSet portion;
  std::size_t parent = ItemSet::npos;
  /// Sorted by portion.
  std::vector<std::size_t> children;
  Signature signature;
  /// The signature with every global portion written as the set of classes it
  /// covers, so it survives renumbering of items outside the class.
  std::string signature_code;
};

/// Containment out-tree of the distinct local portions of one class.
struct ClassTree {
  static constexpr std::size_t kRoot = 0;

  std::size_t class_index = 0;
  /// vertices[kRoot] is the class itself; a parent always precedes its
  /// children.
  std::vector<TreeVertex> vertices;

  std::optional<std::size_t> find(const ItemSet& portion) const {
    for (std::size_t v = 0; v < vertices.size(); ++v)
      if (vertices[v].portion == portion) return v;
    return std::nullopt;
  }

  bool is_leaf(std::size_t v) const { return vertices[v].children.empty(); }

  /// Arcs on a longest root-to-leaf path.
  std::size_t depth() const {
    std::vector<std::size_t> level(vertices.size(), 0);
    std::size_t best = 0;
    for (std::size_t v = 1; v < vertices.size(); ++v) {
      level[v] = level[vertices[v].parent] + 1;
      best = std::max(best, level[v]);
    }
    return best;
  }
};

/// Audit record for one normalization collision or rule firing.
struct RuleTrace {
  /// "path", "sibling" or "complement-collision".
  std::string rule;
  std::size_t class_index = 0;
  /// Test positions in the instance the step was applied to.
  std::vector<TestRef> deleted_tests;
  /// 1-based items, numbered as before the step.
  std::vector<Item> deleted_items;
  std::string trigger;
  /// For item deletions: item_map[old - 1] is the new item, 0 if deleted.
  std::vector<Item> item_map;
};

/// `RULE <name> class=<i> tests=[...] items=[...]`, all numbers 1-based.
inline std::string format_trace(const RuleTrace& t) {
  std::string s = "RULE " + t.rule + " class=" + std::to_string(t.class_index + 1) + " tests=[";
  for (std::size_t i = 0; i < t.deleted_tests.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t.deleted_tests[i].index + 1);
  }
  s += "] items=[";
  for (std::size_t i = 0; i < t.deleted_items.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t.deleted_items[i]);
  }
  return s + "]";
}

/// Working state of the kernelization.
struct FptState {
  /// Singleton-closed; after normalization every local portion is at most
  /// half of its class.
  Instance inst;
  std::size_t k = 0;
  GreedyState greedy;
  /// class_of[p] is the index in greedy.classes of the class holding p.
  std::vector<std::size_t> class_of;
  /// The class each test splits, if any. Tests of F never split a class.
  std::vector<std::optional<std::size_t>> split_class;
  /// origin[t] is the position of test t in the instance the state was built
  /// from.
  std::vector<std::size_t> origin;
  /// One tree per class with at least two items, by ascending class index.
  std::vector<ClassTree> trees;
  std::vector<RuleTrace> log;
  bool normalized = false;

  const ClassTree& tree_for(std::size_t class_index) const {
    for (const auto& t : trees)
      if (t.class_index == class_index) return t;
    throw std::invalid_argument("no tree for class " + std::to_string(class_index + 1));
  }
};

namespace detail {

inline std::string class_set_code(const FptState& st, std::size_t own_class, const ItemSet& global) {
  const auto& classes = st.greedy.classes.classes;
  std::set<std::size_t> ids;
  for (auto p = global.first(); p != ItemSet::npos; p = global.next(p + 1)) {
    std::size_t c = st.class_of[p];
    if (c == own_class) throw InvariantViolation("global portion meets its own class");
    ids.insert(c);
  }
  for (auto c : ids) {
    if (!classes[c].is_subset_of(global)) {
      throw InvariantViolation("global portion splits class " + std::to_string(c + 1));
    }
  }
  std::string s = "{";
  for (auto c : ids) {
    if (s.size() > 1) s += ',';
    s += std::to_string(c + 1);
  }
  return s + "}";
}

inline std::string signature_code(const FptState& st, std::size_t own_class, const Signature& sig) {
  std::vector<std::string> parts;
  parts.reserve(sig.globals.size());
  for (const auto& g : sig.globals) parts.push_back(class_set_code(st, own_class, g));
  std::sort(parts.begin(), parts.end());
  std::string s = "[";
  for (const auto& p : parts) s += p;
  return s + "]";
}

inline bool is_singleton_closed(const Instance& inst) {
  std::vector<char> seen(inst.n(), 0);
  for (const auto& t : inst.tests())
    if (t.count() == 1) seen[t.first()] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace detail

/// Builds an unnormalized state (no trees) around a given family F.
///
/// The instance must be validated and singleton-closed. F must be terminal
/// for the greedy: no single test outside F adds two classes and no pair adds
/// three. Every later structural guarantee rests on that, so it is checked.
inline FptState make_state(Instance inst, std::size_t k, std::vector<TestRef> F) {
  require_validated(inst);
  if (k == 0) throw std::invalid_argument("make_state: k must be positive");
  if (!detail::is_singleton_closed(inst)) {
    throw std::invalid_argument("make_state: instance must contain every singleton");
  }
  check_refs(inst, F);
  if (auto step = first_improving_pair(inst, F, 3)) {
    throw InvariantViolation("family is not terminal: a pair adds " + std::to_string(step->gain) +
                             " classes");
  }
  if (auto step = first_improving_single(inst, F, 2)) {
    throw InvariantViolation("family is not terminal: a test adds " + std::to_string(step->gain) +
                             " classes");
  }

  FptState st;
  st.k = k;
  st.greedy.k = k;
  st.greedy.F = std::move(F);
  st.greedy.classes = induced_partition(inst, st.greedy.F);
  st.greedy.saturated = st.greedy.F.size() + 2 >= 2 * k;
  st.class_of.assign(inst.n(), 0);
  const auto& classes = st.greedy.classes.classes;
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (auto p = classes[c].first(); p != ItemSet::npos; p = classes[c].next(p + 1)) st.class_of[p] = c;

  st.split_class.assign(inst.m(), std::nullopt);
  for (std::size_t t = 0; t < inst.m(); ++t) {
    const auto& test = inst.tests()[t];
    for (std::size_t c = 0; c < classes.size(); ++c) {
      std::size_t inside = test.intersection_count(classes[c]);
      if (inside == 0 || inside == classes[c].count()) continue;
      if (st.split_class[t]) {
        throw InvariantViolation("test " + std::to_string(t + 1) + " splits two classes");
      }
      st.split_class[t] = c;
    }
  }
  st.origin.resize(inst.m());
  for (std::size_t t = 0; t < inst.m(); ++t) st.origin[t] = t;
  st.inst = std::move(inst);
  return st;
}

/// Replaces every test whose local portion exceeds half its class by its
/// complement. A complement that is already a test makes the original
/// redundant; it is dropped and the collision logged.
inline FptState normalize_locals(const FptState& st) {
  const std::size_t n = st.inst.n();
  const auto& classes = st.greedy.classes.classes;
  std::vector<ItemSet> tests = st.inst.tests();
  std::unordered_set<ItemSet, ItemSetHash> present(tests.begin(), tests.end());
  std::vector<char> drop(tests.size(), 0);
  std::vector<RuleTrace> log = st.log;

  for (std::size_t t = 0; t < tests.size(); ++t) {
    if (!st.split_class[t]) continue;
    const std::size_t c = *st.split_class[t];
    if (2 * tests[t].intersection_count(classes[c]) <= classes[c].count()) continue;
    ItemSet comp = complement_test(n, tests[t]);
    if (present.count(comp)) {
      drop[t] = 1;
      RuleTrace tr;
      tr.rule = "complement-collision";
      tr.class_index = c;
      tr.deleted_tests.push_back(TestRef{t});
      tr.trigger = "complement of " + tests[t].to_string() + " already present";
      log.push_back(std::move(tr));
      continue;
    }
    present.erase(tests[t]);
    present.insert(comp);
    tests[t] = std::move(comp);
  }

  std::vector<std::size_t> new_index(tests.size(), ItemSet::npos);
  std::vector<ItemSet> kept;
  std::vector<std::size_t> origin;
  for (std::size_t t = 0; t < tests.size(); ++t) {
    if (drop[t]) continue;
    new_index[t] = kept.size();
    kept.push_back(std::move(tests[t]));
    origin.push_back(st.origin[t]);
  }
  std::vector<TestRef> F;
  for (auto r : st.greedy.F) {
    if (new_index[r.index] == ItemSet::npos) throw InvariantViolation("normalization dropped a test of F");
    F.push_back(TestRef{new_index[r.index]});
  }
  FptState out = make_state(Instance(n, std::move(kept)), st.k, std::move(F));
  out.origin = std::move(origin);
  out.log = std::move(log);
  out.normalized = true;
  return out;
}

/// Signature of a local portion of class i.
inline Signature signature_of(const FptState& st, std::size_t class_index, const ItemSet& portion) {
  const auto& tree = st.tree_for(class_index);
  if (!tree.find(portion)) {
    throw std::invalid_argument("signature_of: " + portion.to_string() + " is not a tree vertex");
  }
  const ItemSet& cls = st.greedy.classes.classes[class_index];
  Signature sig;
  for (const auto& t : st.inst.tests()) {
    if ((t & cls) == portion) sig.globals.push_back(t - cls);
  }
  std::sort(sig.globals.begin(), sig.globals.end());
  return sig;
}

/// Out-tree over the distinct local portions of the tests splitting class i,
/// rooted at the class itself. Fails loudly on any violation of laminarity,
/// of out-degree at least two, or of "leaves are exactly the singletons".
inline ClassTree build_class_tree(const FptState& st, std::size_t class_index) {
  if (!st.normalized) throw std::invalid_argument("build_class_tree: state is not normalized");
  const auto& classes = st.greedy.classes.classes;
  if (class_index >= classes.size()) throw std::invalid_argument("build_class_tree: no such class");
  const ItemSet& cls = classes[class_index];
  if (cls.count() < 2) throw std::invalid_argument("build_class_tree: class has a single item");

  std::map<ItemSet, std::vector<ItemSet>> by_portion;
  for (std::size_t t = 0; t < st.inst.m(); ++t) {
    if (st.split_class[t] != class_index) continue;
    const auto& test = st.inst.tests()[t];
    ItemSet local = test & cls;
    if (2 * local.count() > cls.count()) {
      throw InvariantViolation("local portion " + local.to_string() + " exceeds half its class");
    }
    by_portion[local].push_back(test - cls);
  }

  std::vector<ItemSet> portions;
  for (const auto& [p, _] : by_portion) portions.push_back(p);
  std::stable_sort(portions.begin(), portions.end(),
                   [](const ItemSet& a, const ItemSet& b) { return a.count() > b.count(); });

  ClassTree tree;
  tree.class_index = class_index;
  tree.vertices.push_back(TreeVertex{cls, ItemSet::npos, {}, {}, "[]"});
  for (const auto& p : portions) {
    std::size_t cur = ClassTree::kRoot;
    while (true) {
      std::size_t next = ItemSet::npos;
      for (auto c : tree.vertices[cur].children) {
        const auto& cp = tree.vertices[c].portion;
        if (p.is_subset_of(cp)) {
          next = c;
          break;
        }
        if (p.intersects(cp)) {
          throw InvariantViolation("local portions " + p.to_string() + " and " + cp.to_string() +
                                   " overlap without nesting");
        }
      }
      if (next == ItemSet::npos) break;
      cur = next;
    }
    TreeVertex v;
    v.portion = p;
    v.parent = cur;
    v.signature.globals = by_portion[p];
    std::sort(v.signature.globals.begin(), v.signature.globals.end());
    v.signature_code = detail::signature_code(st, class_index, v.signature);
    tree.vertices[cur].children.push_back(tree.vertices.size());
    tree.vertices.push_back(std::move(v));
  }

  std::size_t singleton_leaves = 0;
  for (auto& v : tree.vertices) {
    std::sort(v.children.begin(), v.children.end(), [&](std::size_t a, std::size_t b) {
      return tree.vertices[a].portion < tree.vertices[b].portion;
    });
    if (v.children.empty()) {
      if (v.portion.count() != 1) {
        throw InvariantViolation("leaf " + v.portion.to_string() + " is not a singleton");
      }
      ++singleton_leaves;
    } else if (v.children.size() < 2) {
      throw InvariantViolation("vertex " + v.portion.to_string() + " has out-degree one");
    }
  }
  if (singleton_leaves != cls.count()) {
    throw InvariantViolation("class " + cls.to_string() + " is missing singleton leaves");
  }
  return tree;
}

/// Canonical form of the subtree at v: equal codes iff the subtrees are
/// isomorphic by a map that keeps arcs and signature codes.
inline std::string canonical_tree_code(const ClassTree& tree, std::size_t v) {
  std::vector<std::string> kids;
  kids.reserve(tree.vertices[v].children.size());
  for (auto c : tree.vertices[v].children) kids.push_back(canonical_tree_code(tree, c));
  std::sort(kids.begin(), kids.end());
  std::string s = "(" + tree.vertices[v].signature_code;
  for (const auto& k : kids) s += k;
  return s + ")";
}

namespace detail {

/// All subtree codes at once; parents precede children in vertex order.
inline std::vector<std::string> all_tree_codes(const ClassTree& tree) {
  std::vector<std::vector<std::string>> kids(tree.vertices.size());
  std::vector<std::string> code(tree.vertices.size());
  for (std::size_t v = tree.vertices.size(); v-- > 0;) {
    auto& ks = kids[v];
    std::sort(ks.begin(), ks.end());
    std::string s = "(" + tree.vertices[v].signature_code;
    for (const auto& k : ks) s += k;
    code[v] = s + ")";
    if (v != ClassTree::kRoot) kids[tree.vertices[v].parent].push_back(code[v]);
  }
  return code;
}

}  // namespace detail

/// make_state + normalize_locals + one tree per multi-item class.
inline FptState prepare_state(Instance inst, std::size_t k, std::vector<TestRef> F) {
  FptState st = normalize_locals(make_state(std::move(inst), k, std::move(F)));
  const auto& classes = st.greedy.classes.classes;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].count() >= 2) st.trees.push_back(build_class_tree(st, c));
  }
  return st;
}

struct RuleFiring {
  FptState state;
  RuleTrace trace;
};

/// Path rule. Scans classes in order and, per class, root-to-leaf paths in
/// preorder. On the first path where some signature occurs on at least 32k
/// non-root vertices (the least such signature code when several do), the
/// 16k-th of them in root-to-leaf order gives S*, and every test with local
/// portion S* is deleted.
inline std::optional<RuleFiring> apply_path_rule(const FptState& st) {
  if (!st.normalized) throw std::invalid_argument("apply_path_rule: state is not normalized");
  const std::size_t need = 32 * st.k;
  const std::size_t pick = 16 * st.k;

  for (const auto& tree : st.trees) {
    if (tree.depth() < need) continue;
    std::vector<std::size_t> path;
    std::optional<std::size_t> chosen;
    std::string chosen_code;

    // Preorder walk with an explicit stack of (vertex, next child slot).
    std::vector<std::pair<std::size_t, std::size_t>> stack{{ClassTree::kRoot, 0}};
    while (!stack.empty() && !chosen) {
      auto& [v, slot] = stack.back();
      if (slot == 0 && tree.is_leaf(v) && path.size() >= need) {
        std::map<std::string, std::vector<std::size_t>> hits;
        for (auto u : path) hits[tree.vertices[u].signature_code].push_back(u);
        for (const auto& [code, verts] : hits) {
          if (verts.size() >= need) {
            chosen = verts[pick - 1];
            chosen_code = code;
            break;
          }
        }
      }
      if (slot < tree.vertices[v].children.size()) {
        std::size_t c = tree.vertices[v].children[slot++];
        path.push_back(c);
        stack.emplace_back(c, 0);
      } else {
        stack.pop_back();
        if (!path.empty()) path.pop_back();
      }
    }
    if (!chosen) continue;

    const ItemSet& star = tree.vertices[*chosen].portion;
    if (star.count() < 2) throw InvariantViolation("path rule selected a singleton portion");
    const ItemSet& cls = st.greedy.classes.classes[tree.class_index];

    RuleTrace trace;
    trace.rule = "path";
    trace.class_index = tree.class_index;
    trace.trigger = "portion " + star.to_string() + " signature " + chosen_code;
    std::vector<ItemSet> kept;
    std::vector<std::size_t> new_index(st.inst.m(), ItemSet::npos);
    for (std::size_t t = 0; t < st.inst.m(); ++t) {
      const auto& test = st.inst.tests()[t];
      if (st.split_class[t] == tree.class_index && (test & cls) == star) {
        trace.deleted_tests.push_back(TestRef{t});
        continue;
      }
      new_index[t] = kept.size();
      kept.push_back(test);
    }
    std::vector<TestRef> F;
    for (auto r : st.greedy.F) F.push_back(TestRef{new_index[r.index]});
    FptState next = prepare_state(Instance(st.inst.n(), std::move(kept)), st.k, std::move(F));
    return RuleFiring{std::move(next), std::move(trace)};
  }
  return std::nullopt;
}

/// Sibling rule. Scans classes in order and vertices in tree order; at the
/// first vertex with at least 2k+2 children whose subtrees are pairwise
/// strongly isomorphic (least code among qualifying groups), the subtree of
/// the group member with the greatest portion is removed: its tests go, its
/// items go, the remaining tests are restricted to the surviving items
/// (empty ones dropped, repeats merged) and items are renumbered densely.
inline std::optional<RuleFiring> apply_sibling_rule(const FptState& st) {
  if (!st.normalized) throw std::invalid_argument("apply_sibling_rule: state is not normalized");
  const std::size_t need = 2 * st.k + 2;

  for (const auto& tree : st.trees) {
    const auto codes = detail::all_tree_codes(tree);
    for (std::size_t v = 0; v < tree.vertices.size(); ++v) {
      const auto& children = tree.vertices[v].children;
      if (children.size() < need) continue;
      std::map<std::string, std::vector<std::size_t>> groups;
      for (auto c : children) groups[codes[c]].push_back(c);
      const std::vector<std::size_t>* group = nullptr;
      for (const auto& [code, members] : groups) {
        if (members.size() >= need) {
          group = &members;
          break;
        }
      }
      if (!group) continue;

      // Children are sorted by portion, so the last member is the greatest.
      const std::size_t w1 = group->back();
      const ItemSet& removed = tree.vertices[w1].portion;
      const ItemSet& cls = st.greedy.classes.classes[tree.class_index];
      const std::size_t n = st.inst.n();

      RuleTrace trace;
      trace.rule = "sibling";
      trace.class_index = tree.class_index;
      trace.trigger = "parent " + tree.vertices[v].portion.to_string() + " removes subtree " +
                      removed.to_string() + " (" + std::to_string(group->size()) + " isomorphic)";
      trace.deleted_items = removed.items();
      trace.item_map.assign(n, 0);
      std::size_t next_item = 0;
      for (std::size_t p = 0; p < n; ++p) {
        if (!removed.has(p)) trace.item_map[p] = ++next_item;
      }
      const std::size_t n2 = next_item;

      std::vector<ItemSet> kept;
      std::vector<std::size_t> new_index(st.inst.m(), ItemSet::npos);
      std::unordered_map<ItemSet, std::size_t, ItemSetHash> seen;
      for (std::size_t t = 0; t < st.inst.m(); ++t) {
        const auto& test = st.inst.tests()[t];
        if (st.split_class[t] == tree.class_index && (test & cls).is_subset_of(removed)) {
          trace.deleted_tests.push_back(TestRef{t});
          continue;
        }
        ItemSet r(n2);
        for (auto p = test.first(); p != ItemSet::npos; p = test.next(p + 1)) {
          if (trace.item_map[p] != 0) r.insert(trace.item_map[p] - 1);
        }
        if (r.empty()) {
          trace.deleted_tests.push_back(TestRef{t});
          continue;
        }
        auto [it, fresh] = seen.emplace(r, kept.size());
        if (!fresh) {
          trace.deleted_tests.push_back(TestRef{t});
          new_index[t] = it->second;
          continue;
        }
        new_index[t] = kept.size();
        kept.push_back(std::move(r));
      }
      std::vector<TestRef> F;
      for (auto r : st.greedy.F) {
        if (new_index[r.index] == ItemSet::npos) throw InvariantViolation("sibling rule removed a test of F");
        F.push_back(TestRef{new_index[r.index]});
      }
      std::sort(F.begin(), F.end());
      if (std::adjacent_find(F.begin(), F.end()) != F.end()) {
        throw InvariantViolation("sibling rule merged two tests of F");
      }
      FptState next = prepare_state(Instance(n2, std::move(kept)), st.k, std::move(F));
      return RuleFiring{std::move(next), std::move(trace)};
    }
  }
  return std::nullopt;
}

struct FptResult {
  enum class Stage {
    /// The greedy reached |F| >= 2k - 2.
    kGreedySaturated,
    /// The unsaturated greedy family already induced |F| + k classes.
    kGreedyMini,
    /// Decided by exhaustive k-mini search on the reduced instance.
    kKernel,
  };

  bool yes = false;
  Stage stage = Stage::kKernel;
  std::vector<RuleTrace> trace;
  std::size_t path_fires = 0;
  std::size_t sibling_fires = 0;
  std::size_t kernel_n = 0;
  std::size_t kernel_m = 0;
  /// A test cover of the input with at most n - k tests, when it could be
  /// lifted back (greedy stages, or a kernel no rule changed).
  std::optional<std::vector<TestRef>> witness;
};

inline const char* stage_name(FptResult::Stage s) {
  switch (s) {
    case FptResult::Stage::kGreedySaturated: return "greedy-saturated";
    case FptResult::Stage::kGreedyMini: return "greedy-mini";
    case FptResult::Stage::kKernel: return "kernel";
  }
  return "?";
}

namespace detail {

/// Drops tests added by the singleton closure (a k-mini test cover stays one)
/// and extends what is left inside the original instance.
inline std::vector<TestRef> lift_mini_witness(const Instance& original, std::span<const TestRef> mini) {
  std::vector<TestRef> kept;
  for (auto r : mini)
    if (r.index < original.m()) kept.push_back(r);
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  return extend_partial_to_cover(original, kept, false);
}

}  // namespace detail

/// Decides whether the instance has a test cover with at most n - k tests.
inline FptResult fpt_decide(const Instance& inst, std::size_t k, const SolverConfig& cfg = {}) {
  require_validated(inst);
  if (k == 0) throw std::invalid_argument("fpt_decide: k must be positive");
  FptResult res;
  const Instance closed = add_all_singletons(inst).instance;

  GreedyState greedy = greedy_mini_test(closed, k);
  if (greedy.saturated || greedy.classes.size() >= greedy.F.size() + k) {
    if (greedy.saturated && !(greedy.F.size() <= 2 * k && greedy.classes.size() >= greedy.F.size() + k)) {
      throw InvariantViolation("saturated greedy family is not a k-mini test cover");
    }
    res.yes = true;
    res.stage = greedy.saturated ? FptResult::Stage::kGreedySaturated : FptResult::Stage::kGreedyMini;
    res.kernel_n = closed.n();
    res.kernel_m = closed.m();
    res.witness = detail::lift_mini_witness(inst, greedy.F);
    return res;
  }
  if (greedy.classes.size() + 2 > 3 * k) {
    throw InvariantViolation("unsaturated greedy left more than 3k - 2 classes");
  }

  FptState st = prepare_state(closed, k, greedy.F);
  res.trace = st.log;
  const std::size_t max_rounds = st.inst.n() + st.inst.m();
  for (std::size_t round = 0;; ++round) {
    if (round > max_rounds) throw InvariantViolation("reduction rules did not reach a fixpoint");
    const std::size_t before = st.inst.n() + st.inst.m();
    auto fired = apply_path_rule(st);
    if (fired) {
      ++res.path_fires;
    } else if ((fired = apply_sibling_rule(st))) {
      ++res.sibling_fires;
    } else {
      break;
    }
    if (fired->state.inst.n() + fired->state.inst.m() >= before) {
      throw InvariantViolation("rule firing did not shrink the instance");
    }
    res.trace.push_back(std::move(fired->trace));
    st = std::move(fired->state);
    res.trace.insert(res.trace.end(), st.log.begin(), st.log.end());
  }
  res.stage = FptResult::Stage::kKernel;
  res.kernel_n = st.inst.n();
  res.kernel_m = st.inst.m();

  std::optional<std::vector<TestRef>> mini;
  try {
    mini = find_k_mini_brute(st.inst, k, cfg);
  } catch (const TimeoutError&) {
    throw;
  } catch (const ResourceLimitError& e) {
    throw ResourceLimitError(std::string(e.what()) + " (kernel n=" + std::to_string(res.kernel_n) +
                             " m=" + std::to_string(res.kernel_m) + ")");
  }
  res.yes = mini.has_value();
  if (mini && res.path_fires == 0 && res.sibling_fires == 0) {
    std::vector<TestRef> in_closed;
    for (auto r : *mini) in_closed.push_back(TestRef{st.origin[r.index]});
    res.witness = detail::lift_mini_witness(inst, in_closed);
  }
  return res;
}

namespace detail {

inline std::optional<std::uint64_t> checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::nullopt;
  return a * b;
}

inline std::optional<std::uint64_t> checked_pow2(std::uint64_t e) {
  if (e >= 64) return std::nullopt;
  return std::uint64_t{1} << e;
}

}  // namespace detail

/// Upper bound on distinct signatures inside one class when the greedy left
/// `classes` classes: 2^(2^(classes-1)). Empty on overflow.
inline std::optional<std::uint64_t> signature_count_bound(std::size_t classes) {
  if (classes == 0) throw std::invalid_argument("signature_count_bound: need at least one class");
  auto inner = detail::checked_pow2(classes - 1);
  if (!inner) return std::nullopt;
  return detail::checked_pow2(*inner);
}

/// Tree depth beyond which the path rule is guaranteed to find its trigger:
/// (32k - 1) * 2^(2^(3k-1)). Only a reference value; the rule tests its
/// trigger directly. Empty on overflow.
inline std::optional<std::uint64_t> path_rule_depth_bound(std::size_t k) {
  if (k == 0) throw std::invalid_argument("path_rule_depth_bound: k must be positive");
  auto sigs = signature_count_bound(3 * k);
  if (!sigs) return std::nullopt;
  return detail::checked_mul(32 * k - 1, *sigs);
}

/// Child count beyond which the sibling rule is guaranteed to trigger at a
/// vertex of height d: 2k * g * s^(2 * f3(d-1) - 1), where g is the number of
/// non-isomorphic candidate subtrees, s the signature bound for 3k classes
/// and f3(d-1) the portion-size bound one level down. Empty on overflow.
inline std::optional<std::uint64_t> sibling_rule_child_bound(std::size_t k, std::uint64_t g,
                                                             std::uint64_t portion_bound_below) {
  if (k == 0 || portion_bound_below == 0) throw std::invalid_argument("sibling_rule_child_bound: bad argument");
  auto sigs = signature_count_bound(3 * k);
  if (!sigs) return std::nullopt;
  std::optional<std::uint64_t> acc = detail::checked_mul(2 * k, g);
  for (std::uint64_t e = 0; acc && e < 2 * portion_bound_below - 1; ++e) acc = detail::checked_mul(*acc, *sigs);
  return acc;
}

/// Portion-size bound at height d: f3(d) = f3(d-1) * f2(d). Empty on overflow.
inline std::optional<std::uint64_t> portion_size_bound(std::uint64_t portion_bound_below,
                                                       std::uint64_t child_bound) {
  return detail::checked_mul(portion_bound_below, child_bound);
}

}  // namespace testcover
