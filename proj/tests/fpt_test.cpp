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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "testcover/bounds_exact.hpp"
#include "testcover/fpt.hpp"

namespace testcover {
namespace {

ItemSet S(std::size_t n, std::initializer_list<Item> items) { return ItemSet::from_items(n, items); }

Instance closed(std::size_t n, const std::vector<std::vector<Item>>& lists) {
  return add_all_singletons(Instance::from_lists(n, lists)).instance;
}

std::vector<Item> range(Item lo, Item hi) {
  std::vector<Item> out;
  for (Item i = lo; i <= hi; ++i) out.push_back(i);
  return out;
}

std::vector<TestRef> refs(std::initializer_list<std::size_t> idx) {
  std::vector<TestRef> out;
  for (auto i : idx) out.push_back(TestRef{i});
  return out;
}

std::optional<std::size_t> index_of(const Instance& inst, const ItemSet& s) {
  for (std::size_t t = 0; t < inst.m(); ++t)
    if (inst.tests()[t] == s) return t;
  return std::nullopt;
}

TEST(MakeState, ChecksPreconditions) {
  EXPECT_THROW(make_state(Instance::from_lists(2, {{1}}), 1, {}), std::invalid_argument);
  auto split = closed(4, {{1, 2}, {1, 3}});
  EXPECT_THROW(make_state(split, 2, {}), InvariantViolation);
  auto st = make_state(split, 2, refs({0, 1}));
  EXPECT_EQ(st.greedy.classes.size(), 4u);
}

TEST(NormalizeLocals, ComplementsLargePortions) {
  auto inst = closed(5, {{5}, {1, 2, 3}});
  auto st = normalize_locals(make_state(inst, 2, {TestRef{*index_of(inst, S(5, {5}))}}));
  EXPECT_TRUE(st.normalized);
  EXPECT_FALSE(index_of(st.inst, S(5, {1, 2, 3})));
  EXPECT_TRUE(index_of(st.inst, S(5, {4, 5})));
  EXPECT_EQ(st.inst.m(), inst.m());
}

TEST(NormalizeLocals, CollisionDropsTest) {
  auto inst = closed(4, {{1, 2, 3}});
  auto st = normalize_locals(make_state(inst, 2, {}));
  EXPECT_EQ(st.inst.m(), 4u);
  ASSERT_EQ(st.log.size(), 1u);
  EXPECT_EQ(st.log[0].rule, "complement-collision");
  EXPECT_EQ(format_trace(st.log[0]), "RULE complement-collision class=1 tests=[1] items=[]");
}

TEST(NormalizeLocals, HalfIsKeptAndNormalizedIsStable) {
  auto inst = closed(4, {{1, 2}});
  auto st = normalize_locals(make_state(inst, 2, {}));
  EXPECT_EQ(st.inst, inst);
  EXPECT_EQ(normalize_locals(st).inst, st.inst);
}

TEST(BuildClassTree, Examples) {
  auto st = prepare_state(closed(4, {{1, 2}}), 2, {});
  ASSERT_EQ(st.trees.size(), 1u);
  const auto& t = st.trees[0];
  EXPECT_EQ(t.depth(), 2u);
  const auto& root = t.vertices[ClassTree::kRoot];
  ASSERT_EQ(root.children.size(), 3u);
  EXPECT_EQ(t.vertices[root.children[0]].portion, S(4, {1, 2}));
  EXPECT_EQ(t.vertices[root.children[1]].portion, S(4, {3}));
  EXPECT_EQ(t.vertices[root.children[0]].children.size(), 2u);

  auto star = prepare_state(closed(5, {}), 2, {});
  EXPECT_EQ(star.trees[0].depth(), 1u);
  EXPECT_EQ(star.trees[0].vertices[0].children.size(), 5u);

  auto chain = prepare_state(closed(6, {{1, 2}, {1, 2, 3}}), 2, {});
  const auto& c = chain.trees[0];
  EXPECT_EQ(c.depth(), 3u);
  auto v123 = *c.find(S(6, {1, 2, 3}));
  auto v12 = *c.find(S(6, {1, 2}));
  EXPECT_EQ(c.vertices[v123].parent, ClassTree::kRoot);
  EXPECT_EQ(c.vertices[v12].parent, v123);
  EXPECT_EQ(c.vertices[*c.find(S(6, {3}))].parent, v123);
  EXPECT_EQ(c.vertices[*c.find(S(6, {1}))].parent, v12);
  EXPECT_EQ(c.vertices[*c.find(S(6, {4}))].parent, ClassTree::kRoot);
}

TEST(BuildClassTree, RejectsUnnormalizedState) {
  auto st = make_state(closed(4, {{1, 2}}), 2, {});
  EXPECT_THROW(build_class_tree(st, 0), std::invalid_argument);
}

TEST(SignatureOf, Examples) {
  // Classes {1,2,3,4} and {5,6} come from F = {{5,6}}.
  auto inst = closed(6, {{5, 6}, {1, 2, 5, 6}});
  auto st = prepare_state(inst, 2, refs({0}));
  ASSERT_EQ(st.greedy.classes.size(), 2u);
  auto sig = signature_of(st, 0, S(6, {1, 2}));
  ASSERT_EQ(sig.globals.size(), 1u);
  EXPECT_EQ(sig.globals[0], S(6, {5, 6}));

  auto both = prepare_state(closed(6, {{5, 6}, {1, 2, 5, 6}, {1, 2}}), 2, refs({0}));
  auto sig2 = signature_of(both, 0, S(6, {1, 2}));
  ASSERT_EQ(sig2.globals.size(), 2u);
  EXPECT_TRUE(sig2.globals[0].empty());
  EXPECT_EQ(sig2.globals[1], S(6, {5, 6}));

  auto sig3 = signature_of(st, 0, S(6, {3}));
  ASSERT_EQ(sig3.globals.size(), 1u);
  EXPECT_TRUE(sig3.globals[0].empty());
  EXPECT_THROW(signature_of(st, 0, S(6, {1, 3})), std::invalid_argument);
}

// Chain {1}, {1,2}, ..., {1..33} inside the single class [66].
Instance chain_instance(std::size_t n, std::size_t top, bool alternate) {
  std::vector<std::vector<Item>> lists;
  if (alternate) lists.push_back({n - 1, n});
  for (Item j = 2; j <= top; ++j) {
    auto t = range(1, j);
    if (alternate && j % 2 == 1) {
      t.push_back(n - 1);
      t.push_back(n);
    }
    lists.push_back(t);
  }
  return closed(n, lists);
}

TEST(PathRule, FiresOnLongChain) {
  auto inst = chain_instance(66, 33, false);
  auto st = prepare_state(inst, 1, {});
  ASSERT_EQ(st.trees.size(), 1u);
  EXPECT_EQ(st.trees[0].depth(), 33u);
  auto fired = apply_path_rule(st);
  ASSERT_TRUE(fired);
  EXPECT_EQ(fired->trace.rule, "path");
  ASSERT_EQ(fired->trace.deleted_tests.size(), 1u);
  EXPECT_EQ(st.inst.tests()[fired->trace.deleted_tests[0].index], ItemSet::from_items(66, range(1, 18)));
  EXPECT_EQ(fired->state.inst.m(), inst.m() - 1);
  EXPECT_EQ(find_k_mini_brute(inst, 1).has_value(), find_k_mini_brute(fired->state.inst, 1).has_value());
  // The remaining path still has 32 equal-signature vertices.
  auto again = apply_path_rule(fired->state);
  ASSERT_TRUE(again);
  EXPECT_FALSE(apply_path_rule(again->state));
}

TEST(PathRule, AbsentWhenShallowOrMixed) {
  EXPECT_FALSE(apply_path_rule(prepare_state(closed(8, {{1, 2}, {1, 2, 3}}), 1, {})));
  EXPECT_FALSE(apply_path_rule(prepare_state(chain_instance(66, 31, false), 1, {})));
  auto mixed = chain_instance(68, 33, true);
  auto st = prepare_state(mixed, 1, refs({0}));
  ASSERT_EQ(st.greedy.classes.size(), 2u);
  EXPECT_EQ(st.tree_for(0).depth(), 33u);
  EXPECT_FALSE(apply_path_rule(st));
}

TEST(SiblingRule, SevenSingletonsKTwo) {
  auto inst = closed(7, {});
  auto st = prepare_state(inst, 2, {});
  auto fired = apply_sibling_rule(st);
  ASSERT_TRUE(fired);
  EXPECT_EQ(fired->trace.deleted_items, std::vector<Item>{7});
  ASSERT_EQ(fired->trace.deleted_tests.size(), 1u);
  EXPECT_EQ(fired->trace.deleted_tests[0].index, 6u);
  EXPECT_EQ(fired->state.inst.n(), 6u);
  EXPECT_EQ(format_trace(fired->trace), "RULE sibling class=1 tests=[7] items=[7]");
  EXPECT_FALSE(find_k_mini_brute(inst, 2));
  EXPECT_FALSE(find_k_mini_brute(fired->state.inst, 2));
}

TEST(SiblingRule, TwoLeafSubtreesKOne) {
  auto inst = closed(8, {{1, 2}, {3, 4}, {5, 6}, {7, 8}});
  auto st = prepare_state(inst, 1, {});
  auto fired = apply_sibling_rule(st);
  ASSERT_TRUE(fired);
  EXPECT_EQ(fired->trace.deleted_items, (std::vector<Item>{7, 8}));
  EXPECT_EQ(fired->trace.deleted_tests.size(), 3u);
  EXPECT_EQ(fired->state.inst, closed(6, {{1, 2}, {3, 4}, {5, 6}}));
  EXPECT_EQ(fired->trace.item_map, (std::vector<Item>{1, 2, 3, 4, 5, 6, 0, 0}));
  EXPECT_EQ(find_k_mini_brute(inst, 1).has_value(), find_k_mini_brute(fired->state.inst, 1).has_value());
}

TEST(SiblingRule, AbsentBelowThreshold) {
  EXPECT_FALSE(apply_sibling_rule(prepare_state(closed(5, {}), 2, {})));
  EXPECT_FALSE(apply_sibling_rule(prepare_state(closed(6, {{1, 2}, {3, 4}, {5, 6}}), 1, {})));
}

TEST(CanonicalTreeCode, Examples) {
  auto st = prepare_state(closed(6, {{5, 6}, {1, 2, 5, 6}, {3, 4}}), 2, refs({0}));
  const auto& t = st.tree_for(0);
  auto leaf1 = *t.find(S(6, {1}));
  auto leaf3 = *t.find(S(6, {3}));
  EXPECT_EQ(canonical_tree_code(t, leaf1), canonical_tree_code(t, leaf3));
  auto v12 = *t.find(S(6, {1, 2}));
  auto v34 = *t.find(S(6, {3, 4}));
  EXPECT_NE(canonical_tree_code(t, v12), canonical_tree_code(t, v34));

  auto mirror = prepare_state(closed(6, {{1, 2}, {4, 5, 6}, {4, 5}}), 2, {});
  // Not normalized away: {4,5,6} is exactly half.
  const auto& m = mirror.tree_for(0);
  auto a = canonical_tree_code(m, *m.find(S(6, {1, 2})));
  auto b = canonical_tree_code(m, *m.find(S(6, {4, 5})));
  EXPECT_EQ(a, b);
  auto all = detail::all_tree_codes(m);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) EXPECT_EQ(all[v], canonical_tree_code(m, v));
}

TEST(FptDecide, Examples) {
  auto any = fpt_decide(Instance::from_lists(4, {{1}, {2}, {3}}), 1);
  EXPECT_TRUE(any.yes);
  EXPECT_EQ(any.stage, FptResult::Stage::kGreedySaturated);
  auto no = fpt_decide(Instance::from_lists(4, {{1}, {2}, {3}}), 2);
  EXPECT_FALSE(no.yes);
  EXPECT_EQ(no.stage, FptResult::Stage::kKernel);
  auto yes = fpt_decide(closed(4, {{1, 2}, {1, 3}}), 2);
  EXPECT_TRUE(yes.yes);
  ASSERT_TRUE(yes.witness);
  EXPECT_LE(yes.witness->size(), 2u);
  EXPECT_THROW(fpt_decide(Instance::from_lists(3, {{1}}), 2), std::invalid_argument);
}

TEST(FptDecide, TraceAndCounts) {
  auto res = fpt_decide(closed(8, {}), 2);
  EXPECT_FALSE(res.yes);
  EXPECT_EQ(res.sibling_fires, 3u);
  EXPECT_EQ(res.kernel_n, 5u);
  ASSERT_EQ(res.trace.size(), 3u);
  EXPECT_EQ(format_trace(res.trace[0]), "RULE sibling class=1 tests=[8] items=[8]");
}

TEST(Bounds, ReferenceFormulas) {
  EXPECT_EQ(signature_count_bound(1), 2u);
  EXPECT_EQ(signature_count_bound(3), 16u);
  EXPECT_EQ(signature_count_bound(6), std::optional<std::uint64_t>{std::uint64_t{1} << 32});
  EXPECT_EQ(signature_count_bound(7), std::nullopt);
  EXPECT_EQ(path_rule_depth_bound(1), std::optional<std::uint64_t>{31u * 16u});
  EXPECT_EQ(path_rule_depth_bound(3), std::nullopt);
  EXPECT_EQ(sibling_rule_child_bound(1, 1, 1), std::optional<std::uint64_t>{2u * 16u});
  EXPECT_EQ(portion_size_bound(3, 4), std::optional<std::uint64_t>{12u});
}

TEST(FptProperties, AgreesWithOracleAndSignatureBound) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 400; ++trial) {
    auto raw = oracle::random_raw(rng, 2 + static_cast<int>(rng() % 7), 1 + static_cast<int>(rng() % 9));
    oracle::close_to_cover(raw);
    auto inst = oracle::to_instance(raw);
    for (std::size_t k = 1; k <= 3; ++k) {
      auto res = fpt_decide(inst, k);
      EXPECT_EQ(res.yes, oracle::has_k_mini(raw, static_cast<int>(k)));
      if (res.witness) {
        EXPECT_TRUE(oracle::separates_all(raw, oracle::to_sel(*res.witness)));
        EXPECT_LE(res.witness->size() + k, inst.n());
      }
      auto c = add_all_singletons(inst).instance;
      auto g = greedy_mini_test(c, k);
      if (g.saturated || g.classes.size() >= g.F.size() + k) continue;
      auto st = prepare_state(c, k, g.F);
      const std::size_t l = st.greedy.classes.size();
      for (const auto& tree : st.trees) {
        std::set<std::string> sigs;
        for (std::size_t v = 1; v < tree.vertices.size(); ++v) sigs.insert(tree.vertices[v].signature_code);
        if (l <= 4) {
          EXPECT_LE(sigs.size(), *signature_count_bound(l));
        }
      }
    }
  }
}

}  // namespace
}  // namespace testcover
