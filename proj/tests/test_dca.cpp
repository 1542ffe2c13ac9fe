#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "helpers.hpp"
#include "kbranch/dca.hpp"
#include "kbranch/exchange.hpp"
#include "kbranch/recognition.hpp"
#include "kbranch/testkit.hpp"

using namespace kbranch;

namespace {

using Table = DiscreteFunctionTable;

Table table_of(std::initializer_list<std::pair<std::vector<int>, Cost>> entries) {
  Table t(static_cast<int>(entries.begin()->first.size()));
  for (const auto& [x, v] : entries) t.set(x, v);
  return t;
}

}  // namespace

TEST(EvalFB, Examples) {
  const Digraph p2 = fixtures::p2();
  EXPECT_EQ(eval_fB(p2, 1, {1, 1}), 0);
  EXPECT_EQ(eval_fB(p2, 1, {1, 0}), 3);
  EXPECT_EQ(eval_fB(p2, 1, {0, 1}), 5);
  EXPECT_EQ(eval_fB(p2, 1, {0, 0}), std::nullopt);
  EXPECT_EQ(eval_fB(p2, 1, {2, 0}), std::nullopt);
  EXPECT_EQ(eval_fB(fixtures::d2(), 2, {2, 1}), 1);
}

TEST(EvalFA, Examples) {
  const Digraph c3 = fixtures::c3();
  EXPECT_EQ(eval_fA(c3, 1, {1, 0, 0}), 2);
  EXPECT_EQ(eval_fA(c3, 1, {0, 1, 0}), 2);
  EXPECT_EQ(eval_fA(c3, 1, {0, 0, 1}), 2);
  EXPECT_EQ(eval_fA(c3, 1, {1, 1, 0}), std::nullopt);
  EXPECT_EQ(eval_fA(c3, 2, {1, 1, 0}), 6);
}

TEST(Mincost, BranchingExamples) {
  auto r = mincost_k_branching(fixtures::p2(), 1);
  EXPECT_EQ(r.cost, 0);
  EXPECT_TRUE(r.arcs.empty());

  const Digraph neg = fixtures::p2().with_costs(std::vector<Cost>{-3, 5});
  r = mincost_k_branching(neg, 1);
  EXPECT_EQ(r.cost, -3);
  EXPECT_EQ(r.arcs, ArcSubset({0}));
  EXPECT_EQ(r.roots, (RootVector{1, 0}));

  r = mincost_k_branching(fixtures::d2().with_costs(std::vector<Cost>{-1, 2, 4}), 2);
  EXPECT_EQ(r.cost, -1);
  EXPECT_EQ(r.arcs, ArcSubset({0}));
}

TEST(Mincost, ArborescenceExamples) {
  auto r = mincost_k_arborescence(fixtures::c3(), 1);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->cost, 2);
  EXPECT_EQ(r->roots.sum(), 1);

  r = mincost_k_arborescence(fixtures::c3(), 2);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->cost, 6);
  EXPECT_EQ(r->roots, (RootVector{1, 1, 0}));

  EXPECT_FALSE(mincost_k_arborescence(fixtures::p1(), 2));
}

TEST(Exchange, Examples) {
  EXPECT_TRUE(check_exchange_axiom(table_of({{{3, 1}, 7}}), ExchangeMode::kMNatural).passed);
  EXPECT_TRUE(check_exchange_axiom(fB_table(fixtures::p2(), 1), ExchangeMode::kMNatural).passed);

  const Table hole = table_of({{{0}, 0}, {{2}, 0}});
  const auto verdict = check_exchange_axiom(hole, ExchangeMode::kMNatural);
  ASSERT_FALSE(verdict.passed);
  ASSERT_TRUE(verdict.witness);
  EXPECT_EQ(verdict.witness->x, std::vector<int>{2});
  EXPECT_EQ(verdict.witness->y, std::vector<int>{0});
  EXPECT_EQ(verdict.witness->u, 0);  // vertex 1
  EXPECT_TRUE(confirms_violation(hole, ExchangeMode::kMNatural, *verdict.witness));

  EXPECT_THROW(check_exchange_axiom(Table(2), ExchangeMode::kM), std::invalid_argument);
}

TEST(Exchange, FunctionInequalityMatters) {
  // M-convex domain, but f(2,0) + f(0,2) < 2 f(1,1).
  const Table bad = table_of({{{2, 0}, 0}, {{1, 1}, 5}, {{0, 2}, 0}});
  const auto verdict = check_exchange_axiom(bad, ExchangeMode::kM);
  ASSERT_FALSE(verdict.passed);
  EXPECT_TRUE(confirms_violation(bad, ExchangeMode::kM, *verdict.witness));
  const Table good = table_of({{{2, 0}, 0}, {{1, 1}, 0}, {{0, 2}, 0}});
  EXPECT_TRUE(check_exchange_axiom(good, ExchangeMode::kM).passed);
}

TEST(ArgminBase, Examples) {
  const Table fa = fA_table(fixtures::c3(), 1);
  EXPECT_EQ(fa.argmin(), (std::vector<std::vector<int>>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
  EXPECT_TRUE(verify_argmin_base_polyhedron(fa, ExchangeMode::kM).passed);
  EXPECT_TRUE(verify_argmin_base_polyhedron(table_of({{{1, 2}, 0}, {{0, 0}, 4}}), ExchangeMode::kM).passed);
  const Table crafted = table_of({{{1, 0}, 0}, {{0, 0}, 0}, {{1, 1}, 3}});
  EXPECT_FALSE(verify_argmin_base_polyhedron(crafted, ExchangeMode::kM).passed);
  EXPECT_TRUE(verify_argmin_base_polyhedron(crafted, ExchangeMode::kMNatural).passed);
}

// The matroid-intersection tables against testkit enumeration, plus the
// convexity properties and descent results on the same tables.
TEST(FunctionTables, AgreeWithEnumerationAndAreConvex) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3, m = 3 + trial % 5;
    const Digraph d = helpers::random_digraph(rng, n, m, -3, 3);
    for (int k = 1; k <= 2; ++k) {
      const Table fb = fB_table(d, k), fa = fA_table(d, k);
      ASSERT_EQ(fb, testkit::brute_function_table(d, k, testkit::FunctionKind::kBranching));
      ASSERT_EQ(fa, testkit::brute_function_table(d, k, testkit::FunctionKind::kArborescence));
      ASSERT_TRUE(check_exchange_axiom(fb, ExchangeMode::kMNatural).passed);
      if (!fa.empty()) {
        ASSERT_TRUE(check_exchange_axiom(fa, ExchangeMode::kM).passed);
        ASSERT_TRUE(verify_argmin_base_polyhedron(fa, ExchangeMode::kM).passed);
      }
      for (int level = fb.min_level(); level <= fb.max_level(); ++level) {
        const Table slice = fb.slice(level);
        ASSERT_FALSE(slice.empty());
        ASSERT_TRUE(check_exchange_axiom(slice, ExchangeMode::kM).passed);
      }

      const auto best = mincost_k_branching(d, k);
      ASSERT_EQ(best.cost, *fb.min_value());
      ASSERT_EQ(best.cost, cost_of(d, best.arcs));
      ASSERT_EQ(root_vector(d, best.arcs, k), best.roots);
      const auto arb = mincost_k_arborescence(d, k);
      ASSERT_EQ(arb.has_value(), !fa.empty());
      if (arb) {
        ASSERT_EQ(arb->cost, *fa.min_value());
        ASSERT_TRUE(is_k_arborescence(d, arb->arcs, k));
      }
    }
  }
}

// dom f_B is the set of x in {0..k}^V with x(X) >= k - rho_A(X) for nonempty X.
TEST(FunctionTables, DomainIsCutCondition) {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 3;
    const Digraph d = helpers::random_digraph(rng, n, 2 + trial % 5);
    for (int k = 1; k <= 2; ++k) {
      const BranchingCostFunction f(d, k);
      std::vector<int> x(static_cast<std::size_t>(n), 0);
      while (true) {
        bool cut = true;
        for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
          int xs = 0;
          for (int v = 0; v < n; ++v)
            if ((s >> v) & 1U) xs += x[static_cast<std::size_t>(v)];
          if (xs < k - in_cut_count(d, VertexSet(s))) cut = false;
        }
        ASSERT_EQ(f.in_domain(RootVector(x)), cut);
        int i = n - 1;
        while (i >= 0 && x[static_cast<std::size_t>(i)] == k) x[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
        ++x[static_cast<std::size_t>(i)];
      }
    }
  }
}

TEST(SteepestDescent, FindsTableMinimum) {
  const Table t = table_of({{{0, 0}, 4}, {{1, 0}, 2}, {{1, 1}, 1}, {{2, 1}, 3}});
  const auto f = [&](const RootVector& x) { return t.at(x); };
  EXPECT_EQ(mnat_steepest_descent(f, RootVector{0, 0}), (RootVector{1, 1}));
  EXPECT_THROW(mnat_steepest_descent(f, RootVector{5, 5}), std::invalid_argument);
}
