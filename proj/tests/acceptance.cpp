// Acceptance suite: one PASS/FAIL line per criterion. Run with criterion
// numbers as arguments to select a subset.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "kbranch/kbranch.hpp"
#include "kbranch/testkit.hpp"
#include "sweep.hpp"

using namespace kbranch;

namespace {

// Pinned limits.
constexpr double kPackingEquivalenceSeconds = 600.0;  // criterion 1
constexpr double kRootLocationSeconds = 120.0;        // criterion 10
constexpr int kMaxN = 4, kMaxM = 6;
constexpr int kCostVectorsPerGraph = 200;
constexpr unsigned kCostSeed = 20240601;
constexpr int kSupermodularTrialsPerSize = 1000;

struct Outcome {
  bool passed;
  std::string detail;
};

const std::vector<sweep::GraphClass>& graphs() {
  static const auto classes = sweep::all_classes(kMaxN, kMaxM);
  return classes;
}

std::vector<std::vector<RootVector>> q_lists(int n, int k, int p) {
  const auto single = sweep::root_vectors(n, k);
  std::vector<std::vector<RootVector>> out;
  if (p == 1)
    for (const auto& q : single) out.push_back({q});
  else
    for (const auto& a : single)
      for (const auto& b : single) out.push_back({a, b});
  return out;
}

std::vector<std::vector<int>> values_of(const std::vector<RootVector>& q) {
  std::vector<std::vector<int>> out;
  for (const auto& qi : q) out.emplace_back(qi.values().begin(), qi.values().end());
  return out;
}

/// Calls fn(instance, catalog) for every (graph, k <= 2, p <= 2, q) in the sweep.
template <class Fn>
long long for_each_instance(Fn&& fn) {
  long long count = 0;
  for (const auto& g : graphs())
    for (int k = 1; k <= 2; ++k) {
      const testkit::BranchingCatalog catalog(g.digraph, k);
      for (int p = 1; p <= 2; ++p)
        for (auto& q : q_lists(g.digraph.num_vertices(), k, p)) {
          fn(PackingInstance(g.digraph, k, q), catalog);
          ++count;
        }
    }
  return count;
}

std::string witness_text(const PackingInstance& inst) {
  std::string s = "n=" + std::to_string(inst.digraph().num_vertices()) + " arcs=";
  for (const Arc& a : inst.digraph().arcs()) s += std::to_string(a.tail + 1) + ">" + std::to_string(a.head + 1) + " ";
  s += "k=" + std::to_string(inst.k()) + " q=";
  for (const auto& q : inst.q()) s += q.to_string();
  return s;
}

Outcome sweep_integrity() {
  std::vector<int> per_n(kMaxN + 1, 0);
  std::vector<long long> orbit_sum(kMaxN + 1, 0);
  for (const auto& g : graphs()) {
    ++per_n[static_cast<std::size_t>(g.digraph.num_vertices())];
    orbit_sum[static_cast<std::size_t>(g.digraph.num_vertices())] += g.orbit_size;
  }
  for (int n = 1; n <= kMaxN; ++n)
    if (orbit_sum[static_cast<std::size_t>(n)] != sweep::labeled_count(n, kMaxM))
      return {false, "orbits on n=" + std::to_string(n) + " do not cover all labeled placements"};
  std::string d = std::to_string(graphs().size()) + " classes (";
  for (int n = 1; n <= kMaxN; ++n) d += (n > 1 ? "/" : "") + std::to_string(per_n[static_cast<std::size_t>(n)]);
  d += ") covering ";
  long long total = 0;
  for (int n = 1; n <= kMaxN; ++n) total += orbit_sum[static_cast<std::size_t>(n)];
  return {true, d + std::to_string(total) + " labeled digraphs"};
}

Outcome packing_equivalence() {
  long long mismatches = 0;
  std::string first;
  const long long count = for_each_instance([&](const PackingInstance& inst, const testkit::BranchingCatalog& catalog) {
    const bool predicted = is_packing_feasible(inst);
    const bool exists = catalog.packing_exists(values_of(inst.q()));
    if (predicted != exists && mismatches++ == 0) first = witness_text(inst);
  });
  return {mismatches == 0, std::to_string(count) + " instances, " + std::to_string(mismatches) + " mismatches" +
                               (first.empty() ? "" : " (first: " + first + ")")};
}

Outcome packing_soundness() {
  long long feasible = 0, failures = 0;
  std::string first;
  for_each_instance([&](const PackingInstance& inst, const testkit::BranchingCatalog&) {
    if (!is_packing_feasible(inst)) return;
    ++feasible;
    std::string problem;
    try {
      const PackingCertificate cert = pack_k_branchings(inst);
      if (auto v = certificate_violation(inst, cert)) problem = *v;
      // independent re-check with testkit's own definitions
      for (int i = 0; i < inst.p() && problem.empty(); ++i) {
        std::uint32_t mask = 0;
        for (ArcIndex a : cert.arcs[static_cast<std::size_t>(i)]) mask |= std::uint32_t{1} << a;
        if (!testkit::splits_into_branchings(inst.digraph(), mask, inst.k())) problem = "not a k-branching";
        for (Vertex v = 0; v < inst.digraph().num_vertices(); ++v)
          if (inst.k() - testkit::cut_into(inst.digraph(), mask, std::uint64_t{1} << v) != inst.q(i)[v])
            problem = "root vector";
      }
    } catch (const std::exception& e) {
      problem = e.what();
    }
    if (!problem.empty() && failures++ == 0) first = witness_text(inst) + ": " + problem;
  });
  return {failures == 0, std::to_string(feasible) + " feasible instances packed, " + std::to_string(failures) +
                             " failures" + (first.empty() ? "" : " (first: " + first + ")")};
}

Outcome edmonds_specialization() {
  long long checked = 0, mismatches = 0;
  for_each_instance([&](const PackingInstance& inst, const testkit::BranchingCatalog&) {
    if (inst.k() != 1) return;
    ++checked;
    const int n = inst.digraph().num_vertices();
    bool edmonds = true;
    for (std::uint64_t x = 1; x < (std::uint64_t{1} << n); ++x) {
      int zero = 0;
      for (const RootVector& q : inst.q()) zero += q.sum(VertexSet(x)) == 0;
      if (in_cut_count(inst.digraph(), VertexSet(x)) < zero) edmonds = false;
    }
    mismatches += edmonds != is_packing_feasible(inst);
  });
  return {mismatches == 0, std::to_string(checked) + " k=1 instances, " + std::to_string(mismatches) + " mismatches"};
}

Outcome two_group_remark() {
  long long checked = 0, mismatches = 0;
  for_each_instance([&](const PackingInstance& inst, const testkit::BranchingCatalog&) {
    if (inst.p() != 2) return;
    ++checked;
    const int n = inst.digraph().num_vertices(), k = inst.k();
    bool eqmax = true, remark = true;
    for (std::uint64_t x = 1; x < (std::uint64_t{1} << n); ++x) {
      const VertexSet X(x);
      const int rho = in_cut_count(inst.digraph(), X);
      const int q1 = inst.q(0).sum(X), q2 = inst.q(1).sum(X);
      if (rho < std::max(0, k - q1) + std::max(0, k - q2)) eqmax = false;
      if (q1 + q2 < 2 * k - rho || q1 < k - rho || q2 < k - rho) remark = false;
    }
    mismatches += eqmax != remark;
  });
  return {mismatches == 0, std::to_string(checked) + " p=2 instances, " + std::to_string(mismatches) + " mismatches"};
}

/// Runs fn(f, catalog, costs) over the cost sweep shared by criteria 5-7.
template <class Fn>
long long for_each_cost_vector(Fn&& fn) {
  std::mt19937 rng(kCostSeed);
  std::uniform_int_distribution<int> cost(-2, 2);
  long long count = 0;
  for (const auto& g : graphs()) {
    std::vector<std::vector<Cost>> costs(kCostVectorsPerGraph);
    for (auto& c : costs)
      for (int a = 0; a < g.digraph.num_arcs(); ++a) c.push_back(cost(rng));
    for (int k = 1; k <= 2; ++k) {
      const BranchingCostFunction f(g.digraph, k);
      const testkit::BranchingCatalog catalog(g.digraph, k);
      for (const auto& c : costs) {
        fn(f, catalog, std::span<const Cost>(c));
        ++count;
      }
    }
  }
  return count;
}

Outcome fb_mnat_convexity() {
  long long table_mismatch = 0, violations = 0;
  const long long count = for_each_cost_vector([&](const BranchingCostFunction& f, const testkit::BranchingCatalog& catalog,
                                                   std::span<const Cost> c) {
    const DiscreteFunctionTable fb = f.table(c);
    if (fb != catalog.table(c, testkit::FunctionKind::kBranching)) ++table_mismatch;
    if (!check_exchange_axiom(fb, ExchangeMode::kMNatural).passed) ++violations;
  });
  return {table_mismatch == 0 && violations == 0,
          std::to_string(count) + " tables, " + std::to_string(table_mismatch) + " differ from enumeration, " +
              std::to_string(violations) + " exchange violations"};
}

Outcome fa_and_slices_m_convexity() {
  long long fa_tables = 0, slices = 0, violations = 0, empty_slices = 0;
  for_each_cost_vector([&](const BranchingCostFunction& f, const testkit::BranchingCatalog&, std::span<const Cost> c) {
    const DiscreteFunctionTable fb = f.table(c);
    const DiscreteFunctionTable fa = fb.slice(f.k());
    if (!fa.empty()) {
      ++fa_tables;
      if (!check_exchange_axiom(fa, ExchangeMode::kM).passed) ++violations;
    }
    for (int level = fb.min_level(); level <= fb.max_level(); ++level) {
      const DiscreteFunctionTable s = fb.slice(level);
      if (s.empty()) {
        ++empty_slices;
        continue;
      }
      ++slices;
      if (!check_exchange_axiom(s, ExchangeMode::kM).passed) ++violations;
    }
  });
  return {violations == 0 && empty_slices == 0,
          std::to_string(fa_tables) + " f_A tables and " + std::to_string(slices) + " slices, " +
              std::to_string(violations) + " violations, " + std::to_string(empty_slices) + " empty slices"};
}

Outcome base_polyhedron() {
  long long checked = 0, violations = 0;
  for_each_cost_vector([&](const BranchingCostFunction& f, const testkit::BranchingCatalog&, std::span<const Cost> c) {
    const DiscreteFunctionTable fa = f.table(c, true);
    if (fa.empty()) return;
    ++checked;
    if (!verify_argmin_base_polyhedron(fa, ExchangeMode::kM).passed) ++violations;
  });
  return {violations == 0, std::to_string(checked) + " f_A argmin sets, " + std::to_string(violations) + " violations"};
}

Outcome g_supermodularity() {
  std::mt19937 rng(kCostSeed + 8);
  long long pairs = 0, violations = 0;
  for (int n = 1; n <= 5; ++n)
    for (int trial = 0; trial < kSupermodularTrialsPerSize; ++trial) {
      const int k = 1 + static_cast<int>(rng() % 3), p = 1 + static_cast<int>(rng() % 3);
      std::uniform_int_distribution<int> entry(0, k);
      std::vector<DemandGroup> groups;
      while (static_cast<int>(groups.size()) < p) {
        std::vector<int> q(static_cast<std::size_t>(n));
        for (int& v : q) v = entry(rng);
        RootVector r(std::move(q));
        if (r.sum() >= k) groups.push_back({k, r});
      }
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x)
        for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
          ++pairs;
          const VertexSet X(x), Y(y);
          if (g_value(groups, X) + g_value(groups, Y) > g_value(groups, X | Y) + g_value(groups, X & Y)) ++violations;
        }
    }
  return {violations == 0, std::to_string(pairs) + " (X, Y) pairs, " + std::to_string(violations) + " violations"};
}

/// Brute minimum over common independent sets of exactly `target` elements.
template <class M1, class M2>
std::optional<Cost> brute_intersection(const M1& m1, const M2& m2, std::span<const Cost> w, int target) {
  std::optional<Cost> best;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m1.ground_size()); ++mask) {
    if (std::popcount(mask) != target) continue;
    const auto s = testkit::mask_to_indices(mask);
    if (!m1.independent(s) || !m2.independent(s)) continue;
    Cost c = 0;
    for (int e : s) c += w[static_cast<std::size_t>(e)];
    if (!best || c < *best) best = c;
  }
  return best;
}

Outcome intersection_vs_brute() {
  std::mt19937 rng(kCostSeed + 9);
  std::uniform_int_distribution<int> cost(-3, 3);
  long long problems = 0, mismatches = 0;
  auto check = [&](const auto& m1, const auto& m2, const std::vector<Cost>& w) {
    for (int target = 0; target <= m1.ground_size() + 1; ++target) {
      ++problems;
      const auto got = weighted_matroid_intersection(m1, m2, w, target);
      const auto expected = brute_intersection(m1, m2, w, target);
      if (got.has_value() != expected.has_value()) {
        ++mismatches;
        continue;
      }
      if (!got) continue;
      Cost c = 0;
      for (int e : *got) c += w[static_cast<std::size_t>(e)];
      if (c != *expected || !m1.independent(*got) || !m2.independent(*got)) ++mismatches;
    }
  };
  std::vector<Digraph> ground_sets;
  for (const auto& g : graphs()) ground_sets.push_back(g.digraph);
  // seven-element ground sets, beyond the m <= 6 sweep
  for (int i = 0; i < 300; ++i) {
    const int n = 2 + i % 3;
    std::vector<Arc> arcs;
    while (arcs.size() < 7) {
      const int t = static_cast<int>(rng() % static_cast<unsigned>(n)), h = static_cast<int>(rng() % static_cast<unsigned>(n));
      if (t != h) arcs.push_back({t, h, 0});
    }
    ground_sets.emplace_back(n, std::move(arcs));
  }
  for (const Digraph& d : ground_sets) {
    std::vector<Cost> w;
    for (int a = 0; a < d.num_arcs(); ++a) w.push_back(cost(rng));
    const GraphicMatroid graphic(d);
    check(graphic, HeadPartitionMatroid(d, std::vector<int>(static_cast<std::size_t>(d.num_vertices()), 1)), w);
    for (int k = 1; k <= 2; ++k) {
      const ForestUnionMatroid forests(d, k);
      for (const RootVector& x : sweep::root_vectors(d.num_vertices(), 0)) {
        bool in_box = true;
        std::vector<int> capacity;
        for (int v = 0; v < x.size(); ++v) {
          in_box = in_box && x[v] <= k;
          capacity.push_back(k - x[v]);
        }
        if (!in_box) continue;
        check(HeadPartitionMatroid(d, capacity), forests, w);
      }
    }
  }
  return {mismatches == 0, std::to_string(problems) + " intersection problems on " + std::to_string(ground_sets.size()) +
                               " ground sets, " + std::to_string(mismatches) + " mismatches"};
}

Outcome root_location() {
  std::mt19937 rng(kCostSeed + 10);
  std::uniform_int_distribution<int> arc_cost(-2, 4), open_cost(-3, 6);
  long long instances = 0, mismatches = 0, separable_checked = 0;
  for (const auto& g : graphs())
    for (int k = 1; k <= 2; ++k) {
      const int n = g.digraph.num_vertices();
      std::vector<Cost> c;
      for (int a = 0; a < g.digraph.num_arcs(); ++a) c.push_back(arc_cost(rng));
      const Digraph d = g.digraph.with_costs(c);
      const testkit::BranchingCatalog catalog(d, k);

      OpeningCost::Separable sep(static_cast<std::size_t>(n));
      for (auto& fv : sep)
        for (int j = 0; j <= k; ++j) fv.push_back(open_cost(rng));
      // table mode: random values on a random part of the box
      DiscreteFunctionTable tab(n);
      for (const RootVector& x : sweep::root_vectors(n, 0)) {
        bool in_box = true;
        for (int v = 0; v < n; ++v) in_box = in_box && x[v] <= k;
        if (in_box && rng() % 4 != 0) tab.set({x.values().begin(), x.values().end()}, open_cost(rng));
      }

      for (const OpeningCost& opening : {OpeningCost::separable(sep), OpeningCost::table(tab)}) {
        ++instances;
        const auto expected = testkit::brute_root_location(catalog, c, [&](const std::vector<int>& x) -> std::optional<Cost> {
          if (opening.is_separable()) {
            Cost s = 0;
            for (std::size_t v = 0; v < x.size(); ++v) s += sep[v][static_cast<std::size_t>(x[v])];
            return s;
          }
          return tab.at(x);
        });
        std::optional<Cost> got;
        try {
          const auto r = solve_root_location(d, k, opening);
          got = r.total;
          if (r.total != *opening(r.roots) + cost_of(d, r.arcs) || root_vector(d, r.arcs, k) != r.roots) ++mismatches;
        } catch (const std::domain_error&) {
        }
        if (got != expected) ++mismatches;
        if (k == 1 && opening.is_separable()) {
          ++separable_checked;
          if (solve_separable_k1(d, opening).total != got) ++mismatches;
        }
      }
    }
  return {mismatches == 0, std::to_string(instances) + " instances (" + std::to_string(separable_checked) +
                               " separable k=1 fast-path checks), " + std::to_string(mismatches) + " mismatches"};
}

Outcome micro_examples() {
  std::vector<std::string> failed;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  };
  using testkit::FunctionKind;
  const Digraph p1 = fixtures::p1(), p2 = fixtures::p2(), d2 = fixtures::d2(), c3 = fixtures::c3();

  // f_A(C3, k=1) = 2 at the three unit vectors
  const auto c3_fa1 = testkit::brute_function_table(c3, 1, FunctionKind::kArborescence);
  expect(c3_fa1 == fA_table(c3, 1), "C3 k=1 f_A table");
  expect(c3_fa1.min_value() == 2 && c3_fa1.argmin() == std::vector<std::vector<int>>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}},
         "C3 k=1 argmin");
  expect(mincost_k_arborescence(c3, 1)->cost == 2, "C3 k=1 min-cost arborescence");

  // f_A(C3, k=2) = 6, attained only at (1,1,0)
  const auto c3_fa2 = testkit::brute_function_table(c3, 2, FunctionKind::kArborescence);
  expect(c3_fa2 == fA_table(c3, 2), "C3 k=2 f_A table");
  expect(c3_fa2.min_value() == 6 && c3_fa2.argmin() == std::vector<std::vector<int>>{{1, 1, 0}}, "C3 k=2 argmin");
  expect(mincost_k_arborescence(c3, 2)->roots == RootVector{1, 1, 0}, "C3 k=2 descent");

  // P2 f_B table and D2 f_B(2,1)
  const auto p2_fb = testkit::brute_function_table(p2, 1, FunctionKind::kBranching);
  expect(p2_fb == fB_table(p2, 1) && p2_fb.at(std::vector<int>{1, 0}) == 3 && p2_fb.at(std::vector<int>{0, 1}) == 5 &&
             p2_fb.at(std::vector<int>{1, 1}) == 0,
         "P2 f_B table");
  expect(testkit::brute_function_table(d2, 2, FunctionKind::kBranching).at(std::vector<int>{2, 1}) == 1 &&
             eval_fB(d2, 2, {2, 1}) == 1,
         "D2 f_B(2,1)");

  // packing examples
  const PackingInstance p1_bad(p1, 1, {{0, 1}}), d2_two(d2, 1, {{1, 0}, {1, 0}}), d2_one(d2, 2, {{2, 1}});
  expect(!testkit::brute_packing_exists(p1_bad) && packing_deficiency(p1_bad).min_value == -1, "P1 infeasible");
  expect(testkit::brute_packing_exists(d2_two) && is_packing_feasible(d2_two), "D2 two arborescences");
  expect(testkit::brute_packing_exists(d2_one) && is_packing_feasible(d2_one), "D2 k=2");

  // root location on P1: optimum 5 at x=(1,0)
  const OpeningCost open = OpeningCost::separable({{10, 2}, {0, 4}});
  const testkit::BranchingCatalog p1_catalog(p1, 1);
  const auto brute = testkit::brute_root_location(p1_catalog, p1.costs(), [](const std::vector<int>& x) -> std::optional<Cost> {
    const Cost f1[] = {10, 2}, f2[] = {0, 4};
    return f1[x[0]] + f2[x[1]];
  });
  const auto solved = solve_root_location(p1, 1, open);
  expect(brute == 5 && solved.total == 5 && solved.roots == RootVector{1, 0} && solve_separable_k1(p1, open).total == 5,
         "P1 root location");

  // P2 root location examples
  expect(solve_root_location(p2, 1, OpeningCost::separable({{0, 10}, {0, 10}})).total == 13, "P2 f_P = 10 x(V)");
  expect(solve_separable_k1(p2, OpeningCost::separable({{0, 0}, {0, 6}})).total == 3, "P2 separable");

  std::string d = "13 fixture checks";
  for (const auto& f : failed) d += "; failed: " + f;
  return {failed.empty(), d};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  double limit_seconds;  // 0: no runtime target
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  const std::vector<Criterion> criteria = {
      {0, "sweep covers every labeled digraph with n<=4, m<=6", sweep_integrity, 0},
      {1, "packing theorem equivalence", packing_equivalence, kPackingEquivalenceSeconds},
      {2, "constructive packing soundness", packing_soundness, 0},
      {3, "Edmonds specialization (k=1)", edmonds_specialization, 0},
      {4, "p=2 two-condition form", two_group_remark, 0},
      {5, "f_B equals enumeration and is M-natural-convex", fb_mnat_convexity, 0},
      {6, "f_A and every hyperplane slice are M-convex", fa_and_slices_m_convexity, 0},
      {7, "argmin f_A is an M-convex set (base polyhedron)", base_polyhedron, 0},
      {8, "supermodularity of g", g_supermodularity, 0},
      {9, "weighted matroid intersection vs brute force", intersection_vs_brute, 0},
      {10, "root location vs enumeration over (x, F)", root_location, kRootLocationSeconds},
      {11, "worked micro-examples", micro_examples, 0},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = std::to_string(seconds).substr(0, std::to_string(seconds).find('.') + 2) + "s";
    if (c.limit_seconds > 0) {
      timing += " (limit " + std::to_string(static_cast<int>(c.limit_seconds)) + "s)";
      if (seconds > c.limit_seconds) o.passed = false;
    }
    if (!o.passed) ++failures;
    std::printf("%s [%2d] %s: %s, %s\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
