#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kbranch/digraph.hpp"
#include "kbranch/exchange.hpp"
#include "kbranch/feasibility.hpp"
#include "kbranch/function_table.hpp"
#include "kbranch/matroid.hpp"

namespace kbranch {

struct MincostResult {
  ArcSubset arcs;
  RootVector roots;
  Cost cost = 0;
};

/// The function x -> min{c(F) : F a k-branching with r_F = x} on a fixed
/// digraph and k. The domain test is the single-vector cut condition; the
/// value is a weighted matroid intersection between "exactly k - x(v) arcs
/// enter v" and "splits into k forests". Costs may vary per call, so one
/// instance serves many cost vectors on the same structure.
class BranchingCostFunction {
 public:
  BranchingCostFunction(const Digraph& d, int k)
      : d_(d), k_(k), ends_(detail::arc_ends(d)), forests_(d, k) {
    if (k < 1) throw std::invalid_argument("k must be positive");
  }

  const Digraph& digraph() const { return d_; }
  int k() const { return k_; }

  bool in_domain(const RootVector& x) const {
    if (x.size() != d_.num_vertices()) throw std::invalid_argument("vector length differs from vertex count");
    for (int v = 0; v < x.size(); ++v)
      if (x[v] < 0 || x[v] > k_) return false;
    if (x.sum() < k_) return false;
    const DemandGroup group{k_, x};
    return detail::minimize_deficiency(d_.num_vertices(), ends_, std::span(&group, 1), {}, {}, Engine::kAuto).feasible;
  }

  /// Cheapest k-branching with root vector x, or nullopt outside the domain.
  std::optional<MincostResult> solve(const RootVector& x, std::span<const Cost> costs) const {
    if (!in_domain(x)) return std::nullopt;
    return solve_in_domain(x, costs);
  }
  std::optional<MincostResult> solve(const RootVector& x) const { return solve(x, d_.costs()); }

  Value value(const RootVector& x, std::span<const Cost> costs) const {
    auto r = solve(x, costs);
    if (!r) return std::nullopt;
    return r->cost;
  }
  Value value(const RootVector& x) const { return value(x, d_.costs()); }

  /// dom f_B in lexicographic order. Computed on first use and kept, since it
  /// does not depend on the costs.
  const std::vector<RootVector>& domain() const {
    if (domain_) return *domain_;
    const int n = d_.num_vertices();
    std::vector<RootVector> points;
    RootVector x = RootVector::constant(n, 0);
    while (true) {
      if (in_domain(x)) points.push_back(x);
      int i = n - 1;
      while (i >= 0 && x[i] == k_) x[i--] = 0;
      if (i < 0) break;
      ++x[i];
    }
    domain_ = std::move(points);
    return *domain_;
  }

  /// Full table over {0..k}^V; with `hyperplane_only` just the x(V) = k slice.
  DiscreteFunctionTable table(std::span<const Cost> costs, bool hyperplane_only = false) const {
    DiscreteFunctionTable out(d_.num_vertices());
    for (const RootVector& x : domain())
      if (!hyperplane_only || x.sum() == k_)
        out.set(std::vector<int>(x.values().begin(), x.values().end()), solve_in_domain(x, costs).cost);
    return out;
  }
  DiscreteFunctionTable table(bool hyperplane_only = false) const { return table(d_.costs(), hyperplane_only); }

 private:
  MincostResult solve_in_domain(const RootVector& x, std::span<const Cost> costs) const {
    std::vector<int> capacity(static_cast<std::size_t>(x.size()));
    for (int v = 0; v < x.size(); ++v) capacity[static_cast<std::size_t>(v)] = k_ - x[v];
    HeadPartitionMatroid heads(d_, std::move(capacity));
    const int target = k_ * d_.num_vertices() - x.sum();
    auto chosen = weighted_matroid_intersection(heads, forests_, costs, target);
    if (!chosen) throw std::logic_error("cut condition holds but no k-branching with root vector " + x.to_string());
    ArcSubset arcs(std::move(*chosen));
    Cost total = 0;
    for (ArcIndex a : arcs) total += costs[static_cast<std::size_t>(a)];
    return MincostResult{std::move(arcs), x, total};
  }

  Digraph d_;
  int k_;
  std::vector<detail::ArcEnds> ends_;
  ForestUnionMatroid forests_;
  mutable std::optional<std::vector<RootVector>> domain_;
};

inline Value eval_fB(const Digraph& d, int k, const RootVector& x) { return BranchingCostFunction(d, k).value(x); }

/// f_B restricted to the hyperplane x(V) = k.
inline Value eval_fA(const Digraph& d, int k, const RootVector& x) {
  if (x.sum() != k) return std::nullopt;
  return eval_fB(d, k, x);
}

inline DiscreteFunctionTable fB_table(const Digraph& d, int k) { return BranchingCostFunction(d, k).table(false); }
inline DiscreteFunctionTable fA_table(const Digraph& d, int k) { return BranchingCostFunction(d, k).table(true); }

/// Steepest descent for an M♮-convex function: from x, move to the best of
/// x - e_u + e_v over u, v in V ∪ {none}; ties go to the lexicographically
/// smallest (u, v) with "none" first. Stops at a local minimum, which is global.
template <class F>
RootVector mnat_steepest_descent(F&& f, RootVector x) {
  Value current = f(x);
  if (!current) throw std::invalid_argument("steepest descent must start inside the domain");
  const int n = x.size();
  while (true) {
    std::optional<std::pair<RootVector, Cost>> best;
    for (int u = -1; u < n; ++u) {
      for (int v = -1; v < n; ++v) {
        if (u == v) continue;
        RootVector y = x;
        if (u >= 0) --y[u];
        if (v >= 0) ++y[v];
        Value fy = f(y);
        if (fy && *fy < *current && (!best || *fy < best->second)) best.emplace(std::move(y), *fy);
      }
    }
    if (!best) return x;
    x = std::move(best->first);
    current = best->second;
  }
}

/// Steepest descent for an M-convex function over moves x - e_u + e_v.
template <class F>
RootVector m_steepest_descent(F&& f, RootVector x) {
  Value current = f(x);
  if (!current) throw std::invalid_argument("steepest descent must start inside the domain");
  const int n = x.size();
  while (true) {
    std::optional<std::pair<RootVector, Cost>> best;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        RootVector y = x;
        --y[u];
        ++y[v];
        Value fy = f(y);
        if (fy && *fy < *current && (!best || *fy < best->second)) best.emplace(std::move(y), *fy);
      }
    }
    if (!best) return x;
    x = std::move(best->first);
    current = best->second;
  }
}

/// Minimum-cost k-branching (the empty set is always one).
inline MincostResult mincost_k_branching(const Digraph& d, int k) {
  BranchingCostFunction f(d, k);
  const RootVector start = RootVector::constant(d.num_vertices(), k);
  const RootVector x = mnat_steepest_descent([&](const RootVector& y) { return f.value(y); }, start);
  return *f.solve(x);
}

namespace detail {

/// A root vector with x(V) = k in dom f_B, found by lowering coordinates of
/// k·1 one unit at a time. dom f_B is M♮-convex, so a lowering step exists
/// whenever x(V) exceeds the minimum level; getting stuck above k proves the
/// hyperplane misses the domain.
inline std::optional<RootVector> hyperplane_start(const BranchingCostFunction& f) {
  const int n = f.digraph().num_vertices();
  RootVector x = RootVector::constant(n, f.k());
  while (x.sum() > f.k()) {
    bool lowered = false;
    for (Vertex u = 0; u < n && !lowered; ++u) {
      if (x[u] == 0) continue;
      --x[u];
      if (f.in_domain(x)) lowered = true;
      else ++x[u];
    }
    if (!lowered) return std::nullopt;
  }
  return x;
}

}  // namespace detail

/// Minimum-cost k-arborescence, or nullopt if D has no k-arborescence.
inline std::optional<MincostResult> mincost_k_arborescence(const Digraph& d, int k) {
  BranchingCostFunction f(d, k);
  auto start = detail::hyperplane_start(f);
  if (!start) return std::nullopt;
  const RootVector x = m_steepest_descent([&](const RootVector& y) { return f.value(y); }, *start);
  return *f.solve(x);
}

}  // namespace kbranch
