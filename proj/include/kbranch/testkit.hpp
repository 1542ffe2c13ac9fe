#pragma once

// Brute-force oracles. Nothing here calls the production engines: cut
// counting, branching tests and decomposition search are written again from
// the definitions so the two sides fail independently.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kbranch/digraph.hpp"
#include "kbranch/feasibility.hpp"
#include "kbranch/function_table.hpp"

namespace kbranch::testkit {

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct EnumerationBudget {
  int max_arcs = 10;
  int max_vertices = 5;
  int max_k = 3;
  int max_p = 3;

  void check(const Digraph& d, int k, int p = 1) const {
    if (d.num_arcs() > max_arcs || d.num_vertices() > max_vertices || k > max_k || p > max_p)
      throw BudgetExceeded("enumeration budget exceeded (limits: m<=" + std::to_string(max_arcs) + ", n<=" +
                           std::to_string(max_vertices) + ", k<=" + std::to_string(max_k) +
                           ", p<=" + std::to_string(max_p) + ")");
  }
};

enum class FunctionKind { kBranching, kArborescence };

/// Arcs of F from outside X into X; F and X are bit masks.
inline int cut_into(const Digraph& d, std::uint32_t arcs, std::uint64_t x) {
  int count = 0;
  for (int a = 0; a < d.num_arcs(); ++a) {
    if (!((arcs >> a) & 1U)) continue;
    const bool head_in = (x >> d.arc(a).head) & 1U;
    const bool tail_in = (x >> d.arc(a).tail) & 1U;
    if (head_in && !tail_in) ++count;
  }
  return count;
}

/// Definition check: in-degree <= 1 and the undirected multigraph is acyclic
/// (detected by DFS that refuses to reuse the arc it arrived on).
inline bool is_branching_by_definition(const Digraph& d, std::uint32_t arcs) {
  const int n = d.num_vertices();
  std::vector<int> indeg(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(n));
  for (int a = 0; a < d.num_arcs(); ++a) {
    if (!((arcs >> a) & 1U)) continue;
    const Arc& arc = d.arc(a);
    if (++indeg[static_cast<std::size_t>(arc.head)] > 1) return false;
    adj[static_cast<std::size_t>(arc.tail)].emplace_back(arc.head, a);
    adj[static_cast<std::size_t>(arc.head)].emplace_back(arc.tail, a);
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::function<bool(int, int)> acyclic = [&](int v, int via) {
    seen[static_cast<std::size_t>(v)] = 1;
    for (auto [w, a] : adj[static_cast<std::size_t>(v)]) {
      if (a == via) continue;
      if (seen[static_cast<std::size_t>(w)] || !acyclic(w, a)) return false;
    }
    return true;
  };
  for (int v = 0; v < n; ++v)
    if (!seen[static_cast<std::size_t>(v)] && !acyclic(v, -1)) return false;
  return true;
}

/// Exhaustive search for a coloring of F into k classes that are all branchings.
inline bool splits_into_branchings(const Digraph& d, std::uint32_t arcs, int k) {
  std::vector<int> members;
  for (int a = 0; a < d.num_arcs(); ++a)
    if ((arcs >> a) & 1U) members.push_back(a);
  std::vector<std::uint32_t> classes(static_cast<std::size_t>(k), 0);
  std::function<bool(std::size_t)> assign = [&](std::size_t i) {
    if (i == members.size()) return true;
    for (int c = 0; c < k; ++c) {
      auto& cls = classes[static_cast<std::size_t>(c)];
      cls |= std::uint32_t{1} << members[i];
      if (is_branching_by_definition(d, cls) && assign(i + 1)) return true;
      cls &= ~(std::uint32_t{1} << members[i]);
      if (cls == 0) break;  // empty classes are interchangeable
    }
    return false;
  };
  return assign(0);
}

inline std::vector<ArcIndex> mask_to_indices(std::uint32_t mask) {
  std::vector<ArcIndex> out;
  for (int a = 0; a < 32; ++a)
    if ((mask >> a) & 1U) out.push_back(a);
  return out;
}

/// Every k-branching of D with its root vector, computed once per (D, k).
class BranchingCatalog {
 public:
  struct Entry {
    std::uint32_t arcs;
    std::vector<int> roots;
  };

  BranchingCatalog(const Digraph& d, int k, const EnumerationBudget& budget = {}) : d_(d), k_(k) {
    budget.check(d, k);
    const int m = d.num_arcs();
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
      std::vector<int> roots(static_cast<std::size_t>(d.num_vertices()), k);
      bool ok = true;
      for (int a = 0; a < m && ok; ++a)
        if ((mask >> a) & 1U) ok = --roots[static_cast<std::size_t>(d.arc(a).head)] >= 0;
      if (ok && splits_into_branchings(d, mask, k)) {
        by_roots_[roots].push_back(mask);
        entries_.push_back({mask, std::move(roots)});
      }
    }
    std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
      return mask_to_indices(a.arcs) < mask_to_indices(b.arcs);
    });
  }

  const std::vector<Entry>& entries() const { return entries_; }
  int k() const { return k_; }

  std::vector<ArcSubset> arc_sets() const {
    std::vector<ArcSubset> out;
    for (const Entry& e : entries_) out.emplace_back(mask_to_indices(e.arcs));
    return out;
  }

  /// Whether arc-disjoint k-branchings with exactly these root vectors exist.
  bool packing_exists(const std::vector<std::vector<int>>& q) const {
    std::function<bool(std::size_t, std::uint32_t)> pick = [&](std::size_t i, std::uint32_t used) {
      if (i == q.size()) return true;
      auto it = by_roots_.find(q[i]);
      if (it == by_roots_.end()) return false;
      for (std::uint32_t mask : it->second)
        if ((mask & used) == 0 && pick(i + 1, used | mask)) return true;
      return false;
    };
    return pick(0, 0);
  }

  /// min cost per achieved root vector.
  DiscreteFunctionTable table(std::span<const Cost> costs, FunctionKind kind) const {
    DiscreteFunctionTable out(d_.num_vertices());
    std::map<std::vector<int>, Cost> best;
    for (const Entry& e : entries_) {
      if (kind == FunctionKind::kArborescence) {
        int s = 0;
        for (int r : e.roots) s += r;
        if (s != k_) continue;
      }
      Cost c = 0;
      for (int a = 0; a < d_.num_arcs(); ++a)
        if ((e.arcs >> a) & 1U) c += costs[static_cast<std::size_t>(a)];
      auto [it, inserted] = best.emplace(e.roots, c);
      if (!inserted) it->second = std::min(it->second, c);
    }
    for (auto& [x, c] : best) out.set(x, c);
    return out;
  }

 private:
  Digraph d_;
  int k_;
  std::vector<Entry> entries_;
  std::map<std::vector<int>, std::vector<std::uint32_t>> by_roots_;
};

/// All k-branchings, ordered lexicographically by arc-id list.
inline std::vector<ArcSubset> enumerate_k_branchings(const Digraph& d, int k, const EnumerationBudget& budget = {}) {
  return BranchingCatalog(d, k, budget).arc_sets();
}

inline bool brute_packing_exists(const PackingInstance& instance, const EnumerationBudget& budget = {}) {
  budget.check(instance.digraph(), instance.k(), instance.p());
  BranchingCatalog catalog(instance.digraph(), instance.k(), budget);
  std::vector<std::vector<int>> q;
  for (const RootVector& qi : instance.q()) q.emplace_back(qi.values().begin(), qi.values().end());
  return catalog.packing_exists(q);
}

inline DiscreteFunctionTable brute_function_table(const Digraph& d, int k, FunctionKind kind,
                                                  const EnumerationBudget& budget = {}) {
  return BranchingCatalog(d, k, budget).table(d.costs(), kind);
}

/// min over k-branchings F of opening(r_F) + c(F); nullopt when every term is +inf.
inline std::optional<Cost> brute_root_location(const BranchingCatalog& catalog, std::span<const Cost> costs,
                                               const std::function<std::optional<Cost>(const std::vector<int>&)>& opening) {
  std::optional<Cost> best;
  for (const auto& e : catalog.entries()) {
    const auto open = opening(e.roots);
    if (!open) continue;
    Cost total = *open;
    for (ArcIndex a : mask_to_indices(e.arcs)) total += costs[static_cast<std::size_t>(a)];
    if (!best || total < *best) best = total;
  }
  return best;
}

}  // namespace kbranch::testkit
