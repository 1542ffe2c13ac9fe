#pragma once

#include <algorithm>
#include <variant>

#include "kbranch/digraph.hpp"
#include "kbranch/matroid.hpp"

namespace kbranch {

// A set of arcs is a union of k arc-disjoint branchings exactly when every
// in-degree is at most k and the set splits into k undirected forests.

inline bool is_k_branching(const Digraph& d, const ArcSubset& f, int k) {
  if (k < 1) return false;
  std::vector<int> deg = in_degrees(d, f);
  if (std::any_of(deg.begin(), deg.end(), [k](int x) { return x > k; })) return false;
  return std::holds_alternative<ForestPartition>(partition_into_forests(d, f, k));
}

/// A k-branching whose root vector sums to k; each of its branchings then has a single root.
inline bool is_k_arborescence(const Digraph& d, const ArcSubset& f, int k) {
  return is_k_branching(d, f, k) && f.size() == k * (d.num_vertices() - 1);
}

}  // namespace kbranch
