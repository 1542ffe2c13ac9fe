#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "kbranch/digraph.hpp"
#include "kbranch/testkit.hpp"

namespace helpers {

using namespace kbranch;

inline Digraph random_digraph(std::mt19937& rng, int n, int m, int cost_lo = 0, int cost_hi = 0) {
  std::uniform_int_distribution<int> vertex(0, n - 1);
  std::uniform_int_distribution<int> cost(cost_lo, cost_hi);
  std::vector<Arc> arcs;
  if (n == 1) m = 0;  // no loop-free arcs exist
  while (static_cast<int>(arcs.size()) < m) {
    int t = vertex(rng), h = vertex(rng);
    if (t != h) arcs.push_back({t, h, cost(rng)});
  }
  return Digraph(n, std::move(arcs));
}

inline ArcSubset subset_from_mask(std::uint32_t mask) { return ArcSubset(testkit::mask_to_indices(mask)); }

/// Cheapest common independent set of exactly `target` elements, by trying every subset.
template <class M1, class M2>
std::optional<Cost> brute_intersection_weight(const M1& m1, const M2& m2, std::span<const Cost> w, int target) {
  std::optional<Cost> best;
  const int ground = m1.ground_size();
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << ground); ++mask) {
    if (std::popcount(mask) != target) continue;
    const std::vector<int> s = testkit::mask_to_indices(mask);
    if (!m1.independent(s) || !m2.independent(s)) continue;
    Cost c = 0;
    for (int e : s) c += w[static_cast<std::size_t>(e)];
    if (!best || c < *best) best = c;
  }
  return best;
}

/// Random valid root vector: entries in [0, k], sum at least k.
inline RootVector random_root_vector(std::mt19937& rng, int n, int k) {
  std::uniform_int_distribution<int> entry(0, k);
  while (true) {
    std::vector<int> q(static_cast<std::size_t>(n));
    for (int& x : q) x = entry(rng);
    RootVector r(std::move(q));
    if (r.sum() >= k) return r;
  }
}

}  // namespace helpers
