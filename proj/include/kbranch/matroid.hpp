#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "kbranch/digraph.hpp"

namespace kbranch {

/// Anything answering independence queries over ground elements 0..ground_size()-1.
template <class M>
concept MatroidOracle = requires(const M& m, std::span<const int> elements) {
  { m.ground_size() } -> std::convertible_to<int>;
  { m.independent(elements) } -> std::convertible_to<bool>;
};

/// Type-erased oracle.
class IndependenceOracle {
 public:
  using Test = std::function<bool(std::span<const int>)>;

  IndependenceOracle(int ground_size, Test test) : ground_size_(ground_size), test_(std::move(test)) {}
  template <MatroidOracle M>
    requires(!std::same_as<std::remove_cvref_t<M>, IndependenceOracle>)
  explicit IndependenceOracle(M m)
      : ground_size_(m.ground_size()),
        test_([m = std::move(m)](std::span<const int> s) { return m.independent(s); }) {}

  int ground_size() const { return ground_size_; }
  bool independent(std::span<const int> elements) const { return test_(elements); }

 private:
  int ground_size_;
  Test test_;
};

class FreeMatroid {
 public:
  explicit FreeMatroid(int ground_size) : ground_size_(ground_size) {}
  int ground_size() const { return ground_size_; }
  bool independent(std::span<const int>) const { return true; }

 private:
  int ground_size_;
};

/// Ground set = arcs of a digraph; a set is independent when at most
/// capacity[v] of its arcs enter each vertex v.
class HeadPartitionMatroid {
 public:
  HeadPartitionMatroid(const Digraph& d, std::vector<int> capacity) : capacity_(std::move(capacity)) {
    if (static_cast<int>(capacity_.size()) != d.num_vertices())
      throw std::invalid_argument("capacity vector length differs from vertex count");
    heads_.reserve(static_cast<std::size_t>(d.num_arcs()));
    for (const Arc& a : d.arcs()) heads_.push_back(a.head);
  }

  int ground_size() const { return static_cast<int>(heads_.size()); }
  bool independent(std::span<const int> elements) const {
    scratch_.assign(capacity_.size(), 0);
    for (int e : elements) {
      auto h = static_cast<std::size_t>(heads_[static_cast<std::size_t>(e)]);
      if (++scratch_[h] > capacity_[h]) return false;
    }
    return true;
  }

 private:
  std::vector<int> capacity_;
  std::vector<Vertex> heads_;
  mutable std::vector<int> scratch_;
};

/// Graphic matroid of the underlying undirected multigraph.
class GraphicMatroid {
 public:
  explicit GraphicMatroid(const Digraph& d) : d_(d) {}
  int ground_size() const { return d_.num_arcs(); }
  bool independent(std::span<const int> elements) const { return is_forest(d_, elements); }

 private:
  Digraph d_;
};

struct ForestPartition {
  /// forests[j] holds the arcs of class j, sorted.
  std::vector<std::vector<ArcIndex>> forests;
};

/// Certificate that no k-forest partition exists: |F[X]| > k(|X| - 1).
struct NashWilliamsWitness {
  VertexSet vertices;
  int arcs_inside = 0;
};

using ForestPartitionResult = std::variant<ForestPartition, NashWilliamsWitness>;

namespace detail {

/// Path between s and t in the forest given by `arcs`, as arc indices; empty if disconnected.
inline std::vector<ArcIndex> forest_path(const Digraph& d, const std::vector<ArcIndex>& arcs, Vertex s, Vertex t) {
  const auto n = static_cast<std::size_t>(d.num_vertices());
  std::vector<std::vector<std::pair<Vertex, ArcIndex>>> adj(n);
  for (ArcIndex a : arcs) {
    const Arc& arc = d.arc(a);
    adj[static_cast<std::size_t>(arc.tail)].emplace_back(arc.head, a);
    adj[static_cast<std::size_t>(arc.head)].emplace_back(arc.tail, a);
  }
  std::vector<ArcIndex> via(n, -1);
  std::vector<char> seen(n, 0);
  std::deque<Vertex> queue{s};
  seen[static_cast<std::size_t>(s)] = 1;
  while (!queue.empty()) {
    Vertex x = queue.front();
    queue.pop_front();
    if (x == t) break;
    for (auto [y, a] : adj[static_cast<std::size_t>(x)]) {
      if (seen[static_cast<std::size_t>(y)]) continue;
      seen[static_cast<std::size_t>(y)] = 1;
      via[static_cast<std::size_t>(y)] = a;
      queue.push_back(y);
    }
  }
  std::vector<ArcIndex> path;
  if (!seen[static_cast<std::size_t>(t)]) return path;
  for (Vertex x = t; x != s;) {
    ArcIndex a = via[static_cast<std::size_t>(x)];
    path.push_back(a);
    const Arc& arc = d.arc(a);
    x = arc.tail == x ? arc.head : arc.tail;
  }
  return path;
}

inline int arcs_inside(const Digraph& d, std::span<const ArcIndex> f, VertexSet x) {
  int count = 0;
  for (ArcIndex a : f)
    if (x.contains(d.arc(a).tail) && x.contains(d.arc(a).head)) ++count;
  return count;
}

}  // namespace detail

/// Splits F into k forests of the underlying undirected multigraph using
/// Edmonds' matroid partition (shortest augmenting paths in the exchange
/// graph). On failure returns a vertex set X with |F[X]| > k(|X|-1).
inline ForestPartitionResult partition_into_forests(const Digraph& d, const ArcSubset& f, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  f.check_within(d);
  const auto m = static_cast<std::size_t>(d.num_arcs());
  std::vector<std::vector<ArcIndex>> forests(static_cast<std::size_t>(k));
  std::vector<int> owner(m, -1);

  for (ArcIndex e : f) {
    // BFS over arcs; parent[y] = x means x takes y's slot in y's forest.
    std::vector<ArcIndex> parent(m, -2);
    std::vector<ArcIndex> reached{e};
    std::deque<ArcIndex> queue{e};
    parent[static_cast<std::size_t>(e)] = -1;
    ArcIndex end = -1;
    int end_forest = -1;
    while (!queue.empty() && end < 0) {
      ArcIndex x = queue.front();
      queue.pop_front();
      for (int j = 0; j < k && end < 0; ++j) {
        if (owner[static_cast<std::size_t>(x)] == j) continue;
        auto path = detail::forest_path(d, forests[static_cast<std::size_t>(j)], d.arc(x).tail, d.arc(x).head);
        if (path.empty()) {
          end = x;
          end_forest = j;
          break;
        }
        for (ArcIndex y : path) {
          if (parent[static_cast<std::size_t>(y)] != -2) continue;
          parent[static_cast<std::size_t>(y)] = x;
          reached.push_back(y);
          queue.push_back(y);
        }
      }
    }

    if (end < 0) {
      // Every forest spans `reached`, so |reached| = k * rank(reached) + 1.
      detail::UnionFind uf(d.num_vertices());
      for (ArcIndex a : reached) uf.unite(d.arc(a).tail, d.arc(a).head);
      std::vector<std::uint64_t> component(static_cast<std::size_t>(d.num_vertices()), 0);
      for (ArcIndex a : reached) {
        int root = uf.find(d.arc(a).tail);
        component[static_cast<std::size_t>(root)] |= (std::uint64_t{1} << d.arc(a).tail) | (std::uint64_t{1} << d.arc(a).head);
      }
      std::optional<NashWilliamsWitness> best;
      for (std::uint64_t mask : component) {
        if (mask == 0) continue;
        VertexSet x(mask);
        int inside = detail::arcs_inside(d, f.indices(), x);
        if (inside > k * (x.size() - 1) && (!best || x.front() < best->vertices.front()))
          best = NashWilliamsWitness{x, inside};
      }
      if (!best) throw std::logic_error("matroid partition failed without a Nash-Williams witness");
      return *best;
    }

    // Shift along the augmenting path.
    int target = end_forest;
    for (ArcIndex x = end; x != -1; x = parent[static_cast<std::size_t>(x)]) {
      int previous = owner[static_cast<std::size_t>(x)];
      if (previous >= 0) std::erase(forests[static_cast<std::size_t>(previous)], x);
      forests[static_cast<std::size_t>(target)].push_back(x);
      owner[static_cast<std::size_t>(x)] = target;
      target = previous;
    }
  }

  for (auto& forest : forests) {
    std::sort(forest.begin(), forest.end());
    if (!is_forest(d, forest)) throw std::logic_error("matroid partition produced a non-forest class");
  }
  return ForestPartition{std::move(forests)};
}

/// Independent iff the set splits into k forests (k-fold union of the graphic
/// matroid). Answers are memoized for ground sets of at most 20 arcs.
class ForestUnionMatroid {
 public:
  ForestUnionMatroid(const Digraph& d, int k) : d_(d), k_(k) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (d.num_arcs() <= kMaxMemoArcs) memo_.assign(std::size_t{1} << d.num_arcs(), kUnknown);
  }

  int ground_size() const { return d_.num_arcs(); }
  int k() const { return k_; }

  bool independent(std::span<const int> elements) const {
    if (memo_.empty()) return compute(elements);
    std::uint32_t key = 0;
    for (int e : elements) key |= std::uint32_t{1} << e;
    auto& slot = memo_[key];
    if (slot == kUnknown) slot = compute(elements) ? kYes : kNo;
    return slot == kYes;
  }

 private:
  static constexpr int kMaxMemoArcs = 20;
  static constexpr char kUnknown = 0, kYes = 1, kNo = 2;

  bool compute(std::span<const int> elements) const {
    return std::holds_alternative<ForestPartition>(
        partition_into_forests(d_, ArcSubset(std::vector<ArcIndex>(elements.begin(), elements.end())), k_));
  }

  Digraph d_;
  int k_;
  mutable std::vector<char> memo_;
};

/// Minimum-weight common independent set of exactly `target` elements, by
/// successive shortest augmenting paths in the exchange graph. Returns
/// nullopt when the largest common independent set is smaller than target.
template <MatroidOracle M1, MatroidOracle M2>
std::optional<std::vector<int>> weighted_matroid_intersection(const M1& m1, const M2& m2,
                                                              std::span<const Cost> weights, int target) {
  const int ground = m1.ground_size();
  if (m2.ground_size() != ground) throw std::invalid_argument("oracles have different ground sets");
  if (static_cast<int>(weights.size()) != ground) throw std::invalid_argument("weight vector length differs from ground set");
  if (target < 0) throw std::invalid_argument("negative target cardinality");
  if (target > ground) return std::nullopt;

  const auto g = static_cast<std::size_t>(ground);
  std::vector<char> in_set(g, 0);
  std::vector<int> current;
  std::vector<int> probe;
  probe.reserve(g + 1);

  auto with_swap = [&](int out, int in) -> std::span<const int> {
    probe.clear();
    for (int e : current)
      if (e != out) probe.push_back(e);
    if (in >= 0) probe.push_back(in);
    return probe;
  };

  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
  std::vector<Cost> dist(g);
  std::vector<int> hops(g);
  std::vector<int> pred(g);
  std::vector<char> sink(g);
  std::vector<std::pair<int, int>> edges;

  for (int step = 0; step < target; ++step) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(hops.begin(), hops.end(), 0);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(sink.begin(), sink.end(), 0);
    for (int y = 0; y < ground; ++y) {
      if (in_set[static_cast<std::size_t>(y)]) continue;
      if (m1.independent(with_swap(-1, y))) {
        dist[static_cast<std::size_t>(y)] = weights[static_cast<std::size_t>(y)];
        hops[static_cast<std::size_t>(y)] = 1;
      }
      if (m2.independent(with_swap(-1, y))) sink[static_cast<std::size_t>(y)] = 1;
    }
    edges.clear();
    for (int x : current) {
      for (int y = 0; y < ground; ++y) {
        if (in_set[static_cast<std::size_t>(y)]) continue;
        if (m1.independent(with_swap(x, y))) edges.emplace_back(x, y);
        if (m2.independent(with_swap(x, y))) edges.emplace_back(y, x);
      }
    }
    auto length = [&](int v) {
      return in_set[static_cast<std::size_t>(v)] ? -weights[static_cast<std::size_t>(v)]
                                                 : weights[static_cast<std::size_t>(v)];
    };
    // Bellman-Ford on (length, hops) lexicographically.
    bool changed = true;
    int rounds = 0;
    while (changed) {
      changed = false;
      if (++rounds > ground + 1) throw std::logic_error("negative cycle in exchange graph");
      for (auto [u, v] : edges) {
        auto su = static_cast<std::size_t>(u), sv = static_cast<std::size_t>(v);
        if (dist[su] >= kInf) continue;
        Cost nd = dist[su] + length(v);
        int nh = hops[su] + 1;
        if (nd < dist[sv] || (nd == dist[sv] && nh < hops[sv])) {
          dist[sv] = nd;
          hops[sv] = nh;
          pred[sv] = u;
          changed = true;
        }
      }
    }
    int best = -1;
    for (int y = 0; y < ground; ++y) {
      auto sy = static_cast<std::size_t>(y);
      if (!sink[sy] || dist[sy] >= kInf) continue;
      if (best < 0 || dist[sy] < dist[static_cast<std::size_t>(best)] ||
          (dist[sy] == dist[static_cast<std::size_t>(best)] && hops[sy] < hops[static_cast<std::size_t>(best)]))
        best = y;
    }
    if (best < 0) return std::nullopt;
    for (int v = best; v >= 0; v = pred[static_cast<std::size_t>(v)]) in_set[static_cast<std::size_t>(v)] ^= 1;
    current.clear();
    for (int e = 0; e < ground; ++e)
      if (in_set[static_cast<std::size_t>(e)]) current.push_back(e);
  }

  if (!m1.independent(current) || !m2.independent(current))
    throw std::logic_error("matroid intersection returned a dependent set");
  return current;
}

}  // namespace kbranch
