#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kbranch/vertex_set.hpp"

namespace kbranch {

using Cost = std::int64_t;

/// Arcs are addressed by their 0-based position; the printed id is position + 1.
using ArcIndex = int;

struct Arc {
  Vertex tail = 0;
  Vertex head = 0;
  Cost cost = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Directed multigraph on vertices 0..n-1 with integer arc costs.
/// Parallel and antiparallel arcs are allowed, self-loops are not.
class Digraph {
 public:
  Digraph(int n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)) {
    if (n_ < 1) throw std::invalid_argument("digraph needs at least one vertex");
    if (n_ > kMaxVertices) throw std::invalid_argument("digraph has more than 64 vertices");
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      const Arc& a = arcs_[i];
      if (a.tail < 0 || a.tail >= n_ || a.head < 0 || a.head >= n_)
        throw std::invalid_argument("arc " + std::to_string(i + 1) + " has an endpoint outside the vertex set");
      if (a.tail == a.head)
        throw std::invalid_argument("arc " + std::to_string(i + 1) + " is a self-loop");
    }
  }

  int num_vertices() const { return n_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  const Arc& arc(ArcIndex a) const { return arcs_.at(static_cast<std::size_t>(a)); }
  std::span<const Arc> arcs() const { return arcs_; }

  std::vector<Cost> costs() const {
    std::vector<Cost> c;
    c.reserve(arcs_.size());
    for (const Arc& a : arcs_) c.push_back(a.cost);
    return c;
  }

  /// Same structure, different costs.
  Digraph with_costs(std::span<const Cost> costs) const {
    if (costs.size() != arcs_.size()) throw std::invalid_argument("cost vector length differs from arc count");
    Digraph d = *this;
    for (std::size_t i = 0; i < costs.size(); ++i) d.arcs_[i].cost = costs[i];
    return d;
  }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  int n_;
  std::vector<Arc> arcs_;
};

/// Sorted, duplicate-free set of arc indices of some host digraph.
class ArcSubset {
 public:
  ArcSubset() = default;
  explicit ArcSubset(std::vector<ArcIndex> arcs) : arcs_(std::move(arcs)) {
    std::sort(arcs_.begin(), arcs_.end());
    if (std::adjacent_find(arcs_.begin(), arcs_.end()) != arcs_.end())
      throw std::invalid_argument("arc subset contains a repeated arc");
    if (!arcs_.empty() && arcs_.front() < 0) throw std::invalid_argument("negative arc index");
  }
  ArcSubset(std::initializer_list<ArcIndex> arcs) : ArcSubset(std::vector<ArcIndex>(arcs)) {}

  static ArcSubset all(const Digraph& d) {
    std::vector<ArcIndex> ids(static_cast<std::size_t>(d.num_arcs()));
    std::iota(ids.begin(), ids.end(), 0);
    return ArcSubset(std::move(ids));
  }

  std::span<const ArcIndex> indices() const { return arcs_; }
  int size() const { return static_cast<int>(arcs_.size()); }
  bool empty() const { return arcs_.empty(); }
  bool contains(ArcIndex a) const { return std::binary_search(arcs_.begin(), arcs_.end(), a); }
  auto begin() const { return arcs_.begin(); }
  auto end() const { return arcs_.end(); }

  /// Throws unless every index names an arc of d.
  void check_within(const Digraph& d) const {
    if (!arcs_.empty() && arcs_.back() >= d.num_arcs())
      throw std::invalid_argument("arc id " + std::to_string(arcs_.back() + 1) + " does not exist");
  }

  /// "{1,4}" with 1-based arc ids.
  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      if (i > 0) s += ',';
      s += std::to_string(arcs_[i] + 1);
    }
    return s + "}";
  }

  friend bool operator==(const ArcSubset&, const ArcSubset&) = default;
  friend auto operator<=>(const ArcSubset&, const ArcSubset&) = default;

 private:
  std::vector<ArcIndex> arcs_;
};

/// Integer vector indexed by vertex. Used for root vectors r_F, prescribed
/// root vectors q_i, and arguments of the discrete functions.
class RootVector {
 public:
  RootVector() = default;
  explicit RootVector(std::vector<int> values) : values_(std::move(values)) {}
  RootVector(std::initializer_list<int> values) : values_(values) {}
  static RootVector constant(int n, int value) {
    return RootVector(std::vector<int>(static_cast<std::size_t>(n), value));
  }

  int size() const { return static_cast<int>(values_.size()); }
  int operator[](Vertex v) const { return values_[static_cast<std::size_t>(v)]; }
  int& operator[](Vertex v) { return values_[static_cast<std::size_t>(v)]; }
  std::span<const int> values() const { return values_; }

  int sum() const { return std::accumulate(values_.begin(), values_.end(), 0); }
  int sum(VertexSet x) const {
    int s = 0;
    for (Vertex v : x.members()) s += values_.at(static_cast<std::size_t>(v));
    return s;
  }

  /// "(1 0 2)".
  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (i > 0) s += ' ';
      s += std::to_string(values_[i]);
    }
    return s + ")";
  }

  friend bool operator==(const RootVector&, const RootVector&) = default;
  friend auto operator<=>(const RootVector&, const RootVector&) = default;

 private:
  std::vector<int> values_;
};

inline Cost cost_of(const Digraph& d, const ArcSubset& f) {
  Cost c = 0;
  for (ArcIndex a : f) c += d.arc(a).cost;
  return c;
}

inline void check_vertex_set(const Digraph& d, VertexSet x) {
  if (!x.within(d.num_vertices())) throw std::invalid_argument("vertex set names an unknown vertex");
}

/// rho_F(X): arcs of F from V \ X into X, counted with multiplicity.
inline int in_cut_count(const Digraph& d, const ArcSubset& f, VertexSet x) {
  check_vertex_set(d, x);
  f.check_within(d);
  int count = 0;
  for (ArcIndex a : f) {
    const Arc& arc = d.arc(a);
    if (x.contains(arc.head) && !x.contains(arc.tail)) ++count;
  }
  return count;
}

/// rho_A(X) over all arcs.
inline int in_cut_count(const Digraph& d, VertexSet x) {
  check_vertex_set(d, x);
  int count = 0;
  for (const Arc& arc : d.arcs())
    if (x.contains(arc.head) && !x.contains(arc.tail)) ++count;
  return count;
}

inline std::vector<int> in_degrees(const Digraph& d, const ArcSubset& f) {
  f.check_within(d);
  std::vector<int> deg(static_cast<std::size_t>(d.num_vertices()), 0);
  for (ArcIndex a : f) ++deg[static_cast<std::size_t>(d.arc(a).head)];
  return deg;
}

/// v -> k - rho_F(v). Throws if some in-degree exceeds k.
inline RootVector root_vector(const Digraph& d, const ArcSubset& f, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  std::vector<int> deg = in_degrees(d, f);
  for (std::size_t v = 0; v < deg.size(); ++v) {
    if (deg[v] > k)
      throw std::invalid_argument("vertex " + std::to_string(v + 1) + " has in-degree " +
                                  std::to_string(deg[v]) + " > k");
    deg[v] = k - deg[v];
  }
  return RootVector(std::move(deg));
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  /// False if already joined.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[static_cast<std::size_t>(a)] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

/// True iff the underlying undirected multigraph of F has no cycle.
inline bool is_forest(const Digraph& d, std::span<const ArcIndex> f) {
  detail::UnionFind uf(d.num_vertices());
  for (ArcIndex a : f)
    if (!uf.unite(d.arc(a).tail, d.arc(a).head)) return false;
  return true;
}

/// In-degree at most one everywhere and no undirected cycle.
inline bool is_branching(const Digraph& d, const ArcSubset& f) {
  f.check_within(d);
  std::vector<int> deg = in_degrees(d, f);
  if (std::any_of(deg.begin(), deg.end(), [](int x) { return x > 1; })) return false;
  return is_forest(d, f.indices());
}

}  // namespace kbranch
