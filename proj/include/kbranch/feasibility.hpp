#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kbranch/digraph.hpp"
#include "kbranch/maxflow.hpp"

namespace kbranch {

enum class Engine { kAuto, kBruteForce, kMinCut };

/// Largest vertex count handled by the brute-force engine.
inline constexpr int kBruteForceMaxVertices = 20;

/// One requested k-branching, described by its size k and its root vector q.
struct DemandGroup {
  int k = 1;
  RootVector q;
};

/// (D, k, q_1..q_p) with each q_i in {0..k}^V and q_i(V) >= k.
class PackingInstance {
 public:
  PackingInstance(Digraph d, int k, std::vector<RootVector> q) : d_(std::move(d)), k_(k), q_(std::move(q)) {
    if (k_ < 1) throw std::invalid_argument("k must be positive");
    if (q_.empty()) throw std::invalid_argument("at least one root vector is required");
    for (std::size_t i = 0; i < q_.size(); ++i) {
      const RootVector& qi = q_[i];
      const std::string name = "q_" + std::to_string(i + 1);
      if (qi.size() != d_.num_vertices()) throw std::invalid_argument(name + " has the wrong length");
      for (int v = 0; v < qi.size(); ++v)
        if (qi[v] < 0 || qi[v] > k_) throw std::invalid_argument(name + " has an entry outside [0, k]");
      if (qi.sum() < k_) throw std::invalid_argument(name + " sums to less than k");
    }
  }

  const Digraph& digraph() const { return d_; }
  int k() const { return k_; }
  int p() const { return static_cast<int>(q_.size()); }
  const std::vector<RootVector>& q() const { return q_; }
  const RootVector& q(int i) const { return q_.at(static_cast<std::size_t>(i)); }

  std::vector<DemandGroup> groups() const {
    std::vector<DemandGroup> g;
    for (const RootVector& qi : q_) g.push_back({k_, qi});
    return g;
  }

 private:
  Digraph d_;
  int k_;
  std::vector<RootVector> q_;
};

/// Minimum of rho_A - g over the admissible nonempty sets.
struct DeficiencyReport {
  int min_value = 0;
  VertexSet minimal_minimizer;
  bool feasible = true;
};

/// g(X) = sum_i max{0, k_i - q_i(X)}.
inline int g_value(std::span<const DemandGroup> groups, VertexSet x) {
  int total = 0;
  for (const DemandGroup& group : groups) total += std::max(0, group.k - group.q.sum(x));
  return total;
}

inline int g_value(const PackingInstance& instance, VertexSet x) {
  check_vertex_set(instance.digraph(), x);
  return g_value(instance.groups(), x);
}

namespace detail {

struct ArcEnds {
  Vertex tail;
  Vertex head;
};

inline std::vector<ArcEnds> arc_ends(const Digraph& d) {
  std::vector<ArcEnds> ends;
  ends.reserve(static_cast<std::size_t>(d.num_arcs()));
  for (const Arc& a : d.arcs()) ends.push_back({a.tail, a.head});
  return ends;
}

/// Given, for each vertex w, the minimal minimizer containing w (if any
/// minimizer contains w), picks the inclusion-minimal minimizer holding the
/// smallest possible vertex. Distinct minimal minimizers are disjoint, so
/// this is well defined and equals the unique one when only one exists.
inline VertexSet pick_minimal_minimizer(const std::vector<std::optional<VertexSet>>& per_vertex) {
  for (std::size_t w = 0; w < per_vertex.size(); ++w) {
    if (!per_vertex[w]) continue;
    const VertexSet candidate = *per_vertex[w];
    bool minimal = true;
    for (Vertex u : candidate.members()) {
      if (per_vertex[static_cast<std::size_t>(u)] != candidate) {
        minimal = false;
        break;
      }
    }
    if (minimal) return candidate;
  }
  throw std::logic_error("no minimal minimizer found");
}

inline DeficiencyReport minimize_brute_force(int n, std::span<const ArcEnds> arcs, std::span<const DemandGroup> groups,
                                             VertexSet forced_in, VertexSet forced_out) {
  if (n > kBruteForceMaxVertices) throw std::invalid_argument("brute-force engine limited to 20 vertices");
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  const std::uint64_t free_mask = full & ~forced_in.mask() & ~forced_out.mask();
  int best = std::numeric_limits<int>::max();
  std::vector<std::uint64_t> meet(static_cast<std::size_t>(n), 0);
  std::vector<char> hit(static_cast<std::size_t>(n), 0);

  // Enumerate subsets of free_mask, each joined with forced_in.
  std::uint64_t sub = 0;
  do {
    const std::uint64_t x = sub | forced_in.mask();
    if (x != 0) {
      int value = 0;
      for (const ArcEnds& a : arcs)
        if (((x >> a.head) & 1U) && !((x >> a.tail) & 1U)) ++value;
      value -= g_value(groups, VertexSet(x));
      if (value < best) {
        best = value;
        std::fill(hit.begin(), hit.end(), 0);
      }
      if (value == best) {
        for (std::uint64_t m = x; m != 0; m &= m - 1) {
          auto w = static_cast<std::size_t>(std::countr_zero(m));
          meet[w] = hit[w] ? (meet[w] & x) : x;
          hit[w] = 1;
        }
      }
    }
    sub = (sub - free_mask) & free_mask;
  } while (sub != 0);

  if (best == std::numeric_limits<int>::max()) throw std::invalid_argument("no admissible vertex set");
  std::vector<std::optional<VertexSet>> per_vertex(static_cast<std::size_t>(n));
  for (std::size_t w = 0; w < per_vertex.size(); ++w)
    if (hit[w]) per_vertex[w] = VertexSet(meet[w]);
  VertexSet minimizer = pick_minimal_minimizer(per_vertex);
  return {best, minimizer, best >= 0};
}

/// For each T subset of the groups, rho_A(X) + sum_{i in T} q_i(X) - sum_{i in T} k_i
/// is a cut function in the network: super source -> v with capacity
/// sum_{i in T} q_i(v), unit capacity per arc, X on the sink side.
/// rho_A - g is the pointwise minimum of these over T.
inline DeficiencyReport minimize_min_cut(int n, std::span<const ArcEnds> arcs, std::span<const DemandGroup> groups,
                                         VertexSet forced_in, VertexSet forced_out) {
  const int p = static_cast<int>(groups.size());
  if (p > 20) throw std::invalid_argument("min-cut engine limited to 20 root vectors");
  const int source = n, sink = n + 1;

  std::vector<Vertex> anchors;
  if (forced_in.empty()) {
    for (Vertex w = 0; w < n; ++w)
      if (!forced_out.contains(w)) anchors.push_back(w);
  } else {
    anchors.push_back(forced_in.front());
  }
  if (anchors.empty()) throw std::invalid_argument("no admissible vertex set");

  struct Best {
    std::int64_t value;
    VertexSet set;
  };
  std::vector<std::optional<Best>> per_anchor(static_cast<std::size_t>(n));
  std::int64_t overall = std::numeric_limits<std::int64_t>::max();

  for (std::uint32_t t = 0; t < (std::uint32_t{1} << p); ++t) {
    std::vector<MaxFlow::Capacity> supply(static_cast<std::size_t>(n), 0);
    std::int64_t demand = 0;
    for (int i = 0; i < p; ++i) {
      if (!((t >> i) & 1U)) continue;
      demand += groups[static_cast<std::size_t>(i)].k;
      for (Vertex v = 0; v < n; ++v) supply[static_cast<std::size_t>(v)] += groups[static_cast<std::size_t>(i)].q[v];
    }
    for (Vertex w : anchors) {
      MaxFlow flow(n + 2);
      for (const ArcEnds& a : arcs) flow.add_arc(a.tail, a.head, 1);
      for (Vertex v = 0; v < n; ++v) {
        if (forced_out.contains(v))
          flow.add_arc(source, v, MaxFlow::kInfinite);
        else
          flow.add_arc(source, v, supply[static_cast<std::size_t>(v)]);
        if (forced_in.contains(v) || v == w) flow.add_arc(v, sink, MaxFlow::kInfinite);
      }
      const std::int64_t value = flow.run(source, sink) - demand;
      const std::vector<char> side = flow.minimal_sink_side(sink);
      VertexSet x;
      for (Vertex v = 0; v < n; ++v)
        if (side[static_cast<std::size_t>(v)]) x.insert(v);
      auto& slot = per_anchor[static_cast<std::size_t>(w)];
      if (!slot || value < slot->value || (value == slot->value && x.size() < slot->set.size())) slot = Best{value, x};
      overall = std::min(overall, value);
    }
  }

  // M_w is the minimal minimizer containing w; every minimizer containing w
  // contains M_w, so it is also the minimal one for each of its members.
  std::vector<std::optional<VertexSet>> per_vertex(static_cast<std::size_t>(n));
  for (Vertex w : anchors) {
    const auto& slot = per_anchor[static_cast<std::size_t>(w)];
    if (slot && slot->value == overall) per_vertex[static_cast<std::size_t>(w)] = slot->set;
  }
  if (!forced_in.empty()) {
    // One anchor stands for all of forced_in; the lattice of sets containing it has a unique bottom.
    const VertexSet only = *per_vertex[static_cast<std::size_t>(anchors.front())];
    return {static_cast<int>(overall), only, overall >= 0};
  }
  for (Vertex w = 0; w < n; ++w) {
    // Vertices of a minimizer that were never anchored cannot occur here:
    // every non-forced-out vertex is an anchor.
    if (!per_vertex[static_cast<std::size_t>(w)]) continue;
    for (Vertex u : per_vertex[static_cast<std::size_t>(w)]->members())
      if (!per_vertex[static_cast<std::size_t>(u)]) throw std::logic_error("inconsistent min-cut minimizers");
  }
  return {static_cast<int>(overall), pick_minimal_minimizer(per_vertex), overall >= 0};
}

inline DeficiencyReport minimize_deficiency(int n, std::span<const ArcEnds> arcs, std::span<const DemandGroup> groups,
                                            VertexSet forced_in, VertexSet forced_out, Engine engine) {
  if (forced_in.intersects(forced_out)) throw std::invalid_argument("forced-in and forced-out sets overlap");
  if (!forced_in.within(n) || !forced_out.within(n)) throw std::invalid_argument("vertex set names an unknown vertex");
  if ((VertexSet::full(n) - forced_out).empty()) throw std::invalid_argument("no admissible vertex set: every vertex is forced out");
  if (engine == Engine::kAuto) engine = n <= kBruteForceMaxVertices ? Engine::kBruteForce : Engine::kMinCut;
  return engine == Engine::kBruteForce ? minimize_brute_force(n, arcs, groups, forced_in, forced_out)
                                       : minimize_min_cut(n, arcs, groups, forced_in, forced_out);
}

}  // namespace detail

/// min over nonempty X of rho_A(X) - g(X), with the minimal minimizer.
inline DeficiencyReport packing_deficiency(const PackingInstance& instance, Engine engine = Engine::kAuto) {
  const auto arcs = detail::arc_ends(instance.digraph());
  const auto groups = instance.groups();
  return detail::minimize_deficiency(instance.digraph().num_vertices(), arcs, groups, {}, {}, engine);
}

/// p arc-disjoint k-branchings with root vectors q_1..q_p exist iff this holds.
inline bool is_packing_feasible(const PackingInstance& instance, Engine engine = Engine::kAuto) {
  return packing_deficiency(instance, engine).feasible;
}

/// Same minimization restricted to forced_in ⊆ X ⊆ V \ forced_out.
inline DeficiencyReport constrained_deficiency_min(const PackingInstance& instance, VertexSet forced_in,
                                                   VertexSet forced_out, Engine engine = Engine::kAuto) {
  const auto arcs = detail::arc_ends(instance.digraph());
  const auto groups = instance.groups();
  return detail::minimize_deficiency(instance.digraph().num_vertices(), arcs, groups, forced_in, forced_out, engine);
}

/// Feasibility with per-group sizes, used when a k-branching is peeled into
/// one branching plus a (k-1)-branching.
inline bool groups_feasible(const Digraph& d, std::span<const DemandGroup> groups, Engine engine = Engine::kAuto) {
  const auto arcs = detail::arc_ends(d);
  return detail::minimize_deficiency(d.num_vertices(), arcs, groups, {}, {}, engine).feasible;
}

}  // namespace kbranch
