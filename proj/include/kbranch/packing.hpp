#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kbranch/digraph.hpp"
#include "kbranch/feasibility.hpp"
#include "kbranch/recognition.hpp"

namespace kbranch {

/// Thrown when a packing is requested for an instance violating the cut condition.
class InfeasibleInstance : public std::runtime_error {
 public:
  explicit InfeasibleInstance(DeficiencyReport report)
      : std::runtime_error("instance is infeasible: min=" + std::to_string(report.min_value) +
                           " X=" + report.minimal_minimizer.to_string()),
        report_(report) {}
  const DeficiencyReport& report() const { return report_; }

 private:
  DeficiencyReport report_;
};

/// F_1..F_p and, where available, a split of each F_i into k branchings.
struct PackingCertificate {
  std::vector<ArcSubset> arcs;
  /// Either empty or one entry per F_i, each a list of k branchings.
  std::vector<std::vector<ArcSubset>> decompositions;
};

struct PackingOptions {
  Engine engine = Engine::kAuto;
  /// Called after every accepted arc with the arcs still available and the
  /// demand groups still to be served.
  std::function<void(const std::vector<detail::ArcEnds>&, const std::vector<DemandGroup>&)> on_step;
};

/// First violated certificate invariant, or nullopt when the certificate is valid.
inline std::optional<std::string> certificate_violation(const PackingInstance& instance,
                                                        const PackingCertificate& certificate) {
  const Digraph& d = instance.digraph();
  if (static_cast<int>(certificate.arcs.size()) != instance.p()) return "wrong number of arc sets";
  std::vector<char> used(static_cast<std::size_t>(d.num_arcs()), 0);
  for (int i = 0; i < instance.p(); ++i) {
    const ArcSubset& f = certificate.arcs[static_cast<std::size_t>(i)];
    const std::string name = "F_" + std::to_string(i + 1);
    if (!f.empty() && f.indices().back() >= d.num_arcs()) return name + " names an unknown arc";
    for (ArcIndex a : f) {
      if (used[static_cast<std::size_t>(a)]) return name + " shares arc " + std::to_string(a + 1);
      used[static_cast<std::size_t>(a)] = 1;
    }
    std::vector<int> deg = in_degrees(d, f);
    for (Vertex v = 0; v < d.num_vertices(); ++v)
      if (instance.k() - deg[static_cast<std::size_t>(v)] != instance.q(i)[v]) return name + " has the wrong root vector";
    if (!is_k_branching(d, f, instance.k())) return name + " is not a k-branching";
    if (certificate.decompositions.empty()) continue;
    if (certificate.decompositions.size() != certificate.arcs.size()) return "decomposition count mismatch";
    const auto& parts = certificate.decompositions[static_cast<std::size_t>(i)];
    if (static_cast<int>(parts.size()) != instance.k()) return name + " decomposition does not have k parts";
    std::vector<ArcIndex> merged;
    for (const ArcSubset& b : parts) {
      if (!is_branching(d, b)) return name + " decomposition has a non-branching part";
      merged.insert(merged.end(), b.begin(), b.end());
    }
    std::sort(merged.begin(), merged.end());
    if (std::adjacent_find(merged.begin(), merged.end()) != merged.end()) return name + " decomposition parts overlap";
    if (!std::equal(merged.begin(), merged.end(), f.begin(), f.end())) return name + " decomposition does not cover F";
  }
  return std::nullopt;
}

namespace detail {

/// Feasibility tests against a shrinking arc set. The brute-force path keeps
/// rho over all vertex subsets and updates it per removed arc.
class FeasibilityProbe {
 public:
  FeasibilityProbe(const Digraph& d, Engine engine) : n_(d.num_vertices()), ends_(arc_ends(d)), active_(ends_.size(), 1) {
    if (engine == Engine::kAuto) engine = n_ <= kBruteForceMaxVertices ? Engine::kBruteForce : Engine::kMinCut;
    engine_ = engine;
    if (engine_ == Engine::kBruteForce) {
      if (n_ > kBruteForceMaxVertices) throw std::invalid_argument("brute-force engine limited to 20 vertices");
      rho_.assign(std::size_t{1} << n_, 0);
      for (const ArcEnds& a : ends_) shift(a, +1);
    }
  }

  bool active(ArcIndex a) const { return active_[static_cast<std::size_t>(a)] != 0; }
  const ArcEnds& ends(ArcIndex a) const { return ends_[static_cast<std::size_t>(a)]; }
  int num_arcs() const { return static_cast<int>(ends_.size()); }

  void remove(ArcIndex a) {
    active_[static_cast<std::size_t>(a)] = 0;
    if (engine_ == Engine::kBruteForce) shift(ends(a), -1);
  }

  std::vector<ArcEnds> remaining(ArcIndex skip = -1) const {
    std::vector<ArcEnds> out;
    for (std::size_t a = 0; a < ends_.size(); ++a)
      if (active_[a] && static_cast<ArcIndex>(a) != skip) out.push_back(ends_[a]);
    return out;
  }

  /// Cut condition for `groups` on the active arcs, minus `skip` if given.
  bool feasible(const std::vector<DemandGroup>& groups, ArcIndex skip = -1) {
    if (engine_ == Engine::kMinCut) {
      auto arcs = remaining(skip);
      return minimize_deficiency(n_, arcs, groups, {}, {}, Engine::kMinCut).feasible;
    }
    const std::size_t size = std::size_t{1} << n_;
    sums_.resize(groups.size() * size);
    for (std::size_t i = 0; i < groups.size(); ++i) {
      int* s = sums_.data() + i * size;
      s[0] = 0;
      for (std::size_t x = 1; x < size; ++x) s[x] = s[x & (x - 1)] + groups[i].q[std::countr_zero(x)];
    }
    for (std::size_t x = 1; x < size; ++x) {
      int cut = rho_[x];
      if (skip >= 0) {
        const ArcEnds& a = ends(skip);
        if (((x >> a.head) & 1U) && !((x >> a.tail) & 1U)) --cut;
      }
      int need = 0;
      for (std::size_t i = 0; i < groups.size(); ++i) need += std::max(0, groups[i].k - sums_[i * size + x]);
      if (cut < need) return false;
    }
    return true;
  }

 private:
  void shift(const ArcEnds& a, int delta) {
    for (std::size_t x = 1; x < rho_.size(); ++x)
      if (((x >> a.head) & 1U) && !((x >> a.tail) & 1U)) rho_[x] += delta;
  }

  int n_;
  Engine engine_ = Engine::kBruteForce;
  std::vector<ArcEnds> ends_;
  std::vector<char> active_;
  std::vector<int> rho_;
  std::vector<int> sums_;
};

}  // namespace detail

/// Builds p arc-disjoint k-branchings with root vectors q_1..q_p.
///
/// Each F_i is assembled one branching at a time. For the next branching a
/// root set b is chosen (b(v) = 1 wherever the remaining demand q(v) equals
/// the remaining number of branchings, b <= q elsewhere) such that splitting
/// the demand into a single branching rooted at b plus the rest keeps the cut
/// condition. The branching is then grown from b: an arc uv with u already
/// reached and v not is taken if removing it and adding v to the reached set
/// keeps the cut condition; among such arcs the lowest id wins. Both choices
/// always exist while the condition holds, so the loop never gets stuck on a
/// feasible instance.
inline PackingCertificate pack_k_branchings(const PackingInstance& instance, const PackingOptions& options = {}) {
  const DeficiencyReport report = packing_deficiency(instance, options.engine);
  if (!report.feasible) throw InfeasibleInstance(report);

  const Digraph& d = instance.digraph();
  const int n = d.num_vertices();
  detail::FeasibilityProbe probe(d, options.engine);
  PackingCertificate certificate;

  for (int i = 0; i < instance.p(); ++i) {
    std::vector<DemandGroup> later;
    for (int j = i + 1; j < instance.p(); ++j) later.push_back({instance.k(), instance.q(j)});

    RootVector demand = instance.q(i);
    std::vector<ArcSubset> branchings;
    std::vector<ArcIndex> all_arcs;
    for (int left = instance.k(); left > 0; --left) {
      VertexSet forced, optional_roots;
      for (Vertex v = 0; v < n; ++v) {
        if (demand[v] == left) forced.insert(v);
        else if (demand[v] > 0) optional_roots.insert(v);
      }
      const std::vector<Vertex> free = optional_roots.members();

      std::optional<RootVector> roots;
      std::vector<DemandGroup> groups;
      for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << free.size()) && !roots; ++sub) {
        RootVector b = RootVector::constant(n, 0);
        for (Vertex v : forced.members()) b[v] = 1;
        for (std::size_t j = 0; j < free.size(); ++j)
          if ((sub >> j) & 1U) b[free[j]] = 1;
        if (b.sum() < 1) continue;
        RootVector rest = demand;
        for (Vertex v = 0; v < n; ++v) rest[v] -= b[v];
        if (rest.sum() < left - 1) continue;
        groups.clear();
        groups.push_back({1, b});
        if (left > 1) groups.push_back({left - 1, rest});
        groups.insert(groups.end(), later.begin(), later.end());
        if (probe.feasible(groups)) {
          roots = b;
          demand = rest;
        }
      }
      if (!roots) throw std::logic_error("no admissible root set for the next branching");

      std::vector<ArcIndex> branch;
      while (groups.front().q.sum() < n) {
        RootVector& reached = groups.front().q;
        bool advanced = false;
        for (ArcIndex a = 0; a < probe.num_arcs() && !advanced; ++a) {
          if (!probe.active(a)) continue;
          const auto& e = probe.ends(a);
          if (reached[e.tail] == 0 || reached[e.head] == 1) continue;
          reached[e.head] = 1;
          if (probe.feasible(groups, a)) {
            probe.remove(a);
            branch.push_back(a);
            advanced = true;
            if (options.on_step) options.on_step(probe.remaining(), groups);
          } else {
            reached[e.head] = 0;
          }
        }
        if (!advanced) throw std::logic_error("no admissible arc while growing a branching");
      }
      all_arcs.insert(all_arcs.end(), branch.begin(), branch.end());
      branchings.emplace_back(std::move(branch));
    }
    certificate.arcs.emplace_back(std::move(all_arcs));
    certificate.decompositions.push_back(std::move(branchings));
  }

  if (auto violation = certificate_violation(instance, certificate))
    throw std::logic_error("packing produced an invalid certificate: " + *violation);
  return certificate;
}

/// Splits a k-branching into k arc-disjoint branchings by backtracking.
inline std::vector<ArcSubset> decompose_k_branching(const Digraph& d, const ArcSubset& f, int k) {
  if (!is_k_branching(d, f, k)) throw std::invalid_argument("arc set is not a k-branching");
  const int n = d.num_vertices();
  const std::vector<ArcIndex> arcs(f.begin(), f.end());
  const auto classes = static_cast<std::size_t>(k);

  // Per class: which heads are taken, and an undoable union-find.
  std::vector<std::vector<char>> head_taken(classes, std::vector<char>(static_cast<std::size_t>(n), 0));
  std::vector<std::vector<int>> parent(classes, std::vector<int>(static_cast<std::size_t>(n)));
  for (auto& p : parent)
    for (int v = 0; v < n; ++v) p[static_cast<std::size_t>(v)] = v;
  std::vector<int> color(arcs.size(), -1);

  auto root = [&](std::size_t c, int v) {
    while (parent[c][static_cast<std::size_t>(v)] != v) v = parent[c][static_cast<std::size_t>(v)];
    return v;
  };

  std::function<bool(std::size_t, int)> place = [&](std::size_t idx, int used) -> bool {
    if (idx == arcs.size()) return true;
    const Arc& arc = d.arc(arcs[idx]);
    const int limit = std::min(k, used + 1);
    for (int c = 0; c < limit; ++c) {
      auto cc = static_cast<std::size_t>(c);
      if (head_taken[cc][static_cast<std::size_t>(arc.head)]) continue;
      int a = root(cc, arc.tail), b = root(cc, arc.head);
      if (a == b) continue;
      head_taken[cc][static_cast<std::size_t>(arc.head)] = 1;
      parent[cc][static_cast<std::size_t>(a)] = b;
      color[idx] = c;
      if (place(idx + 1, std::max(used, c + 1))) return true;
      parent[cc][static_cast<std::size_t>(a)] = a;
      head_taken[cc][static_cast<std::size_t>(arc.head)] = 0;
    }
    return false;
  };
  if (!place(0, 0)) throw std::logic_error("k-branching could not be decomposed");

  std::vector<std::vector<ArcIndex>> parts(classes);
  for (std::size_t i = 0; i < arcs.size(); ++i) parts[static_cast<std::size_t>(color[i])].push_back(arcs[i]);
  std::vector<ArcSubset> out;
  for (auto& part : parts) out.emplace_back(std::move(part));
  return out;
}

/// Arc-disjoint branchings B_1..B_k with r_{B_i} = q_i for 0/1 vectors q_i.
inline std::vector<ArcSubset> pack_disjoint_branchings(const Digraph& d, const std::vector<RootVector>& q,
                                                       const PackingOptions& options = {}) {
  for (const RootVector& qi : q)
    for (int v = 0; v < qi.size(); ++v)
      if (qi[v] != 0 && qi[v] != 1) throw std::invalid_argument("root vectors must be 0/1");
  PackingInstance instance(d, 1, q);
  return pack_k_branchings(instance, options).arcs;
}

}  // namespace kbranch
