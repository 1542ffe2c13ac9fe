#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kbranch/dca.hpp"
#include "kbranch/digraph.hpp"
#include "kbranch/function_table.hpp"

namespace kbranch {

/// Opening cost f_P: either separable (f_v(0..k) per vertex) or an explicit table.
class OpeningCost {
 public:
  using Separable = std::vector<std::vector<Cost>>;

  static OpeningCost separable(Separable per_vertex) { return OpeningCost(std::move(per_vertex)); }
  static OpeningCost table(DiscreteFunctionTable table) { return OpeningCost(std::move(table)); }

  bool is_separable() const { return std::holds_alternative<Separable>(data_); }
  const Separable& per_vertex() const { return std::get<Separable>(data_); }
  const DiscreteFunctionTable& as_table() const { return std::get<DiscreteFunctionTable>(data_); }

  Value operator()(const RootVector& x) const {
    if (const auto* t = std::get_if<DiscreteFunctionTable>(&data_)) return t->at(x);
    const auto& f = std::get<Separable>(data_);
    if (static_cast<int>(f.size()) != x.size()) throw std::invalid_argument("opening cost has the wrong dimension");
    Cost total = 0;
    for (int v = 0; v < x.size(); ++v) {
      const auto& fv = f[static_cast<std::size_t>(v)];
      if (x[v] < 0 || x[v] >= static_cast<int>(fv.size())) return std::nullopt;
      total += fv[static_cast<std::size_t>(x[v])];
    }
    return total;
  }

  /// Values on the box {0..k}^n, for exchange checks.
  DiscreteFunctionTable tabulate(int n, int k) const {
    DiscreteFunctionTable out(n);
    RootVector x = RootVector::constant(n, 0);
    while (true) {
      if (Value v = (*this)(x)) out.set(std::vector<int>(x.values().begin(), x.values().end()), *v);
      int i = n - 1;
      while (i >= 0 && x[i] == k) x[i--] = 0;
      if (i < 0) break;
      ++x[i];
    }
    return out;
  }

 private:
  explicit OpeningCost(Separable s) : data_(std::move(s)) {}
  explicit OpeningCost(DiscreteFunctionTable t) : data_(std::move(t)) {}

  std::variant<Separable, DiscreteFunctionTable> data_;
};

struct RootLocationResult {
  RootVector roots;
  ArcSubset arcs;
  Cost opening = 0;
  Cost connection = 0;
  Cost total = 0;
};

inline constexpr std::int64_t kRootLocationMaxCandidates = 2'000'000;

/// Exact minimizer of f_P(r_F) + c(F) over all k-branchings F, by scanning
/// the root vectors of {0..k}^V in lexicographic order. Ties keep the
/// lexicographically smallest root vector.
inline RootLocationResult solve_root_location(const Digraph& d, int k, const OpeningCost& opening) {
  const int n = d.num_vertices();
  std::int64_t candidates = 1;
  for (int i = 0; i < n; ++i) {
    candidates *= k + 1;
    if (candidates > kRootLocationMaxCandidates)
      throw std::length_error("root location enumeration exceeds " + std::to_string(kRootLocationMaxCandidates) +
                              " candidate root vectors");
  }
  BranchingCostFunction f(d, k);
  std::optional<RootLocationResult> best;
  RootVector x = RootVector::constant(n, 0);
  while (true) {
    if (x.sum() >= k) {
      if (Value open = opening(x)) {
        if (auto branching = f.solve(x)) {
          const Cost total = *open + branching->cost;
          if (!best || total < best->total)
            best = RootLocationResult{x, std::move(branching->arcs), *open, branching->cost, total};
        }
      }
    }
    int i = n - 1;
    while (i >= 0 && x[i] == k) x[i--] = 0;
    if (i < 0) break;
    ++x[i];
  }
  if (!best) throw std::domain_error("opening cost is +inf on every achievable root vector");
  return *best;
}

/// k = 1 with separable opening cost: charge f_v(0) - f_v(1) to every arc
/// entering v and solve a plain minimum-cost branching.
inline RootLocationResult solve_separable_k1(const Digraph& d, const OpeningCost& opening) {
  if (!opening.is_separable()) throw std::invalid_argument("separable opening cost required");
  const auto& f = opening.per_vertex();
  if (static_cast<int>(f.size()) != d.num_vertices()) throw std::invalid_argument("opening cost has the wrong dimension");
  Cost base = 0;
  for (const auto& fv : f) {
    if (fv.size() < 2) throw std::invalid_argument("separable opening cost needs f_v(0) and f_v(1)");
    base += fv[1];
  }
  std::vector<Cost> adjusted;
  for (const Arc& a : d.arcs()) {
    const auto& fv = f[static_cast<std::size_t>(a.head)];
    adjusted.push_back(a.cost + fv[0] - fv[1]);
  }
  const MincostResult r = mincost_k_branching(d.with_costs(adjusted), 1);
  RootLocationResult out{r.roots, r.arcs, 0, cost_of(d, r.arcs), base + r.cost};
  out.opening = out.total - out.connection;
  return out;
}

}  // namespace kbranch
