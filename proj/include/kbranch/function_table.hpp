#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kbranch/digraph.hpp"

namespace kbranch {

/// Function value in Z ∪ {+inf}; nullopt stands for +inf.
using Value = std::optional<Cost>;

inline std::string value_to_string(const Value& v) { return v ? std::to_string(*v) : std::string("inf"); }

/// A function on Z^n given by its finite entries; +inf everywhere else.
class DiscreteFunctionTable {
 public:
  using Point = std::vector<int>;

  explicit DiscreteFunctionTable(int dimension) : dimension_(dimension) {
    if (dimension < 1) throw std::invalid_argument("table dimension must be positive");
  }

  int dimension() const { return dimension_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool empty() const { return entries_.empty(); }
  const std::map<Point, Cost>& entries() const { return entries_; }

  void set(Point x, Cost value) {
    if (static_cast<int>(x.size()) != dimension_) throw std::invalid_argument("point has the wrong dimension");
    entries_[std::move(x)] = value;
  }

  Value at(const Point& x) const {
    auto it = entries_.find(x);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }
  Value at(const RootVector& x) const { return at(Point(x.values().begin(), x.values().end())); }

  Value min_value() const {
    Value best;
    for (const auto& [x, v] : entries_)
      if (!best || v < *best) best = v;
    return best;
  }

  /// Minimizers in lexicographic order.
  std::vector<Point> argmin() const {
    std::vector<Point> out;
    const Value best = min_value();
    for (const auto& [x, v] : entries_)
      if (v == *best) out.push_back(x);
    return out;
  }

  /// lambda = min x(V) over the domain.
  int min_level() const { return level_bound(true); }
  /// mu = max x(V) over the domain.
  int max_level() const { return level_bound(false); }

  /// Restriction to the hyperplane x(V) = level.
  DiscreteFunctionTable slice(int level) const {
    DiscreteFunctionTable out(dimension_);
    for (const auto& [x, v] : entries_)
      if (coordinate_sum(x) == level) out.entries_.emplace_hint(out.entries_.end(), x, v);
    return out;
  }

  static int coordinate_sum(const Point& x) {
    int s = 0;
    for (int c : x) s += c;
    return s;
  }

  friend bool operator==(const DiscreteFunctionTable&, const DiscreteFunctionTable&) = default;

 private:
  int level_bound(bool lowest) const {
    if (entries_.empty()) throw std::invalid_argument("empty domain");
    int best = lowest ? std::numeric_limits<int>::max() : std::numeric_limits<int>::min();
    for (const auto& entry : entries_) {
      int s = coordinate_sum(entry.first);
      best = lowest ? std::min(best, s) : std::max(best, s);
    }
    return best;
  }

  int dimension_;
  std::map<Point, Cost> entries_;
};

namespace detail {

/// Point lookup for a fixed finite point set. Uses a dense array over the
/// bounding box when it is small, a sorted map otherwise.
class PointIndex {
 public:
  static constexpr Cost kAbsent = std::numeric_limits<Cost>::min();

  explicit PointIndex(const DiscreteFunctionTable& table) : n_(table.dimension()), map_(&table.entries()) {
    if (table.empty()) return;
    lo_.assign(static_cast<std::size_t>(n_), std::numeric_limits<int>::max());
    hi_.assign(static_cast<std::size_t>(n_), std::numeric_limits<int>::min());
    for (const auto& [x, v] : table.entries())
      for (std::size_t i = 0; i < x.size(); ++i) {
        lo_[i] = std::min(lo_[i], x[i]);
        hi_[i] = std::max(hi_[i], x[i]);
      }
    std::int64_t volume = 1;
    stride_.assign(static_cast<std::size_t>(n_), 0);
    for (std::size_t i = stride_.size(); i-- > 0;) {
      stride_[i] = volume;
      volume *= static_cast<std::int64_t>(hi_[i]) - lo_[i] + 1;
      if (volume > kMaxDense) {
        stride_.clear();
        return;
      }
    }
    dense_.assign(static_cast<std::size_t>(volume), kAbsent);
    for (const auto& [x, v] : table.entries()) dense_[static_cast<std::size_t>(key(x))] = v;
  }

  /// Value at x + delta_u * e_u + delta_v * e_v (u, v may be -1 for "none").
  Value at(const std::vector<int>& x, int u, int du, int v, int dv) const {
    if (dense_.empty()) {
      if (stride_.empty() && !lo_.empty()) return via_map(x, u, du, v, dv);
      return std::nullopt;
    }
    std::int64_t k = key(x);
    if (u >= 0) {
      int c = x[static_cast<std::size_t>(u)] + du;
      if (c < lo_[static_cast<std::size_t>(u)] || c > hi_[static_cast<std::size_t>(u)]) return std::nullopt;
      k += du * stride_[static_cast<std::size_t>(u)];
    }
    if (v >= 0) {
      int c = x[static_cast<std::size_t>(v)] + dv;
      if (c < lo_[static_cast<std::size_t>(v)] || c > hi_[static_cast<std::size_t>(v)]) return std::nullopt;
      k += dv * stride_[static_cast<std::size_t>(v)];
    }
    Cost value = dense_[static_cast<std::size_t>(k)];
    if (value == kAbsent) return std::nullopt;
    return value;
  }

 private:
  static constexpr std::int64_t kMaxDense = std::int64_t{1} << 22;

  std::int64_t key(const std::vector<int>& x) const {
    std::int64_t k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) k += (x[i] - lo_[i]) * stride_[i];
    return k;
  }

  Value via_map(const std::vector<int>& x, int u, int du, int v, int dv) const {
    std::vector<int> y = x;
    if (u >= 0) y[static_cast<std::size_t>(u)] += du;
    if (v >= 0) y[static_cast<std::size_t>(v)] += dv;
    auto it = map_->find(y);
    if (it == map_->end()) return std::nullopt;
    return it->second;
  }

  int n_;
  const std::map<std::vector<int>, Cost>* map_;
  std::vector<int> lo_, hi_;
  std::vector<std::int64_t> stride_;
  std::vector<Cost> dense_;
};

}  // namespace detail

}  // namespace kbranch
