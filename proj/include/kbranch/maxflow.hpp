#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

namespace kbranch {

/// Dinic's algorithm on a small dense-index network.
class MaxFlow {
 public:
  using Capacity = std::int64_t;
  static constexpr Capacity kInfinite = std::numeric_limits<Capacity>::max() / 4;

  explicit MaxFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  void add_arc(int from, int to, Capacity capacity) {
    if (capacity <= 0) return;
    adj_[static_cast<std::size_t>(from)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, capacity});
    adj_[static_cast<std::size_t>(to)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0});
  }

  Capacity run(int source, int sink) {
    Capacity total = 0;
    while (build_levels(source, sink)) {
      next_.assign(adj_.size(), 0);
      while (Capacity pushed = augment(source, sink, kInfinite)) total += pushed;
    }
    return total;
  }

  /// After run(): nodes that can still reach the sink in the residual
  /// network. This is the inclusion-wise minimal sink side of a minimum cut.
  std::vector<char> minimal_sink_side(int sink) const {
    std::vector<char> side(adj_.size(), 0);
    std::deque<int> queue{sink};
    side[static_cast<std::size_t>(sink)] = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      // u can reach v in the residual graph iff the arc u->v has spare capacity,
      // i.e. the paired reverse entry stored at v points to u.
      for (int id : adj_[static_cast<std::size_t>(v)]) {
        const Edge& back = edges_[static_cast<std::size_t>(id ^ 1)];
        int u = edges_[static_cast<std::size_t>(id)].to;
        if (back.capacity > 0 && !side[static_cast<std::size_t>(u)]) {
          side[static_cast<std::size_t>(u)] = 1;
          queue.push_back(u);
        }
      }
    }
    return side;
  }

 private:
  struct Edge {
    int to;
    Capacity capacity;
  };

  bool build_levels(int source, int sink) {
    level_.assign(adj_.size(), -1);
    std::deque<int> queue{source};
    level_[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int id : adj_[static_cast<std::size_t>(v)]) {
        const Edge& e = edges_[static_cast<std::size_t>(id)];
        if (e.capacity > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
          level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(sink)] >= 0;
  }

  Capacity augment(int v, int sink, Capacity limit) {
    if (v == sink) return limit;
    auto& i = next_[static_cast<std::size_t>(v)];
    for (; i < static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); ++i) {
      int id = adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
      Edge& e = edges_[static_cast<std::size_t>(id)];
      if (e.capacity <= 0 || level_[static_cast<std::size_t>(e.to)] != level_[static_cast<std::size_t>(v)] + 1) continue;
      if (Capacity pushed = augment(e.to, sink, std::min(limit, e.capacity))) {
        e.capacity -= pushed;
        edges_[static_cast<std::size_t>(id ^ 1)].capacity += pushed;
        return pushed;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<int> next_;
};

}  // namespace kbranch
