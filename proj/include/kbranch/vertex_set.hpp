#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace kbranch {

/// Vertices are dense indices 0..n-1. They are printed 1-based.
using Vertex = int;

inline constexpr int kMaxVertices = 64;

/// A subset of the vertex set, stored as a 64-bit mask.
class VertexSet {
 public:
  constexpr VertexSet() = default;
  constexpr explicit VertexSet(std::uint64_t mask) : mask_(mask) {}
  VertexSet(std::initializer_list<Vertex> vertices) {
    for (Vertex v : vertices) insert(v);
  }

  static VertexSet full(int n) {
    return VertexSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static VertexSet singleton(Vertex v) { return VertexSet({v}); }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  int size() const { return std::popcount(mask_); }

  constexpr bool contains(Vertex v) const { return (mask_ >> v) & 1U; }
  void insert(Vertex v) {
    if (v < 0 || v >= kMaxVertices) throw std::out_of_range("vertex index out of range");
    mask_ |= std::uint64_t{1} << v;
  }
  void erase(Vertex v) { mask_ &= ~(std::uint64_t{1} << v); }

  constexpr bool is_subset_of(VertexSet other) const { return (mask_ & ~other.mask_) == 0; }
  constexpr bool intersects(VertexSet other) const { return (mask_ & other.mask_) != 0; }
  /// True iff every member is below n.
  constexpr bool within(int n) const {
    return n >= 64 || (mask_ >> n) == 0;
  }

  friend constexpr VertexSet operator|(VertexSet a, VertexSet b) { return VertexSet(a.mask_ | b.mask_); }
  friend constexpr VertexSet operator&(VertexSet a, VertexSet b) { return VertexSet(a.mask_ & b.mask_); }
  friend constexpr VertexSet operator-(VertexSet a, VertexSet b) { return VertexSet(a.mask_ & ~b.mask_); }
  friend constexpr bool operator==(VertexSet a, VertexSet b) = default;

  std::vector<Vertex> members() const {
    std::vector<Vertex> out;
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  /// Smallest member; undefined on the empty set.
  Vertex front() const { return std::countr_zero(mask_); }

  /// "{1,3}" with 1-based labels.
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (Vertex v : members()) {
      if (!first) s += ',';
      s += std::to_string(v + 1);
      first = false;
    }
    return s + "}";
  }

 private:
  std::uint64_t mask_ = 0;
};

}  // namespace kbranch
