#pragma once

#include "kbranch/digraph.hpp"

namespace fixtures {

using kbranch::Digraph;

// Vertices and arcs are 0-based here; the arc comments give 1-based names.

// e1: 1->2 cost 3
inline Digraph p1() { return Digraph(2, {{0, 1, 3}}); }

// e1: 1->2 cost 3, e2: 2->1 cost 5
inline Digraph p2() { return Digraph(2, {{0, 1, 3}, {1, 0, 5}}); }

// e1: 1->2 cost 1, e2: 1->2 cost 2, e3: 2->1 cost 4
inline Digraph d2() { return Digraph(2, {{0, 1, 1}, {0, 1, 2}, {1, 0, 4}}); }

// a1: 1->2, a2: 2->3, a3: 3->1 (cost 1 each), a4: 1->3 cost 3
inline Digraph c3() { return Digraph(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {0, 2, 3}}); }

}  // namespace fixtures
