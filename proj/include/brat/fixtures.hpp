#pragma once

#include "brat/diagram.hpp"

namespace brat::fixtures {

// Two vertex-disjoint chains x_1..x_N and y_1..y_N hanging off the root.
Diagram tree2(int depth);

// One vertex per level, two parallel edges (a_n, b_n) per level.
Diagram odo2(int depth);

// Two parallel edges v_0 -> z_1, then a single chain z_1 -> z_2 -> ...
Diagram loop1(int depth);

// Subdiagram of odo2(depth) taking the first of the two edges at each level.
Subdiagram odo2_half(const Diagram& host);

// The quotient tree2 -> loop1: x_n, y_n |-> z_n, the two level-1 edges map
// to the two loop edges, both branch edges at level n >= 2 to the chain edge.
Quotient tree_to_loop(int depth);

} // namespace brat::fixtures
