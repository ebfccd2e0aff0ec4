#pragma once

#include <random>

#include "brat/diagram.hpp"
#include "brat/relations.hpp"

namespace brat::gen {

// Orbit relations of the two coordinate translations on a rows x cols grid,
// with point names shuffled. The translations commute and act freely, so the
// pair is transverse.
struct GridPair {
  EqRel r; // row orbits
  EqRel s; // column orbits
  int rows = 0;
  int cols = 0;
};

GridPair grid_pair(std::mt19937& rng, int max_points = 16);

// A pair that fails transversality, with the failure mode varied by the rng:
// either S = R (intersection beyond the diagonal) or a lopsided S that breaks
// the class-size law.
GridPair broken_pair(std::mt19937& rng, int max_points = 16);

// Nested chain starting at the diagonal, each level a random coarsening of
// the previous one.
std::vector<EqRel> nested_chain(std::mt19937& rng, int max_points = 12,
                                int max_len = 4);

// A chain of row-subgroup orbit relations, every member transverse to the
// column relation s.
struct TransverseInstance {
  std::vector<EqRel> chain;
  EqRel s;
};

TransverseInstance transverse_instance(std::mt19937& rng, int max_points = 8,
                                       int max_chain = 3);

// Complete-bipartite-between-levels diagram with random widths and
// multiplicities; simple by construction.
Diagram simple_host(std::mt19937& rng, int depth);

} // namespace brat::gen
