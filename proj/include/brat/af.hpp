#pragma once

#include "brat/diagram.hpp"
#include "brat/relations.hpp"

namespace brat {

// Partition of the depth-N path set by cofinality from level n: equal edges
// at coordinates n+1..N and equal terminal vertex.
struct AfClasses {
  int from_level = 0;
  int depth = 0;
  std::vector<Path> paths;               // enumeration order
  std::vector<int> cls;                  // class id per path
  std::vector<std::vector<int>> classes; // members per class id
};

AfClasses af_classes_at(const Diagram& d, int n, int N,
                        long cap = kDefaultEnumCap);

// F: point -> full-depth path, bijective onto the diagram's path set.
struct PathCoding {
  std::vector<Path> F;
};

struct FiltrationDiagram {
  Diagram d;
  PathCoding coding;
  // classes_at[n][i]: members of the i-th R_n-class, matching V_n order
  // (n >= 1; the vertex for class i is its least member's point name).
  std::vector<std::vector<std::vector<int>>> classes_at;
};

// The tower construction for a nested chain diagonal = R_0 c= ... c= R_M:
// one vertex per R_n-class at level n, one edge per point at level 1 and one
// edge per R_n-class at level n+1. Verifies the level-1 edge counts, the
// height recursion and bijectivity of the coding; throws on violation.
FiltrationDiagram diagram_from_filtration(const std::vector<EqRel>& chain);

struct TransverseDiagrams {
  bool shifted = false;          // an extra diagonal was inserted as R_1
  std::vector<EqRel> chain;      // transverse cores actually used
  std::vector<EqRel> joined;     // diagonal, then R_n v S
  FiltrationDiagram d;           // from chain
  FiltrationDiagram dprime;      // from joined
  Quotient q;                    // d -> dprime, full strictness
  ValidationReport report;       // quotient + AF_1 and generation checks
};

// Prop-3.6-style pair of diagrams for a chain transverse to S, with the
// connecting quotient. Throws FiltrationError when the chain top is not
// transverse to S.
TransverseDiagrams transverse_diagrams(const std::vector<EqRel>& user_chain,
                                       const EqRel& s);

// Closure of the AF_1 pairs of dprime together with the image of d's
// terminal-vertex pairs equals dprime's terminal-vertex pairs.
ValidationReport joint_generation_check(const TransverseDiagrams& td,
                                        long cap = kDefaultEnumCap);

} // namespace brat
