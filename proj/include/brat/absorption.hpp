#pragma once

#include "brat/af.hpp"
#include "brat/diagram.hpp"
#include "brat/relations.hpp"
#include "brat/transforms.hpp"

namespace brat {

struct AbsorptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Level-respecting embedding of a template diagram into a host: vmap[k] is
// the host vertex position of template vertex i at level k, emap[k-1] the
// host edge index of template edge j at level k. Level 0 maps root to root
// for the distinguished-subdiagram embedding; replicas shift levels.
struct Embedding {
  std::vector<std::vector<int>> vmap;
  std::vector<std::vector<int>> emap;
};

struct AbsorptionScaffold {
  Diagram host;    // (V, E)
  Diagram tmplW;   // (W, F): the diagram of the absorbed set itself
  Diagram tmplWp;  // (W', F'): the join diagram
  Quotient tq;     // (W, F) -> (W', F'), full strictness

  Embedding yemb;  // copy of tmplW inside the host
  Subdiagram ysub; // its edge set (W~, F~)

  Path spine;      // e_1 .. e_N, t(e_n) outside the absorbed vertex sets

  // replicas[m-1]: copy of tmplWp rooted at t(e_m), template level k living
  // at host level m+k.
  std::vector<Embedding> replicas;

  Subdiagram lsub;  // (L, G) = F~ together with spine and replica edges
  Subdiagram lpsub; // (L', G') = spine and replica edges only

  Rat thin_l;  // thinness bound of (L, G) at full depth
  Rat thin_lp; // thinness bound of (L', G') at full depth
};

struct AbsorptionResult {
  Diagram rewritten; // (Vbar, Ebar)
  Quotient qbar;     // rewritten -> host, source-fiber strictness

  // Host vertex fibers: fiber[n][v] lists the rewritten vertex positions
  // over host vertex v at level n.
  std::vector<std::vector<std::vector<int>>> fiber;

  // Images of the replicas after replacement: replica m's template (W, F)
  // vertex i at level k sits at rewritten position rep_v[m-1][k][i], its
  // edge j at rewritten index rep_e[m-1][k-1][j].
  std::vector<std::vector<std::vector<int>>> rep_v;
  std::vector<std::vector<std::vector<int>>> rep_e;

  std::vector<int> spine_bar; // rewritten edge indices of the spine

  // ye_bar[n-1][j]: rewritten index of the copy of absorbed edge j at level n.
  std::vector<std::vector<int>> ye_bar;

  Subdiagram lbar;  // image of (L, G)
  Subdiagram lpbar; // image of (L', G')
};

// Thm 4.6 preconditions: vertex budget, per-pair multiplicity budget, and
// the half bounds on the absorbed subdiagram.
ValidationReport check_capacity_conditions(const Diagram& host,
                                           const Subdiagram& ysub,
                                           const Diagram& tmplW,
                                           const Diagram& tmplWp);

// Chooses the spine and plants one replica of (W', F') per level, all
// vertex-disjoint from the absorbed copy and from each other. Choices are
// least-index; a nonzero seed rotates among the admissible options.
AbsorptionScaffold plant_replicas(const Diagram& host, const Embedding& yemb,
                                  const Diagram& tmplW, const Diagram& tmplWp,
                                  const Quotient& tq, unsigned seed = 0);

AbsorptionResult build_absorption_diagram(const AbsorptionScaffold& sc);

struct AlphaReport {
  ValidationReport report;
  // alpha on depth-N paths of the rewritten diagram, domain (Lbar, Gbar)
  // paths, codomain (L'bar, G'bar) paths.
  std::vector<std::pair<Path, Path>> graph;
};

// The shift: absorbed-copy paths to replica 1, replica m to replica m+1,
// spine fixed. At finite depth the deepest replica collapses onto the spine,
// so bijectivity is checked away from that truncation boundary. Also checks
// that the K-relation (on absorbed points, tied to paths by the coding)
// moves to K_1 and each K_m to K_{m+1}.
AlphaReport shift_map_alpha(const AbsorptionResult& res,
                            const AbsorptionScaffold& sc, const EqRel& k_rel,
                            const PathCoding& ycoding);

struct StarReport {
  bool sound = false;
  bool complete = false;     // at the requested cofinality level
  int requested_level = 0;
  int min_margin = -1;       // N - (largest level with completeness)
  std::vector<std::string> unreached; // witnesses for incompleteness
  ValidationReport report;
};

// Generated-relation check for the rewrite: the closure of the rewritten
// diagram's terminal relation with the replica relations K_1, K_2, ...
// must refine the host terminal relation (soundness) and reach every pair
// cofinal from the given level (completeness). Computed exactly on the
// lifting automaton; skip_k suppresses K_j generators (negative controls).
StarReport verify_star(const AbsorptionResult& res,
                       const AbsorptionScaffold& sc, int level,
                       const std::vector<int>& skip_k = {});

struct DemoStage {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct DemoReport {
  std::vector<DemoStage> stages;
  int margin = -1;
  bool all_pass() const;
};

// End-to-end two-point pipeline at the given depth.
DemoReport two_point_demo(int depth, int star_level = -1);

// The synthetic simple host used by the demo: the absorbed two-chain tree in
// the first two vertices of each level, one spine lane, and enough extra
// vertices and parallel edges to meet the capacity conditions.
std::pair<Diagram, Embedding> demo_host(const Diagram& tmplW);

} // namespace brat
