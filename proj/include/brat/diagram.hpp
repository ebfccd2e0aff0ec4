#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "brat/numeric.hpp"

namespace brat {

// An edge at level n goes from a vertex at level n-1 (src) to one at level n
// (dst). Ids are opaque strings, unique within their level only.
struct Edge {
  std::string id;
  std::string src;
  std::string dst;
};

// Graded graph with a single root. verts[n] is the ordered vertex set V_n for
// n = 0..depth; edges[n-1] is the ordered edge set E_n for n = 1..depth.
// Order is insertion order and is significant: every operation that has to
// make an arbitrary choice resolves it by position in these vectors.
struct Diagram {
  std::vector<std::vector<std::string>> verts;
  std::vector<std::vector<Edge>> edges;

  int depth() const { return static_cast<int>(verts.size()) - 1; }

  const std::vector<std::string>& vs(int n) const { return verts.at(n); }
  const std::vector<Edge>& es(int n) const { return edges.at(n - 1); }
  std::vector<Edge>& es(int n) { return edges.at(n - 1); }

  int vertex_index(int n, const std::string& id) const;
  int edge_index(int n, const std::string& id) const;
};

// Per-level adjacency and id lookup, built once per algorithm run.
struct DiagramIndex {
  explicit DiagramIndex(const Diagram& d);

  const Diagram* d;
  // out[n][v]: indices into d->es(n+1) of edges with source v in V_n.
  std::vector<std::vector<std::vector<int>>> out;
  // in[n][v]: indices into d->es(n) of edges with range v in V_n (n >= 1).
  std::vector<std::vector<std::vector<int>>> in;
  // vsrc[n][e] / vdst[n][e]: vertex positions of the endpoints of edge e in E_n.
  std::vector<std::vector<int>> vsrc;
  std::vector<std::vector<int>> vdst;
};

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
  void add(std::string s) { issues.push_back(std::move(s)); }
  std::string joined() const;
};

// A finite path (e_1, ..., e_n) stored as the position of each edge within
// its level's edge vector.
using Path = std::vector<int>;

struct PathCountVector {
  int level = 0;
  std::vector<Int> counts; // indexed like verts[level]
  Int total() const;
};

struct EnumerationCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Subset of a host diagram's edges, one (sorted, duplicate-free) index list
// per level. The vertex set is always the induced one.
struct Subdiagram {
  std::vector<std::vector<int>> sel; // sel[n-1]: indices into host E_n

  bool contains(int n, int e) const;
};

enum class Strictness { full, source_fiber_only };

// Level-respecting vertex/edge surjections between two diagrams of equal
// depth, stored positionally: vmap[n][i] is the position in the target V_n of
// the image of source vertex i, emap[n-1][j] likewise for E_n.
struct Quotient {
  std::vector<std::vector<int>> vmap;
  std::vector<std::vector<int>> emap;
  Strictness strict = Strictness::full;
};

ValidationReport validate_diagram(const Diagram& d);

// Entry (v, w) counts edges of E_n from v in V_{n-1} to w in V_n.
std::vector<std::vector<Int>> incidence_matrix(const Diagram& d, int n);

PathCountVector count_paths(const Diagram& d, int n);

inline constexpr long kDefaultEnumCap = 1000000;

std::vector<Path> enumerate_paths(const Diagram& d, int n,
                                  long cap = kDefaultEnumCap);

// Terminal vertex position of a (depth >= 1) path; root position 0 otherwise.
int path_terminal(const Diagram& d, const Path& p);

std::vector<std::string> path_edge_ids(const Diagram& d, const Path& p);

// Induced vertex sets of a subdiagram: level 0 is {v_0} whenever sel is
// nonempty anywhere, level n >= 1 is t(F_n).
std::vector<std::vector<int>> subdiagram_vertices(const Diagram& host,
                                                  const Subdiagram& s);

ValidationReport validate_subdiagram(const Diagram& host, const Subdiagram& s);

// Path counts inside the subdiagram, indexed like the host's verts[n]
// (vertices outside the subdiagram get 0).
PathCountVector count_paths_sub(const Diagram& host, const Subdiagram& s,
                                int n);

// Depth-n paths all of whose edges lie in the subdiagram.
std::vector<Path> enumerate_paths_sub(const Diagram& host, const Subdiagram& s,
                                      int n, long cap = kDefaultEnumCap);

ValidationReport validate_quotient(const Diagram& src, const Diagram& dst,
                                   const Quotient& q);

// Coordinatewise image of a source path under q.
Path map_path(const Diagram& src, const Diagram& dst, const Quotient& q,
              const Path& p);

// Unique lift of a target path through a quotient satisfying the
// source-fiber bijection condition; nullopt when some step has no preimage.
std::optional<Path> lift_path(const Diagram& src, const Diagram& dst,
                              const Quotient& q, const Path& p);

// Exhaustive check that p |-> q(p) is a bijection between depth-n path sets.
ValidationReport check_lift_bijection(const Diagram& src, const Diagram& dst,
                                      const Quotient& q, int n,
                                      long cap = kDefaultEnumCap);

} // namespace brat
