#include "brat/af.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace brat {

AfClasses af_classes_at(const Diagram& d, int n, int N, long cap) {
  if (n < 0 || N < n || N > d.depth()) throw std::out_of_range("af levels");
  AfClasses out;
  out.from_level = n;
  out.depth = N;
  out.paths = enumerate_paths(d, N, cap);
  std::map<std::pair<int, Path>, int> ids;
  out.cls.resize(out.paths.size());
  for (size_t i = 0; i < out.paths.size(); ++i) {
    const Path& p = out.paths[i];
    Path suffix(p.begin() + n, p.end());
    int term = p.empty() ? 0 : path_terminal(d, p);
    auto key = std::make_pair(term, std::move(suffix));
    auto it = ids.find(key);
    if (it == ids.end()) {
      it = ids.emplace(key, static_cast<int>(out.classes.size())).first;
      out.classes.emplace_back();
    }
    out.cls[i] = it->second;
    out.classes[it->second].push_back(static_cast<int>(i));
  }
  // Tower heights: a class whose suffix enters level n at vertex v must have
  // exactly as many members as there are depth-n paths into v.
  if (N > 0) {
    auto counts = count_paths(d, n);
    DiagramIndex ix(d);
    for (const auto& members : out.classes) {
      const Path& p = out.paths[members[0]];
      int v = n == N ? path_terminal(d, p)
                     : (n == 0 ? 0 : ix.vsrc[n + 1][p[n]]);
      if (Int(members.size()) != counts.counts[v])
        throw std::logic_error("cofinality class size does not match the "
                               "path count into its entry vertex");
    }
  }
  return out;
}

namespace {

// Vertex name for a class: its least member's point name.
std::string rep_name(const EqRel& r, const std::vector<int>& cls) {
  return r.points[cls.front()];
}

} // namespace

FiltrationDiagram diagram_from_filtration(const std::vector<EqRel>& chain) {
  if (chain.empty()) throw FiltrationError("empty chain");
  if (!chain[0].is_discrete())
    throw FiltrationError("chain must start at the diagonal");
  for (size_t n = 1; n < chain.size(); ++n) {
    if (!chain[n].same_points(chain[0]))
      throw FiltrationError("chain point sets differ");
    if (!chain[n - 1].subset_of(chain[n]))
      throw FiltrationError("chain is not nested at step " + std::to_string(n));
  }
  int M = static_cast<int>(chain.size()) - 1;
  int npts = chain[0].size();
  FiltrationDiagram fd;
  fd.d.verts.push_back({"v0"});
  fd.d.edges.resize(M);
  fd.classes_at.resize(M + 1);
  // class index of each point, per level
  std::vector<std::vector<int>> clspos(M + 1, std::vector<int>(npts));
  for (int n = 1; n <= M; ++n) {
    fd.classes_at[n] = chain[n].classes();
    std::vector<std::string> vs;
    for (size_t i = 0; i < fd.classes_at[n].size(); ++i) {
      vs.push_back(rep_name(chain[n], fd.classes_at[n][i]));
      for (int x : fd.classes_at[n][i]) clspos[n][x] = static_cast<int>(i);
    }
    fd.d.verts.push_back(std::move(vs));
  }
  // Level 1: one edge per point, so each level-1 vertex receives exactly as
  // many edges as its class has members.
  for (int x = 0; x < npts; ++x)
    fd.d.edges[0].push_back(
        {chain[0].points[x], "v0", fd.d.verts[1][clspos[1][x]]});
  // Level n+1: one edge per R_n-class, from its vertex to the R_{n+1}-class
  // containing it.
  for (int n = 1; n < M; ++n)
    for (size_t i = 0; i < fd.classes_at[n].size(); ++i) {
      int x = fd.classes_at[n][i].front();
      fd.d.edges[n].push_back({fd.d.verts[n][i], fd.d.verts[n][i],
                               fd.d.verts[n + 1][clspos[n + 1][x]]});
    }
  // Coding: the path of x picks its own level-1 edge, then its class edge at
  // every later level.
  fd.coding.F.resize(npts);
  for (int x = 0; x < npts; ++x) {
    Path p{x};
    for (int n = 1; n < M; ++n) p.push_back(clspos[n][x]);
    fd.coding.F[x] = std::move(p);
  }
  // Consistency: the coding is a bijection onto the depth-M path set, and
  // the height recursion holds (class size = sum of subclass sizes, one edge
  // per contained subclass).
  auto rep = validate_diagram(fd.d);
  if (!rep.ok())
    throw FiltrationError("constructed diagram invalid: " + rep.joined());
  if (M >= 1) {
    auto all = enumerate_paths(fd.d, M);
    std::set<Path> have(all.begin(), all.end());
    std::set<Path> coded(fd.coding.F.begin(), fd.coding.F.end());
    if (have != coded)
      throw FiltrationError("coding is not a bijection onto the path set");
    for (int n = 1; n < M; ++n) {
      auto inc = incidence_matrix(fd.d, n + 1);
      for (size_t i = 0; i < fd.classes_at[n].size(); ++i)
        for (size_t j = 0; j < fd.classes_at[n + 1].size(); ++j) {
          bool contained =
              chain[n + 1].related(fd.classes_at[n][i].front(),
                                   fd.classes_at[n + 1][j].front());
          if (inc[i][j] != (contained ? 1 : 0))
            throw FiltrationError("edge multiplicity law violated");
        }
      for (size_t j = 0; j < fd.classes_at[n + 1].size(); ++j) {
        size_t total = 0;
        for (size_t i = 0; i < fd.classes_at[n].size(); ++i)
          if (inc[i][j] != 0) total += fd.classes_at[n][i].size();
        if (total != fd.classes_at[n + 1][j].size())
          throw FiltrationError("height recursion violated");
      }
    }
    auto inc1 = incidence_matrix(fd.d, 1);
    for (size_t j = 0; j < fd.classes_at[1].size(); ++j)
      if (inc1[0][j] != Int(fd.classes_at[1][j].size()))
        throw FiltrationError("level-1 edge count law violated");
  }
  return fd;
}

TransverseDiagrams transverse_diagrams(const std::vector<EqRel>& user_chain,
                                       const EqRel& s) {
  TransverseDiagrams td;
  if (user_chain.empty()) throw FiltrationError("empty chain");
  std::vector<EqRel> chain = user_chain;
  if (chain.size() >= 2 && !chain[1].is_discrete()) {
    chain.insert(chain.begin() + 1, chain[0]);
    td.shifted = true;
  }
  auto tr = find_transversal(chain.back(), s);
  if (!tr.ok)
    throw FiltrationError("chain top is not transverse to S: " + tr.reason);
  td.chain = transverse_filtration(chain, s, tr.witness);
  td.joined.push_back(td.chain[0]); // the diagonal
  for (size_t n = 1; n < td.chain.size(); ++n)
    td.joined.push_back(join(td.chain[n], s));
  td.d = diagram_from_filtration(td.chain);
  td.dprime = diagram_from_filtration(td.joined);
  int M = static_cast<int>(td.chain.size()) - 1;
  int npts = td.chain[0].size();

  td.q.strict = Strictness::full;
  td.q.vmap.resize(M + 1);
  td.q.emap.resize(M);
  td.q.vmap[0] = {0};
  auto pos_of = [&](const std::vector<std::vector<int>>& classes, int x) {
    for (size_t i = 0; i < classes.size(); ++i)
      for (int y : classes[i])
        if (y == x) return static_cast<int>(i);
    return -1;
  };
  for (int n = 1; n <= M; ++n) {
    td.q.vmap[n].resize(td.d.classes_at[n].size());
    for (size_t i = 0; i < td.d.classes_at[n].size(); ++i)
      td.q.vmap[n][i] =
          pos_of(td.dprime.classes_at[n], td.d.classes_at[n][i].front());
  }
  if (M >= 1) {
    td.q.emap[0].resize(npts);
    std::iota(td.q.emap[0].begin(), td.q.emap[0].end(), 0);
  }
  for (int n = 1; n < M; ++n) {
    // Edges at level n+1 are the level-n classes on both sides.
    td.q.emap[n].resize(td.d.classes_at[n].size());
    for (size_t i = 0; i < td.d.classes_at[n].size(); ++i)
      td.q.emap[n][i] =
          pos_of(td.dprime.classes_at[n], td.d.classes_at[n][i].front());
  }

  auto qrep = validate_quotient(td.d.d, td.dprime.d, td.q);
  for (const auto& issue : qrep.issues) td.report.add("quotient: " + issue);

  // S must reappear as cofinality-from-level-1 of the join diagram under the
  // coding.
  if (M >= 1) {
    auto af1 = af_classes_at(td.dprime.d, 1, M);
    std::map<Path, int> path_cls;
    for (size_t i = 0; i < af1.paths.size(); ++i)
      path_cls[af1.paths[i]] = af1.cls[i];
    for (int x = 0; x < npts; ++x)
      for (int y = 0; y < npts; ++y) {
        bool in_s = s.related(x, y);
        bool in_af = path_cls.at(td.dprime.coding.F[x]) ==
                     path_cls.at(td.dprime.coding.F[y]);
        if (in_s != in_af) {
          td.report.add("cofinality from level 1 does not match S at (" +
                        s.points[x] + "," + s.points[y] + ")");
          goto af_done;
        }
      }
  }
af_done:;
  {
    auto gen = joint_generation_check(td);
    for (const auto& issue : gen.issues) td.report.add(issue);
  }
  return td;
}

ValidationReport joint_generation_check(const TransverseDiagrams& td,
                                        long cap) {
  ValidationReport rep;
  int M = td.d.d.depth();
  if (M == 0) return rep;
  auto dp_paths = enumerate_paths(td.dprime.d, M, cap);
  std::map<Path, int> pix;
  for (size_t i = 0; i < dp_paths.size(); ++i)
    pix[dp_paths[i]] = static_cast<int>(i);
  int n = static_cast<int>(dp_paths.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  // Generators 1: cofinality-from-level-1 pairs of dprime.
  auto af1 = af_classes_at(td.dprime.d, 1, M, cap);
  for (const auto& members : af1.classes)
    for (size_t i = 1; i < members.size(); ++i) {
      unite(pix.at(af1.paths[members[0]]), pix.at(af1.paths[members[i]]));
    }
  // Generators 2: images of d's terminal-vertex pairs under the edge map.
  auto d_paths = enumerate_paths(td.d.d, M, cap);
  std::map<int, int> first_with_term; // d terminal -> dprime path index
  for (const auto& p : d_paths) {
    int t = path_terminal(td.d.d, p);
    int img = pix.at(map_path(td.d.d, td.dprime.d, td.q, p));
    auto it = first_with_term.find(t);
    if (it == first_with_term.end())
      first_with_term[t] = img;
    else
      unite(it->second, img);
  }
  // The closure must be exactly dprime's terminal-vertex partition.
  for (size_t i = 0; i < dp_paths.size(); ++i)
    for (size_t j = i + 1; j < dp_paths.size(); ++j) {
      bool same_term = path_terminal(td.dprime.d, dp_paths[i]) ==
                       path_terminal(td.dprime.d, dp_paths[j]);
      bool joined = find(static_cast<int>(i)) == find(static_cast<int>(j));
      if (same_term != joined) {
        rep.add(std::string("joint generation law fails: pair is ") +
                (same_term ? "terminal-equal but not generated"
                           : "generated but not terminal-equal"));
        return rep;
      }
    }
  return rep;
}

} // namespace brat
