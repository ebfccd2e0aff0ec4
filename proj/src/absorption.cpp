#include "brat/absorption.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace brat {

namespace {

Int int_sum(const std::vector<Int>& v) {
  Int s = 0;
  for (const auto& x : v) s += x;
  return s;
}

} // namespace

ValidationReport check_capacity_conditions(const Diagram& host,
                                           const Subdiagram& ysub,
                                           const Diagram& tmplW,
                                           const Diagram& tmplWp) {
  ValidationReport rep;
  int N = host.depth();
  if (tmplW.depth() != N || tmplWp.depth() != N) {
    rep.add("template depths do not match the host depth");
    return rep;
  }
  auto wt = subdiagram_vertices(host, ysub);
  auto sub_counts_ok = [&](int n) {
    auto sc = count_paths_sub(host, ysub, n);
    auto hc = count_paths(host, n);
    for (int v : wt[n])
      if (2 * sc.counts[v] > hc.counts[v])
        rep.add("level " + std::to_string(n) + ": absorbed paths into " +
                host.vs(n)[v] + " exceed half the host paths (" +
                sc.counts[v].str() + " vs " + hc.counts[v].str() + ")");
  };
  // The planting consumes one replica of (W', F') per level besides the
  // absorbed copy and the spine, so both the (W, F) and (W', F') versions of
  // the budgets must hold; the (W, F) ones are the stated conditions and
  // dominate whenever the quotient is onto.
  for (int n = 1; n <= N; ++n) {
    long wtn = static_cast<long>(wt[n].size());
    if (2 * wtn > static_cast<long>(host.vs(n).size()))
      rep.add("level " + std::to_string(n) + ": absorbed vertex set is more "
              "than half of the host level");
    long need_v = wtn + 1;
    for (int k = 1; k < n; ++k)
      need_v += static_cast<long>(tmplW.vs(k).size());
    if (static_cast<long>(host.vs(n).size()) < need_v)
      rep.add("level " + std::to_string(n) + ": " +
              std::to_string(host.vs(n).size()) + " vertices, the vertex "
              "budget needs " + std::to_string(need_v));
    long need_e = 0;
    for (int k = 1; k < n; ++k)
      need_e += static_cast<long>(tmplW.es(k).size());
    need_e *= 2;
    if (need_e > 0) {
      auto inc = incidence_matrix(host, n);
      Int least = -1;
      for (const auto& row : inc)
        for (const auto& x : row)
          if (least < 0 || x < least) least = x;
      if (least < need_e)
        rep.add("level " + std::to_string(n) + ": multiplicity " +
                least.str() + " below the edge budget " +
                std::to_string(need_e));
    }
    sub_counts_ok(n);
  }
  return rep;
}

AbsorptionScaffold plant_replicas(const Diagram& host, const Embedding& yemb,
                                  const Diagram& tmplW, const Diagram& tmplWp,
                                  const Quotient& tq, unsigned seed) {
  AbsorptionScaffold sc;
  sc.host = host;
  sc.tmplW = tmplW;
  sc.tmplWp = tmplWp;
  sc.tq = tq;
  sc.yemb = yemb;
  int N = host.depth();

  {
    auto qrep = validate_quotient(tmplW, tmplWp, tq);
    if (!qrep.ok())
      throw AbsorptionError("template quotient invalid: " + qrep.joined());
  }
  sc.ysub.sel.resize(N);
  for (int n = 1; n <= N; ++n) {
    sc.ysub.sel[n - 1] = yemb.emap.at(n - 1);
    std::sort(sc.ysub.sel[n - 1].begin(), sc.ysub.sel[n - 1].end());
  }
  {
    auto rep = validate_subdiagram(host, sc.ysub);
    if (!rep.ok())
      throw AbsorptionError("absorbed subdiagram invalid: " + rep.joined());
    rep = check_capacity_conditions(host, sc.ysub, tmplW, tmplWp);
    if (!rep.ok())
      throw AbsorptionError("capacity conditions fail: " + rep.joined());
    auto sw = simplicity_window(host);
    if (!sw.ok()) throw AbsorptionError("host has no positivity windows");
  }

  DiagramIndex ix(host);
  std::vector<std::set<int>> wt(N + 1); // absorbed vertices per level
  {
    auto w = subdiagram_vertices(host, sc.ysub);
    for (int n = 0; n <= N; ++n) wt[n].insert(w[n].begin(), w[n].end());
  }

  // Spine: always step to an admissible vertex outside the absorbed copy.
  std::vector<int> spine_v(N + 1, 0); // vertex position of t(e_n)
  for (int n = 1; n <= N; ++n) {
    std::vector<int> admissible;
    for (int e : ix.out[n - 1][spine_v[n - 1]])
      if (!wt[n].count(ix.vdst[n][e])) admissible.push_back(e);
    // Group by target vertex; least target first, then least edge.
    std::sort(admissible.begin(), admissible.end(), [&](int a, int b) {
      if (ix.vdst[n][a] != ix.vdst[n][b]) return ix.vdst[n][a] < ix.vdst[n][b];
      return a < b;
    });
    if (admissible.empty())
      throw AbsorptionError("no admissible spine edge at level " +
                            std::to_string(n));
    int e = admissible[seed % admissible.size()];
    sc.spine.push_back(e);
    spine_v[n] = ix.vdst[n][e];
  }

  // used[n]: host vertices at level n already taken by a planted replica.
  std::vector<std::set<int>> used(N + 1);
  for (int m = 1; m < N; ++m) {
    Embedding rep;
    rep.vmap.resize(N - m + 1);
    rep.emap.resize(N - m);
    rep.vmap[0] = {spine_v[m]};
    for (int k = 1; k <= N - m; ++k) {
      int n = m + k;
      size_t want = tmplWp.vs(k).size();
      std::vector<int> picked;
      std::vector<int> admissible;
      for (size_t v = 0; v < host.vs(n).size(); ++v)
        if (!wt[n].count(static_cast<int>(v)) &&
            static_cast<int>(v) != spine_v[n] &&
            !used[n].count(static_cast<int>(v)))
          admissible.push_back(static_cast<int>(v));
      if (admissible.size() < want)
        throw AbsorptionError("not enough free vertices for replica " +
                              std::to_string(m) + " at level " +
                              std::to_string(n));
      size_t start = admissible.empty() ? 0 : seed % admissible.size();
      for (size_t i = 0; picked.size() < want; ++i)
        picked.push_back(admissible[(start + i) % admissible.size()]);
      std::sort(picked.begin(), picked.end());
      for (int v : picked) used[n].insert(v);
      rep.vmap[k] = picked;
    }
    for (int k = 1; k <= N - m; ++k) {
      int n = m + k;
      rep.emap[k - 1].resize(tmplWp.es(k).size());
      DiagramIndex tx(tmplWp);
      // Parallel template edges between one vertex pair take distinct host
      // edges, in index order.
      std::map<std::pair<int, int>, int> taken;
      for (size_t j = 0; j < tmplWp.es(k).size(); ++j) {
        int a = tx.vsrc[k][j], b = tx.vdst[k][j];
        int ha = rep.vmap[k - 1][a], hb = rep.vmap[k][b];
        int skip = taken[{ha, hb}]++;
        int found = -1, seen = 0;
        for (int e : ix.out[n - 1][ha])
          if (ix.vdst[n][e] == hb && seen++ == skip) {
            found = e;
            break;
          }
        if (found < 0)
          throw AbsorptionError("not enough parallel host edges for replica " +
                                std::to_string(m) + " at level " +
                                std::to_string(n));
        rep.emap[k - 1][j] = found;
      }
    }
    sc.replicas.push_back(std::move(rep));
  }

  // Assemble (L', G') and (L, G).
  sc.lpsub.sel.resize(N);
  for (int n = 1; n <= N; ++n) sc.lpsub.sel[n - 1].push_back(sc.spine[n - 1]);
  for (int m = 1; m < N; ++m)
    for (int k = 1; k <= N - m; ++k)
      for (int e : sc.replicas[m - 1].emap[k - 1])
        sc.lpsub.sel[m + k - 1].push_back(e);
  for (auto& lvl : sc.lpsub.sel) {
    std::sort(lvl.begin(), lvl.end());
    lvl.erase(std::unique(lvl.begin(), lvl.end()), lvl.end());
  }
  sc.lsub = sc.lpsub;
  for (int n = 1; n <= N; ++n) {
    auto& lvl = sc.lsub.sel[n - 1];
    lvl.insert(lvl.end(), sc.ysub.sel[n - 1].begin(), sc.ysub.sel[n - 1].end());
    std::sort(lvl.begin(), lvl.end());
    lvl.erase(std::unique(lvl.begin(), lvl.end()), lvl.end());
  }
  for (const Subdiagram* s : {&sc.lsub, &sc.lpsub}) {
    auto rep = validate_subdiagram(host, *s);
    if (!rep.ok())
      throw AbsorptionError("planted subdiagram invalid: " + rep.joined());
  }
  // Levelwise disjointness of the absorbed copy, spine and replicas.
  for (int n = 1; n <= N; ++n) {
    std::set<int> all(wt[n].begin(), wt[n].end());
    if (!all.insert(spine_v[n]).second)
      throw AbsorptionError("spine meets the absorbed copy");
    for (const auto& rep : sc.replicas)
      for (size_t k = 1; k < rep.vmap.size(); ++k) {
        int m = N - static_cast<int>(rep.vmap.size()) + 1;
        if (m + static_cast<int>(k) != n) continue;
        for (int v : rep.vmap[k])
          if (!all.insert(v).second)
            throw AbsorptionError("replica vertex sets are not disjoint at "
                                  "level " + std::to_string(n));
      }
  }
  sc.thin_l = thinness_bound(host, sc.lsub, N);
  sc.thin_lp = thinness_bound(host, sc.lpsub, N);
  return sc;
}

AbsorptionResult build_absorption_diagram(const AbsorptionScaffold& sc) {
  AbsorptionResult res;
  const Diagram& host = sc.host;
  int N = host.depth();
  DiagramIndex ix(host);
  DiagramIndex wx(sc.tmplW);
  DiagramIndex px(sc.tmplWp);

  // Which (replica m, template level k, template W' vertex i) a host vertex
  // carries, if any.
  struct RepVertex {
    int m = 0, k = 0, i = 0;
  };
  std::vector<std::map<int, RepVertex>> carrier(N + 1);
  for (size_t r = 0; r < sc.replicas.size(); ++r) {
    int m = static_cast<int>(r) + 1;
    const auto& rep = sc.replicas[r];
    for (size_t k = 1; k < rep.vmap.size(); ++k)
      for (size_t i = 0; i < rep.vmap[k].size(); ++i)
        carrier[m + k][rep.vmap[k][i]] = {m, static_cast<int>(k),
                                          static_cast<int>(i)};
  }
  // Host edge -> (replica m, template level k, template F' edge j).
  std::vector<std::map<int, RepVertex>> ecarrier(N + 1);
  for (size_t r = 0; r < sc.replicas.size(); ++r) {
    int m = static_cast<int>(r) + 1;
    const auto& rep = sc.replicas[r];
    for (size_t k = 1; k <= rep.emap.size(); ++k)
      for (size_t j = 0; j < rep.emap[k - 1].size(); ++j)
        ecarrier[m + k][rep.emap[k - 1][j]] = {m, static_cast<int>(k),
                                               static_cast<int>(j)};
  }

  // Vertices and fibers.
  res.fiber.resize(N + 1);
  res.rewritten.verts.resize(N + 1);
  res.rewritten.edges.resize(N);
  res.qbar.strict = Strictness::source_fiber_only;
  res.qbar.vmap.resize(N + 1);
  res.qbar.emap.resize(N);
  // fiber_member[n][v]: template W vertex index of each fiber member (only
  // meaningful for carrier vertices).
  std::vector<std::vector<std::vector<int>>> fiber_member(N + 1);
  for (int n = 0; n <= N; ++n) {
    res.fiber[n].resize(host.vs(n).size());
    fiber_member[n].resize(host.vs(n).size());
    for (size_t v = 0; v < host.vs(n).size(); ++v) {
      auto it = carrier[n].find(static_cast<int>(v));
      if (it == carrier[n].end()) {
        res.fiber[n][v].push_back(
            static_cast<int>(res.rewritten.verts[n].size()));
        res.qbar.vmap[n].push_back(static_cast<int>(v));
        res.rewritten.verts[n].push_back(host.vs(n)[v]);
      } else {
        int k = it->second.k;
        long preimages = 0;
        for (int img : sc.tq.vmap[k])
          if (img == it->second.i) ++preimages;
        for (size_t a = 0; a < sc.tmplW.vs(k).size(); ++a)
          if (sc.tq.vmap[k][a] == it->second.i) {
            res.fiber[n][v].push_back(
                static_cast<int>(res.rewritten.verts[n].size()));
            fiber_member[n][v].push_back(static_cast<int>(a));
            res.qbar.vmap[n].push_back(static_cast<int>(v));
            res.rewritten.verts[n].push_back(
                preimages == 1 ? host.vs(n)[v]
                               : host.vs(n)[v] + "~" + sc.tmplW.vs(k)[a]);
          }
        if (res.fiber[n][v].empty())
          throw AbsorptionError("empty quotient fiber over a replica vertex");
      }
    }
  }

  res.rep_v.resize(sc.replicas.size());
  res.rep_e.resize(sc.replicas.size());
  res.ye_bar.resize(N);
  for (size_t r = 0; r < sc.replicas.size(); ++r) {
    int m = static_cast<int>(r) + 1;
    const auto& rep = sc.replicas[r];
    res.rep_v[r].resize(rep.vmap.size());
    res.rep_e[r].resize(rep.emap.size());
    res.rep_v[r][0] = {res.fiber[m][rep.vmap[0][0]][0]};
    for (size_t k = 1; k < rep.vmap.size(); ++k) {
      res.rep_v[r][k].resize(sc.tmplW.vs(k).size(), -1);
      for (size_t i = 0; i < rep.vmap[k].size(); ++i) {
        int hv = rep.vmap[k][i];
        for (size_t a = 0; a < res.fiber[m + k][hv].size(); ++a)
          res.rep_v[r][k][fiber_member[m + k][hv][a]] =
              res.fiber[m + k][hv][a];
      }
      res.rep_e[r][k - 1].resize(sc.tmplW.es(k).size(), -1);
    }
  }
  res.spine_bar.resize(N, -1);

  // Edges, level by level, in host edge order.
  for (int n = 1; n <= N; ++n) {
    std::map<std::pair<int, int>, int> shift; // round-robin per vertex pair
    for (size_t e = 0; e < host.es(n).size(); ++e) {
      int u = ix.vsrc[n][e], v = ix.vdst[n][e];
      auto ec = ecarrier[n].find(static_cast<int>(e));
      if (ec != ecarrier[n].end()) {
        // A replica edge: replaced by the (W, F) edges over it.
        int m = ec->second.m, k = ec->second.k, j = ec->second.i;
        long preimages = 0;
        for (int img : sc.tq.emap[k - 1])
          if (img == j) ++preimages;
        for (size_t f = 0; f < sc.tmplW.es(k).size(); ++f) {
          if (sc.tq.emap[k - 1][f] != j) continue;
          int sbar = k == 1 ? res.rep_v[m - 1][0][0]
                            : res.rep_v[m - 1][k - 1][wx.vsrc[k][f]];
          int tbar = res.rep_v[m - 1][k][wx.vdst[k][f]];
          if (sbar < 0 || tbar < 0)
            throw AbsorptionError("replica fiber vertex missing");
          res.rep_e[m - 1][k - 1][f] =
              static_cast<int>(res.rewritten.es(n).size());
          res.qbar.emap[n - 1].push_back(static_cast<int>(e));
          std::string id = preimages == 1
                               ? host.es(n)[e].id
                               : host.es(n)[e].id + "~" + sc.tmplW.es(k)[f].id;
          res.rewritten.es(n).push_back({std::move(id),
                                         res.rewritten.verts[n - 1][sbar],
                                         res.rewritten.verts[n][tbar]});
        }
        continue;
      }
      const auto& S = res.fiber[n - 1][u];
      const auto& T = res.fiber[n][v];
      int sh = shift[{u, v}]++;
      for (size_t i = 0; i < S.size(); ++i) {
        int tbar = T[(i + sh) % T.size()];
        std::string id = S.size() == 1
                             ? host.es(n)[e].id
                             : host.es(n)[e].id + "~" + std::to_string(i);
        if (static_cast<int>(e) == sc.spine[n - 1])
          res.spine_bar[n - 1] = static_cast<int>(res.rewritten.es(n).size());
        bool is_y = sc.ysub.contains(n, static_cast<int>(e));
        if (is_y) {
          // Absorbed edges are singleton copies; remember their position.
          for (size_t j = 0; j < sc.yemb.emap[n - 1].size(); ++j)
            if (sc.yemb.emap[n - 1][j] == static_cast<int>(e))
              res.ye_bar[n - 1].resize(
                  std::max(res.ye_bar[n - 1].size(), j + 1), -1),
                  res.ye_bar[n - 1][j] =
                      static_cast<int>(res.rewritten.es(n).size());
        }
        res.qbar.emap[n - 1].push_back(static_cast<int>(e));
        res.rewritten.es(n).push_back({id, res.rewritten.verts[n - 1][S[i]],
                                       res.rewritten.verts[n][tbar]});
      }
    }
  }

  // Image subdiagrams.
  res.lpbar.sel.resize(N);
  for (int n = 1; n <= N; ++n) res.lpbar.sel[n - 1].push_back(res.spine_bar[n - 1]);
  for (size_t r = 0; r < res.rep_e.size(); ++r)
    for (size_t k = 1; k <= res.rep_e[r].size(); ++k)
      for (int f : res.rep_e[r][k - 1])
        if (f >= 0) res.lpbar.sel[r + k].push_back(f);
  for (auto& lvl : res.lpbar.sel) {
    std::sort(lvl.begin(), lvl.end());
    lvl.erase(std::unique(lvl.begin(), lvl.end()), lvl.end());
  }
  res.lbar = res.lpbar;
  for (int n = 1; n <= N; ++n) {
    auto& lvl = res.lbar.sel[n - 1];
    for (int f : res.ye_bar[n - 1])
      if (f >= 0) lvl.push_back(f);
    std::sort(lvl.begin(), lvl.end());
    lvl.erase(std::unique(lvl.begin(), lvl.end()), lvl.end());
  }

  // Structural validation of the rewrite.
  {
    auto rep = validate_diagram(res.rewritten);
    if (!rep.ok())
      throw AbsorptionError("rewritten diagram invalid: " + rep.joined());
    rep = validate_quotient(res.rewritten, host, res.qbar);
    if (!rep.ok())
      throw AbsorptionError("rewrite quotient invalid: " + rep.joined());
    auto sw = simplicity_window(res.rewritten);
    if (!sw.ok())
      throw AbsorptionError("rewritten diagram lost its positivity windows");
    for (int n = 0; n <= N; ++n) {
      auto hc = count_paths(host, n);
      auto bc = count_paths(res.rewritten, n);
      std::vector<Int> per_host(host.vs(n).size(), 0);
      for (size_t v = 0; v < res.qbar.vmap[n].size(); ++v)
        per_host[res.qbar.vmap[n][v]] += bc.counts[v];
      for (size_t v = 0; v < per_host.size(); ++v)
        if (per_host[v] != hc.counts[v])
          throw AbsorptionError("path counts do not match through the "
                                "rewrite quotient at level " +
                                std::to_string(n));
    }
    for (const Subdiagram* s : {&res.lbar, &res.lpbar}) {
      auto srep = validate_subdiagram(res.rewritten, *s);
      if (!srep.ok())
        throw AbsorptionError("rewritten subdiagram invalid: " +
                              srep.joined());
    }
  }
  (void)int_sum;
  return res;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(size_t n) : parent(n) {
    for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// A Z-path is the spine, a replica-m path carrying a template (W, F) path,
// or a path through the absorbed copy.
struct ZPath {
  enum Kind { spine, replica, absorbed } kind = spine;
  int m = 0;   // replica index
  Path tpl;    // template (W, F) path
};

// Template (W, F) paths of the given depth, each with its rewritten Z-path.
std::vector<std::pair<Path, Path>> replica_paths(const AbsorptionResult& res,
                                                 const AbsorptionScaffold& sc,
                                                 int m) {
  int N = sc.host.depth();
  std::vector<std::pair<Path, Path>> out;
  for (const Path& tp : enumerate_paths(sc.tmplW, N - m)) {
    Path z(res.spine_bar.begin(), res.spine_bar.begin() + m);
    bool ok = true;
    for (int k = 1; k <= N - m; ++k) {
      int f = res.rep_e[m - 1][k - 1][tp[k - 1]];
      if (f < 0) ok = false;
      z.push_back(f);
    }
    if (ok) out.emplace_back(tp, std::move(z));
  }
  return out;
}

Path absorbed_path(const AbsorptionResult& res, const Path& tp) {
  Path z;
  for (size_t n = 0; n < tp.size(); ++n) z.push_back(res.ye_bar[n][tp[n]]);
  return z;
}

// Unordered pairs of replica-m Z-paths whose join-template images agree
// from coordinate 2 on and share a terminal.
std::set<std::pair<Path, Path>> k_pairs(const AbsorptionResult& res,
                                        const AbsorptionScaffold& sc, int m) {
  std::set<std::pair<Path, Path>> out;
  auto rp = replica_paths(res, sc, m);
  auto key_of = [&](const Path& tp) {
    Path utp;
    for (size_t k = 0; k < tp.size(); ++k)
      utp.push_back(sc.tq.emap[k][tp[k]]);
    Path tail(utp.begin() + 1, utp.end());
    tail.push_back(path_terminal(sc.tmplWp, utp));
    return tail;
  };
  std::map<Path, std::vector<int>> groups;
  for (size_t i = 0; i < rp.size(); ++i)
    groups[key_of(rp[i].first)].push_back(static_cast<int>(i));
  for (const auto& [key, members] : groups)
    for (size_t i = 0; i < members.size(); ++i)
      for (size_t j = i + 1; j < members.size(); ++j) {
        Path a = rp[members[i]].second, b = rp[members[j]].second;
        if (b < a) std::swap(a, b);
        out.emplace(a, b);
      }
  return out;
}

std::pair<Path, Path> norm_pair(Path a, Path b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

} // namespace

AlphaReport shift_map_alpha(const AbsorptionResult& res,
                            const AbsorptionScaffold& sc, const EqRel& k_rel,
                            const PathCoding& ycoding) {
  AlphaReport ar;
  int N = sc.host.depth();

  auto alpha_absorbed = [&](const Path& tp) {
    Path z{res.spine_bar[0]};
    for (int k = 1; k < N; ++k) z.push_back(res.rep_e[0][k - 1][tp[k - 1]]);
    return z;
  };
  auto alpha_replica = [&](int m, const Path& tp) {
    Path z(res.spine_bar.begin(), res.spine_bar.begin() + m + 1);
    for (int k = 1; k < N - m; ++k)
      z.push_back(res.rep_e[m][k - 1][tp[k - 1]]);
    return z;
  };

  // Bijection away from the truncation boundary: absorbed paths and replicas
  // 1..N-2 map onto replicas 1..N-1; the spine is fixed; replica N-1 folds
  // onto the spine at this depth.
  std::set<Path> images, want;
  std::vector<std::pair<Path, Path>> graph;
  for (const Path& tp : enumerate_paths(sc.tmplW, N)) {
    Path z = absorbed_path(res, tp);
    Path img = alpha_absorbed(tp);
    if (!images.insert(img).second)
      ar.report.add("shift is not injective on the absorbed paths");
    graph.emplace_back(std::move(z), std::move(img));
  }
  for (int m = 1; m <= N - 2; ++m)
    for (auto& [tp, z] : replica_paths(res, sc, m)) {
      Path img = alpha_replica(m, tp);
      if (!images.insert(img).second)
        ar.report.add("shift is not injective at replica " +
                      std::to_string(m));
      graph.emplace_back(z, std::move(img));
    }
  {
    Path sp(res.spine_bar.begin(), res.spine_bar.end());
    images.insert(sp);
    graph.emplace_back(sp, sp);
    want.insert(sp);
  }
  for (int m = 1; m <= N - 1; ++m)
    for (auto& [tp, z] : replica_paths(res, sc, m)) want.insert(z);
  if (images != want)
    ar.report.add("shift image is not the replica-and-spine path set");
  for (auto& [tp, z] : replica_paths(res, sc, N - 1))
    graph.emplace_back(z, Path(res.spine_bar.begin(), res.spine_bar.end()));
  ar.graph = std::move(graph);

  // K moves to K_1.
  std::set<std::pair<Path, Path>> k_img;
  for (int x = 0; x < k_rel.size(); ++x)
    for (int y = x + 1; y < k_rel.size(); ++y)
      if (k_rel.related(x, y))
        k_img.insert(norm_pair(alpha_absorbed(ycoding.F[x]),
                               alpha_absorbed(ycoding.F[y])));
  if (k_img != k_pairs(res, sc, 1))
    ar.report.add("K does not map onto K_1");

  // K_m moves to K_{m+1}.
  for (int m = 1; m <= N - 2; ++m) {
    std::set<std::pair<Path, Path>> img;
    auto km = k_pairs(res, sc, m);
    std::map<Path, Path> by_z;
    for (auto& [tp, z] : replica_paths(res, sc, m)) by_z[z] = tp;
    for (const auto& [a, b] : km)
      img.insert(norm_pair(alpha_replica(m, by_z.at(a)),
                           alpha_replica(m, by_z.at(b))));
    if (img != k_pairs(res, sc, m + 1))
      ar.report.add("K_" + std::to_string(m) + " does not map onto K_" +
                    std::to_string(m + 1));
  }
  return ar;
}

StarReport verify_star(const AbsorptionResult& res,
                       const AbsorptionScaffold& sc, int level,
                       const std::vector<int>& skip_k) {
  StarReport sr;
  sr.requested_level = level;
  int N = sc.host.depth();
  if (level < 0 || level >= N) {
    sr.report.add("cofinality level out of range");
    return sr;
  }
  DiagramIndex bx(res.rewritten);
  DiagramIndex hx(sc.host);

  // Transition tables of the lifting automaton: from a rewritten vertex, a
  // host edge determines at most one rewritten edge over it.
  std::vector<std::vector<std::map<int, std::pair<int, int>>>> nxt(N);
  for (int n = 1; n <= N; ++n) {
    nxt[n - 1].resize(res.rewritten.vs(n - 1).size());
    for (size_t f = 0; f < res.rewritten.es(n).size(); ++f) {
      int s = bx.vsrc[n][f];
      int h = res.qbar.emap[n - 1][f];
      auto [it, fresh] =
          nxt[n - 1][s].emplace(h, std::make_pair(static_cast<int>(f),
                                                  bx.vdst[n][f]));
      if (!fresh) {
        sr.report.add("source fibers are not edge-unique at level " +
                      std::to_string(n));
        return sr;
      }
    }
  }
  auto lift_terminal = [&](const Path& host_path) {
    int s = 0;
    for (size_t n = 0; n < host_path.size(); ++n) {
      auto it = nxt[n][s].find(host_path[n]);
      if (it == nxt[n][s].end()) return -1;
      s = it->second.second;
    }
    return s;
  };

  // Closure: rewritten terminal classes merged along the lifted K_j pairs.
  UnionFind uf(res.rewritten.vs(N).size());
  sr.sound = true;
  std::set<int> skip(skip_k.begin(), skip_k.end());
  for (int m = 1; m <= N - 1; ++m) {
    if (skip.count(m)) continue;
    // Host-level K_m pairs: spine prefix, then replica edges carrying
    // join-template paths in one cofinality-from-1 class.
    auto paths = enumerate_paths(sc.tmplWp, N - m);
    std::map<Path, std::vector<size_t>> groups;
    for (size_t i = 0; i < paths.size(); ++i) {
      Path key(paths[i].begin() + 1, paths[i].end());
      key.push_back(path_terminal(sc.tmplWp, paths[i]));
      groups[key].push_back(i);
    }
    auto host_of = [&](const Path& utp) {
      Path hp(sc.spine.begin(), sc.spine.begin() + m);
      for (size_t k = 0; k < utp.size(); ++k)
        hp.push_back(sc.replicas[m - 1].emap[k][utp[k]]);
      return hp;
    };
    for (const auto& [key, members] : groups)
      for (size_t i = 1; i < members.size(); ++i) {
        int a = lift_terminal(host_of(paths[members[0]]));
        int b = lift_terminal(host_of(paths[members[i]]));
        if (a < 0 || b < 0) {
          sr.report.add("a K_" + std::to_string(m) +
                        " generator does not lift");
          return sr;
        }
        if (res.qbar.vmap[N][a] != res.qbar.vmap[N][b]) {
          sr.sound = false;
          sr.report.add("unsound K_" + std::to_string(m) +
                        " generator: terminals over different host vertices");
        }
        uf.unite(a, b);
      }
  }
  // Soundness of the closure: every merged class sits over one host vertex.
  {
    std::map<int, int> root_host;
    for (size_t v = 0; v < res.rewritten.vs(N).size(); ++v) {
      int r = uf.find(static_cast<int>(v));
      auto [it, fresh] = root_host.emplace(r, res.qbar.vmap[N][v]);
      if (!fresh && it->second != res.qbar.vmap[N][v]) {
        sr.sound = false;
        sr.report.add("closure class crosses host terminal vertices");
        break;
      }
    }
  }

  // Completeness at level l: every pair of rewritten vertices over one host
  // vertex at level l must flow, along every common host continuation, into
  // one closure class at depth N.
  auto complete_at = [&](int l, std::vector<std::string>* witness) {
    bool good = true;
    for (size_t hv = 0; hv < sc.host.vs(l).size(); ++hv) {
      const auto& fib = res.fiber[l][hv];
      for (size_t i = 0; i < fib.size() && good; ++i)
        for (size_t j = i + 1; j < fib.size() && good; ++j) {
          std::vector<std::set<std::pair<int, int>>> seen(N + 1);
          std::vector<std::pair<int, std::pair<int, int>>> stack{
              {l, {fib[i], fib[j]}}};
          seen[l].insert({fib[i], fib[j]});
          while (!stack.empty() && good) {
            auto [lvl, pr] = stack.back();
            stack.pop_back();
            if (lvl == N) {
              if (uf.find(pr.first) != uf.find(pr.second)) {
                good = false;
                if (witness)
                  witness->push_back(
                      "level " + std::to_string(l) + " vertex " +
                      sc.host.vs(l)[hv] + ": pair (" +
                      res.rewritten.vs(l)[fib[i]] + ", " +
                      res.rewritten.vs(l)[fib[j]] + ") reaches unmerged (" +
                      res.rewritten.vs(N)[pr.first] + ", " +
                      res.rewritten.vs(N)[pr.second] + ")");
              }
              continue;
            }
            int huv = res.qbar.vmap[lvl][pr.first];
            for (int h : hx.out[lvl][huv]) {
              auto ia = nxt[lvl][pr.first].find(h);
              auto ib = nxt[lvl][pr.second].find(h);
              if (ia == nxt[lvl][pr.first].end() ||
                  ib == nxt[lvl][pr.second].end())
                continue;
              int a = ia->second.second, b = ib->second.second;
              if (a == b) continue;
              if (a > b) std::swap(a, b);
              if (seen[lvl + 1].insert({a, b}).second)
                stack.push_back({lvl + 1, {a, b}});
            }
          }
        }
      if (!good && !witness) return false;
    }
    return good;
  };
  sr.complete = complete_at(level, &sr.unreached);
  for (int l = N - 1; l >= 0; --l)
    if (complete_at(l, nullptr)) {
      sr.min_margin = N - l;
      break;
    }
  return sr;
}

bool DemoReport::all_pass() const {
  for (const auto& st : stages)
    if (!st.pass) return false;
  return !stages.empty();
}

std::pair<Diagram, Embedding> demo_host(const Diagram& tmplW) {
  int N = tmplW.depth();
  Diagram host;
  Embedding emb;
  host.verts.resize(N + 1);
  host.edges.resize(N);
  host.verts[0] = {"v0"};
  emb.vmap.resize(N + 1);
  emb.emap.resize(N);
  emb.vmap[0] = {0};
  long fsum = 0; // template edges strictly below the current level
  std::vector<long> mult(N + 1), width(N + 1);
  width[0] = 1;
  for (int n = 1; n <= N; ++n) {
    long wn = static_cast<long>(tmplW.vs(n).size());
    long budget = 0;
    for (int k = 1; k < n; ++k) budget += static_cast<long>(tmplW.vs(k).size());
    width[n] = std::max(2 * wn, wn + 1 + budget);
    Int most = 0;
    for (const auto& row : incidence_matrix(tmplW, n))
      for (const auto& x : row) most = std::max(most, x);
    mult[n] = std::max<long>({2, 2 * fsum, 2 * most.convert_to<long>()});
    fsum += static_cast<long>(tmplW.es(n).size());
    for (long i = 0; i < width[n]; ++i) {
      host.verts[n].push_back(i < wn ? tmplW.vs(n)[i]
                                     : "h" + std::to_string(n) + "_" +
                                           std::to_string(i));
      if (i < wn) emb.vmap[n].push_back(static_cast<int>(i));
    }
    for (long a = 0; a < width[n - 1]; ++a)
      for (long b = 0; b < width[n]; ++b)
        for (long j = 0; j < mult[n]; ++j)
          host.edges[n - 1].push_back(
              {"g" + std::to_string(n) + "_" + std::to_string(a) + "_" +
                   std::to_string(b) + "_" + std::to_string(j),
               host.verts[n - 1][a], host.verts[n][b]});
  }
  // The template embeds on the parallel-edge budget of each vertex pair.
  DiagramIndex tx(tmplW);
  for (int n = 1; n <= N; ++n) {
    std::map<std::pair<int, int>, long> taken;
    for (size_t f = 0; f < tmplW.es(n).size(); ++f) {
      long a = tx.vsrc[n][f], b = tx.vdst[n][f];
      long j = taken[{static_cast<int>(a), static_cast<int>(b)}]++;
      emb.emap[n - 1].push_back(
          static_cast<int>((a * width[n] + b) * mult[n] + j));
    }
  }
  return {host, emb};
}

DemoReport two_point_demo(int depth, int star_level) {
  DemoReport dr;
  int N = depth;
  if (star_level < 0) star_level = std::max(1, N - 2);
  auto stage = [&](const std::string& name, auto&& body) {
    DemoStage st;
    st.name = name;
    try {
      st.detail = body();
      st.pass = true;
    } catch (const std::exception& e) {
      st.detail = e.what();
    }
    dr.stages.push_back(st);
    return dr.stages.back().pass;
  };
  if (N < 4) {
    dr.stages.push_back({"depth", false, "depth must be at least 4"});
    return dr;
  }

  EqRel k;
  if (!stage("action", [&] {
        auto g = relation_from_group_action({"y1", "y2"}, {{1, 0}});
        if (!g.ok) throw AbsorptionError(g.reason);
        k = g.orbits;
        return "orbit relation from the order-2 swap";
      }))
    return dr;

  TransverseDiagrams td;
  if (!stage("transverse-build", [&] {
        std::vector<EqRel> chain(N + 1, EqRel::discrete({"y1", "y2"}));
        td = transverse_diagrams(chain, k);
        if (!td.report.ok()) throw AbsorptionError(td.report.joined());
        return "two chains over one loop, depth " + std::to_string(N);
      }))
    return dr;

  Diagram host;
  Embedding yemb;
  if (!stage("host", [&] {
        std::tie(host, yemb) = demo_host(td.d.d);
        Subdiagram ys;
        ys.sel = yemb.emap;
        auto rep = check_capacity_conditions(host, ys, td.d.d, td.dprime.d);
        if (!rep.ok()) throw AbsorptionError(rep.joined());
        return std::to_string(host.vs(N).size()) + " terminal vertices";
      }))
    return dr;

  if (!stage("capacity", [&] {
        CapacityRequest req;
        long fsum = 0;
        for (int n = 1; n <= N; ++n) {
          long budget = 0;
          for (int j = 1; j < n; ++j)
            budget += static_cast<long>(td.d.d.vs(j).size());
          req.a.push_back(static_cast<long>(td.d.d.vs(n).size()) + 1 + budget);
          req.b.push_back(std::max<long>(1, 2 * fsum));
          fsum += static_cast<long>(td.d.d.es(n).size());
        }
        auto [cert, rm] = ensure_capacity(host, req);
        bool identity = cert.depth() == host.depth();
        for (int n = 0; identity && n <= N; ++n)
          identity = cert.vs(n).size() == host.vs(n).size() &&
                     (n == 0 || cert.es(n).size() == host.es(n).size());
        if (!identity)
          throw AbsorptionError("capacity pass was not the identity");
        return "host already meets the request";
      }))
    return dr;

  AbsorptionScaffold sc;
  if (!stage("plant", [&] {
        sc = plant_replicas(host, yemb, td.d.d, td.dprime.d, td.q);
        return std::to_string(sc.replicas.size()) + " replicas and a spine";
      }))
    return dr;

  if (!stage("thin", [&] {
        if (2 * sc.thin_lp >= 1)
          throw AbsorptionError("replica-and-spine set is not thin: " +
                                sc.thin_lp.str());
        return "bound " + sc.thin_lp.str();
      }))
    return dr;

  AbsorptionResult res;
  if (!stage("rewrite", [&] {
        res = build_absorption_diagram(sc);
        size_t fib = res.fiber[2][sc.replicas[0].vmap[1][0]].size();
        return "replica fibers of size " + std::to_string(fib);
      }))
    return dr;

  if (!stage("alpha", [&] {
        auto ar = shift_map_alpha(res, sc, k, td.d.coding);
        if (!ar.report.ok()) throw AbsorptionError(ar.report.joined());
        return std::to_string(ar.graph.size()) + " paths shifted";
      }))
    return dr;

  if (!stage("restriction", [&] {
        // R restricted to the absorbed copy joined with K, pushed through
        // the shift, must generate exactly the replica-1 relation.
        auto rp = replica_paths(res, sc, 1);
        std::map<Path, int> pix;
        for (size_t i = 0; i < rp.size(); ++i) pix[rp[i].second] = static_cast<int>(i);
        UnionFind uf(rp.size());
        for (const auto& [a, b] : k_pairs(res, sc, 1))
          uf.unite(pix.at(a), pix.at(b));
        for (size_t i = 0; i < rp.size(); ++i)
          for (size_t j = i + 1; j < rp.size(); ++j)
            if (path_terminal(sc.tmplW, rp[i].first) ==
                path_terminal(sc.tmplW, rp[j].first))
              uf.unite(static_cast<int>(i), static_cast<int>(j));
        auto ar = shift_map_alpha(res, sc, k, td.d.coding);
        std::map<Path, Path> fwd(ar.graph.begin(), ar.graph.end());
        int npts = k.size();
        for (int x = 0; x < npts; ++x)
          for (int y = x + 1; y < npts; ++y) {
            bool rel = k.related(x, y) ||
                       path_terminal(sc.tmplW, td.d.coding.F[x]) ==
                           path_terminal(sc.tmplW, td.d.coding.F[y]);
            Path a = fwd.at(absorbed_path(res, td.d.coding.F[x]));
            Path b = fwd.at(absorbed_path(res, td.d.coding.F[y]));
            bool gen = uf.find(pix.at(a)) == uf.find(pix.at(b));
            if (rel != gen)
              throw AbsorptionError("restricted relation mismatch at (" +
                                    k.points[x] + "," + k.points[y] + ")");
          }
        return "replica-1 relation matches the absorbed one";
      }))
    return dr;

  stage("star", [&] {
    auto sr = verify_star(res, sc, star_level);
    dr.margin = sr.min_margin;
    if (!sr.sound) throw AbsorptionError("unsound: " + sr.report.joined());
    if (!sr.complete)
      throw AbsorptionError("incomplete at level " +
                            std::to_string(star_level) + ": " +
                            (sr.unreached.empty() ? sr.report.joined()
                                                  : sr.unreached.front()));
    return "margin " + std::to_string(sr.min_margin);
  });
  return dr;
}

} // namespace brat
