#include "brat/diagram.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace brat {

int Diagram::vertex_index(int n, const std::string& id) const {
  const auto& v = verts.at(n);
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] == id) return static_cast<int>(i);
  return -1;
}

int Diagram::edge_index(int n, const std::string& id) const {
  const auto& e = edges.at(n - 1);
  for (size_t i = 0; i < e.size(); ++i)
    if (e[i].id == id) return static_cast<int>(i);
  return -1;
}

DiagramIndex::DiagramIndex(const Diagram& dg) : d(&dg) {
  int N = dg.depth();
  out.resize(N + 1);
  in.resize(N + 1);
  vsrc.resize(N + 1);
  vdst.resize(N + 1);
  for (int n = 0; n <= N; ++n) {
    out[n].resize(dg.vs(n).size());
    in[n].resize(dg.vs(n).size());
  }
  for (int n = 1; n <= N; ++n) {
    const auto& es = dg.es(n);
    vsrc[n].resize(es.size());
    vdst[n].resize(es.size());
    std::map<std::string, int> lo, hi;
    const auto& vlo = dg.vs(n - 1);
    const auto& vhi = dg.vs(n);
    for (size_t i = 0; i < vlo.size(); ++i) lo[vlo[i]] = static_cast<int>(i);
    for (size_t i = 0; i < vhi.size(); ++i) hi[vhi[i]] = static_cast<int>(i);
    for (size_t e = 0; e < es.size(); ++e) {
      auto s = lo.find(es[e].src);
      auto t = hi.find(es[e].dst);
      vsrc[n][e] = s == lo.end() ? -1 : s->second;
      vdst[n][e] = t == hi.end() ? -1 : t->second;
      if (s != lo.end()) out[n - 1][s->second].push_back(static_cast<int>(e));
      if (t != hi.end()) in[n][t->second].push_back(static_cast<int>(e));
    }
  }
}

std::string ValidationReport::joined() const {
  std::ostringstream os;
  for (size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i];
  }
  return os.str();
}

Int PathCountVector::total() const {
  Int t = 0;
  for (const auto& c : counts) t += c;
  return t;
}

ValidationReport validate_diagram(const Diagram& d) {
  ValidationReport rep;
  int N = d.depth();
  if (N < 0 || d.verts.empty()) {
    rep.add("no levels");
    return rep;
  }
  if (static_cast<int>(d.edges.size()) != N)
    rep.add("edge level count " + std::to_string(d.edges.size()) +
            " does not match depth " + std::to_string(N));
  if (d.vs(0).size() != 1)
    rep.add("level 0 must have exactly one vertex, has " +
            std::to_string(d.vs(0).size()));
  for (int n = 0; n <= N; ++n) {
    std::set<std::string> seen;
    for (const auto& id : d.vs(n))
      if (!seen.insert(id).second)
        rep.add("duplicate vertex id " + id + " at level " + std::to_string(n));
    if (d.vs(n).empty())
      rep.add("empty vertex set at level " + std::to_string(n));
  }
  if (!rep.ok()) return rep;
  DiagramIndex ix(d);
  for (int n = 1; n <= N; ++n) {
    std::set<std::string> seen;
    const auto& es = d.es(n);
    for (size_t e = 0; e < es.size(); ++e) {
      if (!seen.insert(es[e].id).second)
        rep.add("duplicate edge id " + es[e].id + " at level " +
                std::to_string(n));
      if (ix.vsrc[n][e] < 0)
        rep.add("edge " + es[e].id + " at level " + std::to_string(n) +
                " has unknown source " + es[e].src);
      if (ix.vdst[n][e] < 0)
        rep.add("edge " + es[e].id + " at level " + std::to_string(n) +
                " has unknown range " + es[e].dst);
    }
  }
  for (int n = 0; n < N; ++n)
    for (size_t v = 0; v < d.vs(n).size(); ++v)
      if (ix.out[n][v].empty())
        rep.add("vertex " + d.vs(n)[v] + " at level " + std::to_string(n) +
                " has no outgoing edge");
  for (int n = 1; n <= N; ++n)
    for (size_t v = 0; v < d.vs(n).size(); ++v)
      if (ix.in[n][v].empty())
        rep.add("vertex " + d.vs(n)[v] + " at level " + std::to_string(n) +
                " has no incoming edge");
  return rep;
}

std::vector<std::vector<Int>> incidence_matrix(const Diagram& d, int n) {
  if (n < 1 || n > d.depth()) throw std::out_of_range("incidence level");
  std::vector<std::vector<Int>> m(d.vs(n - 1).size(),
                                  std::vector<Int>(d.vs(n).size(), 0));
  DiagramIndex ix(d);
  for (size_t e = 0; e < d.es(n).size(); ++e) {
    int s = ix.vsrc[n][e], t = ix.vdst[n][e];
    if (s >= 0 && t >= 0) m[s][t] += 1;
  }
  return m;
}

PathCountVector count_paths(const Diagram& d, int n) {
  if (n < 0 || n > d.depth()) throw std::out_of_range("count level");
  PathCountVector pcv;
  pcv.level = n;
  std::vector<Int> cur(d.vs(0).size(), 1);
  DiagramIndex ix(d);
  for (int k = 1; k <= n; ++k) {
    std::vector<Int> nxt(d.vs(k).size(), 0);
    for (size_t e = 0; e < d.es(k).size(); ++e) {
      int s = ix.vsrc[k][e], t = ix.vdst[k][e];
      if (s >= 0 && t >= 0) nxt[t] += cur[s];
    }
    cur = std::move(nxt);
  }
  pcv.counts = std::move(cur);
  return pcv;
}

std::vector<Path> enumerate_paths(const Diagram& d, int n, long cap) {
  if (n < 0 || n > d.depth()) throw std::out_of_range("enumerate level");
  Int total = count_paths(d, n).total();
  if (total > cap)
    throw EnumerationCapExceeded("path count " + total.str() +
                                 " exceeds cap " + std::to_string(cap));
  DiagramIndex ix(d);
  // Per level and source vertex, edge choices sorted by edge id so the
  // output is in lexicographic edge-id order.
  std::vector<std::vector<std::vector<int>>> choice(n + 1);
  for (int k = 1; k <= n; ++k) {
    choice[k] = ix.out[k - 1];
    for (auto& v : choice[k])
      std::sort(v.begin(), v.end(), [&](int a, int b) {
        return d.es(k)[a].id < d.es(k)[b].id;
      });
  }
  std::vector<Path> result;
  Path cur;
  auto rec = [&](auto&& self, int k, int v) -> void {
    if (k > n) {
      result.push_back(cur);
      return;
    }
    for (int e : choice[k][v]) {
      cur.push_back(e);
      self(self, k + 1, ix.vdst[k][e]);
      cur.pop_back();
    }
  };
  rec(rec, 1, 0);
  return result;
}

int path_terminal(const Diagram& d, const Path& p) {
  if (p.empty()) return 0;
  int n = static_cast<int>(p.size());
  return DiagramIndex(d).vdst[n][p.back()];
}

std::vector<std::string> path_edge_ids(const Diagram& d, const Path& p) {
  std::vector<std::string> ids;
  for (size_t k = 0; k < p.size(); ++k)
    ids.push_back(d.es(static_cast<int>(k) + 1)[p[k]].id);
  return ids;
}

bool Subdiagram::contains(int n, int e) const {
  if (n < 1 || n > static_cast<int>(sel.size())) return false;
  const auto& s = sel[n - 1];
  return std::binary_search(s.begin(), s.end(), e);
}

std::vector<std::vector<int>> subdiagram_vertices(const Diagram& host,
                                                  const Subdiagram& s) {
  int N = host.depth();
  std::vector<std::vector<int>> w(N + 1);
  bool any = false;
  for (const auto& lvl : s.sel)
    if (!lvl.empty()) any = true;
  if (any) w[0].push_back(0);
  DiagramIndex ix(host);
  for (int n = 1; n <= N; ++n) {
    if (n - 1 >= static_cast<int>(s.sel.size())) break;
    std::set<int> t;
    for (int e : s.sel[n - 1]) t.insert(ix.vdst[n][e]);
    w[n].assign(t.begin(), t.end());
  }
  return w;
}

ValidationReport validate_subdiagram(const Diagram& host, const Subdiagram& s) {
  ValidationReport rep;
  int N = host.depth();
  if (static_cast<int>(s.sel.size()) != N) {
    rep.add("subdiagram has " + std::to_string(s.sel.size()) +
            " edge levels, host depth is " + std::to_string(N));
    return rep;
  }
  for (int n = 1; n <= N; ++n)
    for (int e : s.sel[n - 1])
      if (e < 0 || e >= static_cast<int>(host.es(n).size())) {
        rep.add("unknown edge index at level " + std::to_string(n));
        return rep;
      }
  DiagramIndex ix(host);
  // Required: the source set of F at each level equals {v_0} at level 0 and
  // t(F_n) at level n >= 1, i.e. i(F) = {v_0} union t(F).
  for (int n = 0; n < N; ++n) {
    std::set<int> srcs;
    for (int e : s.sel[n]) srcs.insert(ix.vsrc[n + 1][e]);
    std::set<int> want;
    if (n == 0) {
      if (!s.sel[0].empty()) want.insert(0);
    } else {
      for (int e : s.sel[n - 1]) want.insert(ix.vdst[n][e]);
    }
    if (srcs != want) {
      for (int v : want)
        if (!srcs.count(v))
          rep.add("vertex " + host.vs(n)[v] + " at level " + std::to_string(n) +
                  " is in the subdiagram but has no outgoing subdiagram edge");
      for (int v : srcs)
        if (!want.count(v))
          rep.add("subdiagram edge leaves vertex " + host.vs(n)[v] +
                  " at level " + std::to_string(n) +
                  " which is not in the subdiagram");
    }
  }
  if (N >= 1 && s.sel[0].empty()) {
    bool any = false;
    for (const auto& lvl : s.sel)
      if (!lvl.empty()) any = true;
    if (any)
      rep.add("subdiagram has edges but none at level 1, so v_0 has no "
              "outgoing subdiagram edge");
    else if (N > 0)
      rep.add("empty subdiagram of a positive-depth host: v_0 has no "
              "outgoing subdiagram edge");
  }
  return rep;
}

PathCountVector count_paths_sub(const Diagram& host, const Subdiagram& s,
                                int n) {
  if (n < 0 || n > host.depth()) throw std::out_of_range("count level");
  PathCountVector pcv;
  pcv.level = n;
  std::vector<Int> cur(host.vs(0).size(), 1);
  DiagramIndex ix(host);
  for (int k = 1; k <= n; ++k) {
    std::vector<Int> nxt(host.vs(k).size(), 0);
    for (int e : s.sel[k - 1]) {
      int src = ix.vsrc[k][e], t = ix.vdst[k][e];
      if (src >= 0 && t >= 0) nxt[t] += cur[src];
    }
    cur = std::move(nxt);
  }
  pcv.counts = std::move(cur);
  return pcv;
}

std::vector<Path> enumerate_paths_sub(const Diagram& host, const Subdiagram& s,
                                      int n, long cap) {
  if (n < 0 || n > host.depth()) throw std::out_of_range("enumerate level");
  if (count_paths_sub(host, s, n).total() > cap)
    throw EnumerationCapExceeded("subdiagram path count exceeds cap");
  DiagramIndex ix(host);
  std::vector<Path> result;
  Path cur;
  auto rec = [&](auto&& self, int k, int v) -> void {
    if (k > n) {
      result.push_back(cur);
      return;
    }
    for (int e : s.sel[k - 1]) {
      if (ix.vsrc[k][e] != v) continue;
      cur.push_back(e);
      self(self, k + 1, ix.vdst[k][e]);
      cur.pop_back();
    }
  };
  rec(rec, 1, 0);
  return result;
}

ValidationReport validate_quotient(const Diagram& src, const Diagram& dst,
                                   const Quotient& q) {
  ValidationReport rep;
  int N = src.depth();
  if (dst.depth() != N) {
    rep.add("depth mismatch: " + std::to_string(N) + " vs " +
            std::to_string(dst.depth()));
    return rep;
  }
  if (static_cast<int>(q.vmap.size()) != N + 1 ||
      static_cast<int>(q.emap.size()) != N) {
    rep.add("quotient map level counts do not match depth");
    return rep;
  }
  for (int n = 0; n <= N; ++n)
    if (q.vmap[n].size() != src.vs(n).size()) {
      rep.add("vertex map at level " + std::to_string(n) + " has wrong size");
      return rep;
    }
  for (int n = 1; n <= N; ++n)
    if (q.emap[n - 1].size() != src.es(n).size()) {
      rep.add("edge map at level " + std::to_string(n) + " has wrong size");
      return rep;
    }
  DiagramIndex sx(src), dx(dst);
  // Surjectivity of both maps.
  for (int n = 0; n <= N; ++n) {
    std::vector<char> hit(dst.vs(n).size(), 0);
    for (int im : q.vmap[n]) {
      if (im < 0 || im >= static_cast<int>(dst.vs(n).size())) {
        rep.add("vertex map out of range at level " + std::to_string(n));
        return rep;
      }
      hit[im] = 1;
    }
    for (size_t w = 0; w < hit.size(); ++w)
      if (!hit[w])
        rep.add("vertex map not surjective at level " + std::to_string(n) +
                ": " + dst.vs(n)[w] + " unreached");
  }
  for (int n = 1; n <= N; ++n) {
    std::vector<char> hit(dst.es(n).size(), 0);
    for (int im : q.emap[n - 1]) {
      if (im < 0 || im >= static_cast<int>(dst.es(n).size())) {
        rep.add("edge map out of range at level " + std::to_string(n));
        return rep;
      }
      hit[im] = 1;
    }
    for (size_t f = 0; f < hit.size(); ++f)
      if (!hit[f])
        rep.add("edge map not surjective at level " + std::to_string(n) +
                ": " + dst.es(n)[f].id + " unreached");
  }
  // (i) grading commutation: i(q(e)) = q(i(e)) and t(q(e)) = q(t(e)).
  for (int n = 1; n <= N; ++n)
    for (size_t e = 0; e < src.es(n).size(); ++e) {
      int f = q.emap[n - 1][e];
      if (dx.vsrc[n][f] != q.vmap[n - 1][sx.vsrc[n][e]])
        rep.add("source of image of edge " + src.es(n)[e].id + " at level " +
                std::to_string(n) + " does not commute");
      if (dx.vdst[n][f] != q.vmap[n][sx.vdst[n][e]])
        rep.add("range of image of edge " + src.es(n)[e].id + " at level " +
                std::to_string(n) + " does not commute");
    }
  // (ii) source-fiber bijection at every source vertex.
  for (int n = 0; n < N; ++n)
    for (size_t v = 0; v < src.vs(n).size(); ++v) {
      int w = q.vmap[n][v];
      std::set<int> images;
      for (int e : sx.out[n][v]) images.insert(q.emap[n][e]);
      if (images.size() != sx.out[n][v].size() ||
          images.size() != dx.out[n][w].size())
        rep.add("outgoing edges of " + src.vs(n)[v] + " at level " +
                std::to_string(n) + " do not map bijectively onto those of " +
                dst.vs(n)[w]);
    }
  if (q.strict == Strictness::full) {
    // (iii) range-fiber bijection at levels >= 2 plus injectivity of t on
    // the source's E_1.
    for (int n = 2; n <= N; ++n)
      for (size_t v = 0; v < src.vs(n).size(); ++v) {
        int w = q.vmap[n][v];
        std::set<int> images;
        for (int e : sx.in[n][v]) images.insert(q.emap[n - 1][e]);
        if (images.size() != sx.in[n][v].size() ||
            images.size() != dx.in[n][w].size())
          rep.add("incoming edges of " + src.vs(n)[v] + " at level " +
                  std::to_string(n) + " do not map bijectively onto those of " +
                  dst.vs(n)[w]);
      }
    if (N >= 1) {
      std::set<int> targets;
      for (size_t e = 0; e < src.es(1).size(); ++e)
        if (!targets.insert(sx.vdst[1][e]).second)
          rep.add("range map is not injective on level-1 edges of the source");
    }
  }
  return rep;
}

Path map_path(const Diagram& src, const Diagram& dst, const Quotient& q,
              const Path& p) {
  (void)src;
  (void)dst;
  Path out;
  out.reserve(p.size());
  for (size_t k = 0; k < p.size(); ++k) out.push_back(q.emap[k][p[k]]);
  return out;
}

std::optional<Path> lift_path(const Diagram& src, const Diagram& dst,
                              const Quotient& q, const Path& p) {
  DiagramIndex sx(src);
  Path out;
  int state = 0; // position in src verts at current level
  for (size_t k = 0; k < p.size(); ++k) {
    int n = static_cast<int>(k);
    int found = -1;
    for (int e : sx.out[n][state])
      if (q.emap[n][e] == p[k]) {
        found = e;
        break;
      }
    if (found < 0) return std::nullopt;
    out.push_back(found);
    state = sx.vdst[n + 1][found];
  }
  return out;
}

ValidationReport check_lift_bijection(const Diagram& src, const Diagram& dst,
                                      const Quotient& q, int n, long cap) {
  ValidationReport rep;
  auto sp = enumerate_paths(src, n, cap);
  auto tp = enumerate_paths(dst, n, cap);
  std::set<Path> images;
  for (const auto& p : sp) {
    if (!images.insert(map_path(src, dst, q, p)).second)
      rep.add("forward map not injective at depth " + std::to_string(n));
  }
  if (images.size() != tp.size())
    rep.add("forward map image has " + std::to_string(images.size()) +
            " paths, target has " + std::to_string(tp.size()) + " at depth " +
            std::to_string(n));
  else
    for (const auto& p : tp)
      if (!images.count(p)) {
        rep.add("target path unreached at depth " + std::to_string(n));
        break;
      }
  return rep;
}

} // namespace brat
