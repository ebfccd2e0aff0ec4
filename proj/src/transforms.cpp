#include "brat/transforms.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

namespace brat {

RecodingMap RecodingMap::identity() {
  RecodingMap r;
  r.forward = [](const Path& p) { return p; };
  r.inverse = [](const Path& p) { return p; };
  return r;
}

RecodingMap RecodingMap::compose(const RecodingMap& first,
                                 const RecodingMap& second) {
  RecodingMap r;
  auto f1 = first.forward, f2 = second.forward;
  auto i1 = first.inverse, i2 = second.inverse;
  r.forward = [f1, f2](const Path& p) { return f2(f1(p)); };
  r.inverse = [i1, i2](const Path& p) { return i1(i2(p)); };
  return r;
}

namespace {

std::string uniquify(std::set<std::string>& used, std::string id) {
  if (used.insert(id).second) return id;
  for (int k = 2;; ++k) {
    std::string cand = id + "#" + std::to_string(k);
    if (used.insert(cand).second) return cand;
  }
}

} // namespace

std::pair<Diagram, RecodingMap> telescope(const Diagram& d,
                                          const std::vector<int>& cuts,
                                          long cap) {
  int N = d.depth();
  if (cuts.size() < 2 || cuts.front() != 0 || cuts.back() != N)
    throw TransformError("cut list must start at 0 and end at the depth");
  for (size_t i = 1; i < cuts.size(); ++i)
    if (cuts[i] <= cuts[i - 1] || cuts[i] > N)
      throw TransformError("cut list must be strictly increasing within depth");

  DiagramIndex ix(d);
  Diagram out;
  out.verts.push_back(d.vs(0));
  out.edges.resize(cuts.size() - 1);
  // Per new level: the original edge segment of each new edge, and a lookup
  // from segment to new edge position (shared with the recoding closures).
  auto segs = std::make_shared<std::vector<std::vector<Path>>>();
  auto lookup = std::make_shared<std::vector<std::map<Path, int>>>();
  segs->resize(cuts.size() - 1);
  lookup->resize(cuts.size() - 1);

  for (size_t k = 1; k < cuts.size(); ++k) {
    int lo = cuts[k - 1], hi = cuts[k];
    out.verts.push_back(d.vs(hi));
    std::set<std::string> used;
    long produced = 0;
    Path seg;
    auto rec = [&](auto&& self, int lvl, int v) -> void {
      if (lvl == hi) {
        if (++produced > cap)
          throw EnumerationCapExceeded("telescoped edge count exceeds cap");
        std::string id;
        for (size_t i = 0; i < seg.size(); ++i) {
          if (i) id += ".";
          id += d.es(lo + static_cast<int>(i) + 1)[seg[i]].id;
        }
        (*lookup)[k - 1][seg] = static_cast<int>(out.edges[k - 1].size());
        (*segs)[k - 1].push_back(seg);
        out.edges[k - 1].push_back({uniquify(used, id),
                                    d.vs(lo)[ix.vsrc[lo + 1].empty()
                                                 ? 0
                                                 : ix.vsrc[lo + 1][seg[0]]],
                                    d.vs(hi)[v]});
        return;
      }
      for (int e : ix.out[lvl][v]) {
        seg.push_back(e);
        self(self, lvl + 1, ix.vdst[lvl + 1][e]);
        seg.pop_back();
      }
    };
    for (size_t v = 0; v < d.vs(lo).size(); ++v) rec(rec, lo, static_cast<int>(v));
  }

  RecodingMap r;
  std::vector<int> c = cuts;
  r.forward = [c, lookup](const Path& p) {
    Path out;
    for (size_t k = 1; k < c.size(); ++k) {
      Path seg(p.begin() + c[k - 1], p.begin() + c[k]);
      out.push_back((*lookup)[k - 1].at(seg));
    }
    return out;
  };
  r.inverse = [segs](const Path& p) {
    Path out;
    for (size_t k = 0; k < p.size(); ++k) {
      const Path& seg = (*segs)[k][p[k]];
      out.insert(out.end(), seg.begin(), seg.end());
    }
    return out;
  };
  return {std::move(out), std::move(r)};
}

std::pair<Diagram, RecodingMap> microscope(const Diagram& d, int n) {
  int N = d.depth();
  if (n < 1 || n > N) throw std::out_of_range("microscope level");
  Diagram out;
  out.verts.assign(d.verts.begin(), d.verts.begin() + n);
  std::vector<std::string> mid;
  for (const auto& e : d.es(n)) mid.push_back(e.id);
  out.verts.push_back(mid);
  out.verts.insert(out.verts.end(), d.verts.begin() + n, d.verts.end());
  out.edges.assign(d.edges.begin(), d.edges.begin() + (n - 1));
  std::vector<Edge> lower, upper;
  for (const auto& e : d.es(n)) {
    lower.push_back({e.id + "v", e.src, e.id});
    upper.push_back({e.id + "^", e.id, e.dst});
  }
  out.edges.push_back(std::move(lower));
  out.edges.push_back(std::move(upper));
  out.edges.insert(out.edges.end(), d.edges.begin() + n, d.edges.end());

  RecodingMap r;
  r.forward = [n](const Path& p) {
    Path out(p.begin(), p.begin() + (n - 1));
    out.push_back(p[n - 1]);
    out.push_back(p[n - 1]);
    out.insert(out.end(), p.begin() + n, p.end());
    return out;
  };
  r.inverse = [n](const Path& p) {
    Path out(p.begin(), p.begin() + n);
    out.insert(out.end(), p.begin() + n + 1, p.end());
    return out;
  };
  return {std::move(out), std::move(r)};
}

SimplicityWindows simplicity_window(const Diagram& d) {
  SimplicityWindows sw;
  int N = d.depth();
  sw.window.assign(std::max(N, 0), -1);
  for (int n = 0; n < N; ++n) {
    std::vector<std::vector<Int>> prod;
    for (int m = n + 1; m <= N; ++m) {
      auto inc = incidence_matrix(d, m);
      if (m == n + 1) {
        prod = std::move(inc);
      } else {
        std::vector<std::vector<Int>> nxt(
            prod.size(), std::vector<Int>(inc[0].size(), 0));
        for (size_t i = 0; i < prod.size(); ++i)
          for (size_t k = 0; k < inc.size(); ++k)
            if (prod[i][k] != 0)
              for (size_t j = 0; j < inc[k].size(); ++j)
                nxt[i][j] += prod[i][k] * inc[k][j];
        prod = std::move(nxt);
      }
      bool positive = true;
      for (const auto& row : prod)
        for (const auto& x : row)
          if (x == 0) positive = false;
      if (positive) {
        sw.window[n] = m;
        break;
      }
    }
    if (sw.window[n] < 0) sw.failed_levels.push_back(n);
  }
  return sw;
}

ValidationReport check_capacity(const Diagram& d, const CapacityRequest& req) {
  ValidationReport rep;
  if (req.a.size() != req.b.size()) {
    rep.add("capacity sequences have different lengths");
    return rep;
  }
  int T = static_cast<int>(req.a.size());
  if (d.depth() < T) {
    rep.add("diagram depth below requested capacity depth");
    return rep;
  }
  for (int n = 1; n <= T; ++n) {
    if (static_cast<long>(d.vs(n).size()) < req.a[n - 1])
      rep.add("level " + std::to_string(n) + " has " +
              std::to_string(d.vs(n).size()) + " vertices, needs " +
              std::to_string(req.a[n - 1]));
    auto inc = incidence_matrix(d, n);
    for (const auto& row : inc)
      for (const auto& x : row)
        if (x < req.b[n - 1]) {
          rep.add("level " + std::to_string(n) + " has an edge multiplicity " +
                  x.str() + " below " + std::to_string(req.b[n - 1]));
          goto next_level;
        }
  next_level:;
  }
  return rep;
}

namespace {

std::vector<std::vector<Int>> mat_mul(const std::vector<std::vector<Int>>& a,
                                      const std::vector<std::vector<Int>>& b) {
  std::vector<std::vector<Int>> c(a.size(), std::vector<Int>(b[0].size(), 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k)
      if (a[i][k] != 0)
        for (size_t j = 0; j < b[k].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Int min_entry(const std::vector<std::vector<Int>>& m) {
  Int best = -1;
  for (const auto& row : m)
    for (const auto& x : row)
      if (best < 0 || x < best) best = x;
  return best;
}

std::vector<std::vector<Int>> identity_mat(size_t n) {
  std::vector<std::vector<Int>> m(n, std::vector<Int>(n, 0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

} // namespace

std::pair<Diagram, RecodingMap> ensure_capacity(const Diagram& d,
                                                const CapacityRequest& req,
                                                int step_budget, long cap) {
  if (req.a.size() != req.b.size() || req.a.empty())
    throw TransformError("capacity sequences must be nonempty and equal length");
  for (long x : req.a)
    if (x < 1) throw TransformError("capacity bounds must be >= 1");
  for (long x : req.b)
    if (x < 1) throw TransformError("capacity bounds must be >= 1");
  {
    auto sw = simplicity_window(d);
    if (!sw.ok()) {
      std::string msg = "not simple: no positivity window at level";
      for (int n : sw.failed_levels) msg += " " + std::to_string(n);
      throw TransformError(msg);
    }
  }
  if (check_capacity(d, req).ok()) return {d, RecodingMap::identity()};

  int T = static_cast<int>(req.a.size());
  Diagram cur = d;
  RecodingMap acc = RecodingMap::identity();
  int steps = 0;
  auto spend = [&](const char* what) {
    if (++steps > step_budget)
      throw TransformError(std::string("step budget exhausted while ") + what);
  };

  while (true) {
    // One greedy pass: pick cut levels left to right, microscoping a level
    // on the fly when no existing level offers enough vertices.
    std::vector<int> cuts{0};
    bool pass_ok = true;
    int c = 0;
    for (int n = 1; n <= T && pass_ok; ++n) {
      long na = req.a[n - 1], nb = req.b[n - 1];
      auto prod = identity_mat(cur.vs(c).size());
      int direct = -1;
      std::vector<std::vector<std::vector<Int>>> prefix; // product to each m
      for (int m = c + 1; m <= cur.depth(); ++m) {
        prod = mat_mul(prod, incidence_matrix(cur, m));
        prefix.push_back(prod);
        if (static_cast<long>(cur.vs(m).size()) >= na && min_entry(prod) >= nb) {
          direct = m;
          break;
        }
      }
      if (direct >= 0) {
        cuts.push_back(direct);
        c = direct;
        continue;
      }
      // Look for a level worth microscoping: enough edges to become the new
      // vertex set, with every path count from V_c to every edge source
      // already at the multiplicity bound.
      int micro = -1;
      for (int m = c + 1; m <= cur.depth(); ++m) {
        if (static_cast<long>(cur.es(m).size()) < na) continue;
        const auto& pm = m == c + 1 ? identity_mat(cur.vs(c).size())
                                    : prefix[m - c - 2];
        DiagramIndex ix(cur);
        bool good = true;
        for (size_t e = 0; e < cur.es(m).size() && good; ++e) {
          int u = ix.vsrc[m][e];
          for (size_t v = 0; v < cur.vs(c).size() && good; ++v)
            if (pm[v][u] < nb) good = false;
        }
        if (good) {
          micro = m;
          break;
        }
      }
      if (micro < 0) {
        pass_ok = false;
        break;
      }
      spend("microscoping");
      auto [md, mr] = microscope(cur, micro);
      cur = std::move(md);
      acc = RecodingMap::compose(acc, mr);
      cuts.push_back(micro); // the inserted level sits at this index
      c = micro;
    }
    if (pass_ok) {
      if (cuts.back() < cur.depth()) cuts.push_back(cur.depth());
      bool is_identity = static_cast<int>(cuts.size()) == cur.depth() + 1;
      if (!is_identity) {
        spend("telescoping");
        auto [td, tr] = telescope(cur, cuts, cap);
        cur = std::move(td);
        acc = RecodingMap::compose(acc, tr);
      }
      auto rep = check_capacity(cur, req);
      if (!rep.ok())
        throw TransformError("capacity pass left bounds unmet: " +
                             rep.joined());
      return {cur, acc};
    }
    // Coarsen: merging level pairs grows edge counts and multiplicities.
    if (cur.depth() < 2 * (T + 2))
      throw TransformError(
          "step budget exhausted: depth too shallow to realize the request");
    spend("coarsening");
    std::vector<int> every_other;
    for (int m = 0; m < cur.depth(); m += 2) every_other.push_back(m);
    every_other.push_back(cur.depth());
    auto [td, tr] = telescope(cur, every_other, cap);
    cur = std::move(td);
    acc = RecodingMap::compose(acc, tr);
  }
}

Rat thinness_bound(const Diagram& host, const Subdiagram& s, int n) {
  auto w = subdiagram_vertices(host, s);
  if (n < 0 || n > host.depth()) throw std::out_of_range("thinness level");
  auto fc = count_paths_sub(host, s, n);
  auto ec = count_paths(host, n);
  Rat best = 0;
  for (int v : w[n]) {
    if (ec.counts[v] == 0) continue;
    Rat r(fc.counts[v], ec.counts[v]);
    if (r > best) best = r;
  }
  if (n == 0 && !w[0].empty()) best = 1;
  return best;
}

} // namespace brat
