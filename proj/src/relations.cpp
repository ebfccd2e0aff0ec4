#include "brat/relations.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace brat {

EqRel EqRel::discrete(std::vector<std::string> pts) {
  EqRel r;
  r.points = std::move(pts);
  r.cls.resize(r.points.size());
  std::iota(r.cls.begin(), r.cls.end(), 0);
  return r;
}

EqRel EqRel::from_classes(std::vector<std::string> pts,
                          const std::vector<std::vector<std::string>>& cs) {
  EqRel r = discrete(std::move(pts));
  std::map<std::string, int> ix;
  for (int i = 0; i < r.size(); ++i) ix[r.points[i]] = i;
  std::vector<int> parent(r.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& c : cs)
    for (size_t i = 1; i < c.size(); ++i)
      parent[find(ix.at(c[i]))] = find(ix.at(c[0]));
  for (int i = 0; i < r.size(); ++i) r.cls[i] = find(i);
  r.canonicalize();
  return r;
}

int EqRel::class_count() const {
  std::set<int> s(cls.begin(), cls.end());
  return static_cast<int>(s.size());
}

std::vector<std::vector<int>> EqRel::classes() const {
  std::map<int, std::vector<int>> by;
  for (int i = 0; i < size(); ++i) by[cls[i]].push_back(i);
  std::vector<std::vector<int>> out;
  std::vector<std::pair<int, int>> order; // (least member, class id)
  for (auto& [id, mem] : by) order.push_back({mem[0], id});
  std::sort(order.begin(), order.end());
  for (auto& [least, id] : order) out.push_back(by[id]);
  return out;
}

std::vector<int> EqRel::class_of(int x) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (cls[i] == cls[x]) out.push_back(i);
  return out;
}

bool EqRel::is_discrete() const {
  std::set<int> s(cls.begin(), cls.end());
  return static_cast<int>(s.size()) == size();
}

bool EqRel::subset_of(const EqRel& other) const {
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (related(i, j) && !other.related(i, j)) return false;
  return true;
}

bool EqRel::same_points(const EqRel& other) const {
  return points == other.points;
}

void EqRel::canonicalize() {
  std::map<int, int> remap;
  int next = 0;
  for (int i = 0; i < size(); ++i)
    if (!remap.count(cls[i])) remap[cls[i]] = next++;
  for (auto& c : cls) c = remap[c];
}

std::vector<std::pair<int, int>> EqRel::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (related(i, j)) out.push_back({i, j});
  return out;
}

EqRel join(const EqRel& r, const EqRel& s) {
  if (!r.same_points(s)) throw std::invalid_argument("point sets differ");
  std::vector<int> parent(r.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (int i = 0; i < r.size(); ++i)
    for (int j = i + 1; j < r.size(); ++j) {
      if (r.related(i, j)) unite(i, j);
      if (s.related(i, j)) unite(i, j);
    }
  EqRel out;
  out.points = r.points;
  out.cls.resize(r.size());
  for (int i = 0; i < r.size(); ++i) out.cls[i] = find(i);
  out.canonicalize();
  return out;
}

TransversalResult find_transversal(const EqRel& r, const EqRel& s) {
  TransversalResult res;
  if (!r.same_points(s)) {
    res.reason = "point sets differ";
    return res;
  }
  int n = r.size();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (r.related(x, y) && s.related(x, y)) {
        res.reason = "R and S intersect off the diagonal at (" + r.points[x] +
                     "," + r.points[y] + ")";
        res.bad = {x, y};
        return res;
      }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!r.related(x, y)) continue;
      for (int z = 0; z < n; ++z) {
        if (!s.related(y, z)) continue;
        int found = -1, count = 0;
        for (int yp = 0; yp < n; ++yp)
          if (s.related(x, yp) && r.related(yp, z)) {
            found = yp;
            ++count;
          }
        if (count != 1) {
          res.reason = "composable pair ((" + r.points[x] + "," + r.points[y] +
                       "),(" + r.points[y] + "," + r.points[z] + ")) has " +
                       std::to_string(count) + " rewrites, needs exactly 1";
          res.bad = {x, z};
          return res;
        }
        res.witness.h[{x, y, z}] = found;
      }
    }
  // h must be a bijection from R x_X S onto S x_X R.
  std::set<std::array<int, 3>> image, sxr;
  for (int x = 0; x < n; ++x)
    for (int yp = 0; yp < n; ++yp)
      for (int z = 0; z < n; ++z)
        if (s.related(x, yp) && r.related(yp, z)) sxr.insert({x, yp, z});
  for (const auto& [key, yp] : res.witness.h)
    if (!image.insert({key[0], yp, key[2]}).second) {
      res.reason = "rewriting map is not injective";
      return res;
    }
  if (image != sxr) {
    res.reason = "rewriting map is not onto S x_X R";
    return res;
  }
  // Lemma 3.2 shape: (r, s) endpoints biject composable pairs onto the join.
  EqRel j = join(r, s);
  std::set<std::pair<int, int>> ends;
  for (const auto& [key, yp] : res.witness.h) {
    (void)yp;
    if (!ends.insert({key[0], key[2]}).second) {
      res.reason = "endpoint map is not injective on R x_X S";
      return res;
    }
  }
  size_t join_pairs = j.pairs().size();
  if (ends.size() != join_pairs || sxr.size() != join_pairs) {
    res.reason = "endpoint map is not onto the join relation";
    return res;
  }
  for (const auto& [x, z] : ends)
    if (!j.related(x, z)) {
      res.reason = "endpoint map leaves the join relation";
      return res;
    }
  res.ok = true;
  return res;
}

ValidationReport class_size_check(const EqRel& r, const EqRel& s) {
  ValidationReport rep;
  int n = r.size();
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (r.related(x, y) &&
          s.class_of(x).size() != s.class_of(y).size())
        rep.add("R-related points " + r.points[x] + ", " + r.points[y] +
                " have S-class sizes " + std::to_string(s.class_of(x).size()) +
                " and " + std::to_string(s.class_of(y).size()));
  EqRel j = join(r, s);
  for (const auto& c : j.classes()) {
    std::set<int> rsub, ssub;
    for (int x : c) {
      rsub.insert(r.cls[x]);
      ssub.insert(s.cls[x]);
    }
    if (c.size() != rsub.size() * ssub.size())
      rep.add("join class of " + r.points[c[0]] + " has size " +
              std::to_string(c.size()) + ", expected " +
              std::to_string(rsub.size()) + "*" + std::to_string(ssub.size()));
  }
  return rep;
}

std::vector<int> GroupoidPartition::floor(int t, int l) const {
  std::vector<int> out;
  for (const auto& c : towers[t]) out.push_back(c[l]);
  std::sort(out.begin(), out.end());
  return out;
}

GroupoidPartition groupoid_refine(
    const EqRel& r, const std::function<int(int, int)>& pair_label,
    const std::vector<int>& point_label) {
  GroupoidPartition gp;
  gp.host = r;
  // Decorated type of a class: point labels in canonical (ascending) order
  // plus the full matrix of pair labels.
  using Type = std::pair<std::vector<int>, std::vector<int>>;
  std::map<Type, int> tower_of;
  for (const auto& c : r.classes()) {
    Type ty;
    for (int x : c)
      ty.first.push_back(point_label.empty() ? 0 : point_label[x]);
    for (int x : c)
      for (int y : c) ty.second.push_back(pair_label ? pair_label(x, y) : 0);
    auto it = tower_of.find(ty);
    if (it == tower_of.end()) {
      tower_of[ty] = static_cast<int>(gp.towers.size());
      gp.towers.push_back({c});
    } else {
      gp.towers[it->second].push_back(c);
    }
  }
  return gp;
}

ValidationReport validate_groupoid_partition(
    const GroupoidPartition& gp, const std::function<int(int, int)>& pair_label,
    const std::vector<int>& point_label) {
  ValidationReport rep;
  const EqRel& r = gp.host;
  std::vector<int> seen(r.size(), 0);
  for (const auto& tw : gp.towers) {
    if (tw.empty()) {
      rep.add("empty tower");
      continue;
    }
    size_t h = tw[0].size();
    for (const auto& c : tw) {
      if (c.size() != h) rep.add("unequal class sizes within a tower");
      for (size_t i = 0; i < c.size(); ++i) {
        seen[c[i]] += 1;
        if (i && c[i] <= c[i - 1]) rep.add("class not in canonical order");
        for (size_t j = 0; j < c.size(); ++j)
          if (!r.related(c[i], c[j]))
            rep.add("tower class contains unrelated points");
      }
    }
  }
  for (int x = 0; x < r.size(); ++x)
    if (seen[x] != 1)
      rep.add("point " + r.points[x] + " covered " + std::to_string(seen[x]) +
              " times by tower classes");
  // Graph pairs partition the relation: every related pair (x,y) occurs in
  // exactly one graph (t,l,l'), which is automatic once classes partition X,
  // so it remains to check label refinement.
  if (pair_label)
    for (size_t t = 0; t < gp.towers.size(); ++t) {
      const auto& tw = gp.towers[t];
      size_t h = tw[0].size();
      for (size_t l = 0; l < h; ++l)
        for (size_t lp = 0; lp < h; ++lp) {
          int lab = pair_label(tw[0][l], tw[0][lp]);
          for (const auto& c : tw)
            if (pair_label(c[l], c[lp]) != lab)
              rep.add("graph pairs carry different pair labels in tower " +
                      std::to_string(t));
        }
    }
  if (!point_label.empty())
    for (const auto& tw : gp.towers)
      for (size_t l = 0; l < tw[0].size(); ++l)
        for (const auto& c : tw)
          if (point_label[c[l]] != point_label[tw[0][l]])
            rep.add("floor mixes point labels");
  return rep;
}

std::vector<EqRel> transverse_filtration(const std::vector<EqRel>& chain,
                                         const EqRel& s,
                                         const TransversalWitness& w) {
  if (chain.empty()) throw FiltrationError("empty chain");
  if (!chain[0].is_discrete())
    throw FiltrationError("chain must start at the diagonal");
  for (size_t n = 1; n < chain.size(); ++n) {
    if (!chain[n].same_points(chain[0]))
      throw FiltrationError("chain point sets differ");
    if (!chain[n - 1].subset_of(chain[n]))
      throw FiltrationError("chain is not nested at step " + std::to_string(n));
  }
  int npts = chain[0].size();
  std::vector<EqRel> out;
  for (size_t n = 0; n < chain.size(); ++n) {
    const EqRel& rn = chain[n];
    // Keep (x,y) only when every rewrite of an S-step after it stays in R_n.
    std::vector<std::vector<char>> keep(npts, std::vector<char>(npts, 0));
    for (int x = 0; x < npts; ++x)
      for (int y = 0; y < npts; ++y) {
        if (!rn.related(x, y)) continue;
        bool good = true;
        for (int z = 0; z < npts && good; ++z) {
          if (!s.related(y, z)) continue;
          auto it = w.h.find({x, y, z});
          if (it == w.h.end())
            throw FiltrationError("witness does not cover the chain top");
          if (!rn.related(it->second, z)) good = false;
        }
        if (good) keep[x][y] = 1;
      }
    for (int x = 0; x < npts; ++x) {
      if (!keep[x][x])
        throw FiltrationError("transverse core lost reflexivity");
      for (int y = 0; y < npts; ++y) {
        if (keep[x][y] != keep[y][x])
          throw FiltrationError("transverse core lost symmetry");
        for (int z = 0; z < npts; ++z)
          if (keep[x][y] && keep[y][z] && !keep[x][z])
            throw FiltrationError("transverse core lost transitivity");
      }
    }
    EqRel rp;
    rp.points = rn.points;
    rp.cls.resize(npts);
    std::vector<int> parent(npts);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int x = 0; x < npts; ++x)
      for (int y = 0; y < npts; ++y)
        if (keep[x][y]) parent[find(x)] = find(y);
    for (int x = 0; x < npts; ++x) rp.cls[x] = find(x);
    rp.canonicalize();
    auto tr = find_transversal(rp, s);
    if (!tr.ok)
      throw FiltrationError("transverse core at step " + std::to_string(n) +
                            " is not transverse to S: " + tr.reason);
    out.push_back(std::move(rp));
  }
  for (int x = 0; x < npts; ++x)
    for (int y = 0; y < npts; ++y)
      if (chain.back().related(x, y) != out.back().related(x, y))
        throw FiltrationError("transverse cores do not exhaust the chain top");
  for (size_t n = 1; n < out.size(); ++n)
    if (!out[n - 1].subset_of(out[n]))
      throw FiltrationError("transverse cores are not nested");
  return out;
}

std::string cycle_notation(const std::vector<int>& perm,
                           const std::vector<std::string>& points) {
  std::string out;
  std::vector<char> done(perm.size(), 0);
  for (size_t i = 0; i < perm.size(); ++i) {
    if (done[i] || perm[i] == static_cast<int>(i)) continue;
    out += "(";
    int j = static_cast<int>(i);
    bool first = true;
    while (!done[j]) {
      done[j] = 1;
      if (!first) out += " ";
      out += points[j];
      first = false;
      j = perm[j];
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

GroupActionResult relation_from_group_action(
    std::vector<std::string> points,
    const std::vector<std::vector<int>>& generators, long cap) {
  GroupActionResult res;
  int n = static_cast<int>(points.size());
  for (const auto& g : generators) {
    if (static_cast<int>(g.size()) != n) {
      res.reason = "generator has wrong length";
      return res;
    }
    std::vector<char> hit(n, 0);
    for (int x : g) {
      if (x < 0 || x >= n || hit[x]) {
        res.reason = "generator is not a permutation";
        return res;
      }
      hit[x] = 1;
    }
  }
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> group{id};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& g : frontier)
      for (const auto& gen : generators) {
        std::vector<int> prod(n);
        for (int i = 0; i < n; ++i) prod[i] = gen[g[i]];
        if (group.insert(prod).second) {
          if (static_cast<long>(group.size()) > cap) {
            res.reason = "group enumeration cap exceeded";
            return res;
          }
          next.push_back(std::move(prod));
        }
      }
    frontier = std::move(next);
  }
  for (const auto& g : group) {
    if (g == id) continue;
    for (int x = 0; x < n; ++x)
      if (g[x] == x) {
        res.reason = "action is not free";
        res.fixed_point = x;
        res.fixing_element = cycle_notation(g, points);
        return res;
      }
  }
  EqRel orb = EqRel::discrete(points);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& gen : generators)
    for (int x = 0; x < n; ++x) parent[find(x)] = find(gen[x]);
  for (int x = 0; x < n; ++x) orb.cls[x] = find(x);
  orb.canonicalize();
  res.ok = true;
  res.orbits = std::move(orb);
  return res;
}

} // namespace brat
