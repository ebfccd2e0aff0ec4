#include "brat/gen.hpp"

#include <algorithm>
#include <numeric>

namespace brat::gen {

namespace {

std::vector<std::string> shuffled_points(std::mt19937& rng, int n,
                                         std::vector<int>& perm) {
  perm.resize(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = "x" + std::to_string(i);
  return pts;
}

// Orbit relation of "advance one step in the chosen coordinate" on the grid,
// after relabeling by perm: grid cell (i, j) is point perm[i * cols + j].
EqRel grid_orbits(const std::vector<std::string>& pts,
                  const std::vector<int>& perm, int rows, int cols,
                  bool by_row, int stride = 1) {
  std::vector<std::vector<std::string>> classes;
  if (by_row) {
    // Points sharing a row, with the row index taken modulo stride groups.
    for (int j = 0; j < cols; ++j)
      for (int r = 0; r < stride; ++r) {
        std::vector<std::string> c;
        for (int i = r; i < rows; i += stride)
          c.push_back(pts[perm[i * cols + j]]);
        classes.push_back(std::move(c));
      }
  } else {
    for (int i = 0; i < rows; ++i) {
      std::vector<std::string> c;
      for (int j = 0; j < cols; ++j) c.push_back(pts[perm[i * cols + j]]);
      classes.push_back(std::move(c));
    }
  }
  return EqRel::from_classes(pts, classes);
}

} // namespace

GridPair grid_pair(std::mt19937& rng, int max_points) {
  std::vector<std::pair<int, int>> shapes;
  for (int a = 2; a <= max_points / 2; ++a)
    for (int b = 2; a * b <= max_points; ++b) shapes.emplace_back(a, b);
  auto [rows, cols] = shapes[rng() % shapes.size()];
  std::vector<int> perm;
  auto pts = shuffled_points(rng, rows * cols, perm);
  GridPair gp;
  gp.rows = rows;
  gp.cols = cols;
  gp.r = grid_orbits(pts, perm, rows, cols, true);
  gp.s = grid_orbits(pts, perm, rows, cols, false);
  return gp;
}

GridPair broken_pair(std::mt19937& rng, int max_points) {
  GridPair gp = grid_pair(rng, max_points);
  if (rng() % 2 == 0) {
    gp.s = gp.r; // intersection is all of R
  } else {
    // Merge two S-classes: join-class sizes stop being products.
    auto cls = gp.s.classes();
    std::vector<std::vector<std::string>> named;
    for (size_t i = 0; i + 1 < cls.size(); ++i) {
      std::vector<std::string> c;
      for (int x : cls[i]) c.push_back(gp.s.points[x]);
      if (i == 0)
        for (int x : cls.back()) c.push_back(gp.s.points[x]);
      named.push_back(std::move(c));
    }
    gp.s = EqRel::from_classes(gp.s.points, named);
  }
  return gp;
}

std::vector<EqRel> nested_chain(std::mt19937& rng, int max_points,
                                int max_len) {
  int n = 2 + static_cast<int>(rng() % (max_points - 1));
  int len = 1 + static_cast<int>(rng() % max_len);
  std::vector<std::string> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = "p" + std::to_string(i);
  std::vector<EqRel> chain{EqRel::discrete(pts)};
  for (int l = 0; l < len; ++l) {
    EqRel prev = chain.back();
    auto cls = prev.classes();
    // Merge a random number of class pairs.
    int merges = static_cast<int>(rng() % (cls.size() + 1) / 2);
    std::vector<int> owner(cls.size());
    std::iota(owner.begin(), owner.end(), 0);
    for (int m = 0; m < merges; ++m) {
      int a = static_cast<int>(rng() % cls.size());
      int b = static_cast<int>(rng() % cls.size());
      int ra = owner[a], rb = owner[b];
      for (auto& o : owner)
        if (o == ra) o = rb;
    }
    std::vector<std::vector<std::string>> named(cls.size());
    for (size_t i = 0; i < cls.size(); ++i)
      for (int x : cls[i]) named[owner[i]].push_back(pts[x]);
    named.erase(std::remove_if(named.begin(), named.end(),
                               [](const auto& c) { return c.empty(); }),
                named.end());
    chain.push_back(EqRel::from_classes(pts, named));
  }
  return chain;
}

TransverseInstance transverse_instance(std::mt19937& rng, int max_points,
                                       int max_chain) {
  std::vector<std::pair<int, int>> shapes;
  for (int a = 2; a <= max_points / 2; ++a)
    for (int b = 2; a * b <= max_points; ++b) shapes.emplace_back(a, b);
  auto [rows, cols] = shapes[rng() % shapes.size()];
  std::vector<int> perm;
  auto pts = shuffled_points(rng, rows * cols, perm);
  TransverseInstance ti;
  ti.s = grid_orbits(pts, perm, rows, cols, false);
  // Divisor ladder of strides: rows = s_0 > s_1 > ... > 1, each level the
  // orbit relation of stride s_k row steps (stride rows = diagonal).
  std::vector<int> strides{rows};
  while (static_cast<int>(strides.size()) < max_chain && strides.back() > 1) {
    int cur = strides.back();
    std::vector<int> divs;
    for (int d = 1; d < cur; ++d)
      if (cur % d == 0) divs.push_back(d);
    strides.push_back(divs[rng() % divs.size()]);
  }
  if (strides.back() != 1) strides.push_back(1);
  for (int st : strides)
    ti.chain.push_back(grid_orbits(pts, perm, rows, cols, true, st));
  return ti;
}

Diagram simple_host(std::mt19937& rng, int depth) {
  Diagram d;
  d.verts.resize(depth + 1);
  d.edges.resize(depth);
  d.verts[0] = {"v0"};
  for (int n = 1; n <= depth; ++n) {
    int width = 2 + static_cast<int>(rng() % 2);
    for (int i = 0; i < width; ++i)
      d.verts[n].push_back("r" + std::to_string(n) + "_" + std::to_string(i));
    int e = 0;
    for (const auto& u : d.verts[n - 1])
      for (const auto& v : d.verts[n]) {
        int mult = 1 + static_cast<int>(rng() % 3);
        for (int j = 0; j < mult; ++j)
          d.edges[n - 1].push_back(
              {"e" + std::to_string(n) + "_" + std::to_string(e++), u, v});
      }
  }
  return d;
}

} // namespace brat::gen
