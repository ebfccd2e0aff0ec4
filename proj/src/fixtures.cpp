#include "brat/fixtures.hpp"

namespace brat::fixtures {

Diagram tree2(int depth) {
  Diagram d;
  d.verts.push_back({"v0"});
  d.edges.resize(depth);
  for (int n = 1; n <= depth; ++n) {
    std::string xn = "x" + std::to_string(n);
    std::string yn = "y" + std::to_string(n);
    d.verts.push_back({xn, yn});
    if (n == 1) {
      d.edges[0] = {{"ex1", "v0", xn}, {"ey1", "v0", yn}};
    } else {
      std::string px = "x" + std::to_string(n - 1);
      std::string py = "y" + std::to_string(n - 1);
      d.edges[n - 1] = {{"ex" + std::to_string(n), px, xn},
                        {"ey" + std::to_string(n), py, yn}};
    }
  }
  return d;
}

Diagram odo2(int depth) {
  Diagram d;
  d.verts.push_back({"v0"});
  d.edges.resize(depth);
  std::string prev = "v0";
  for (int n = 1; n <= depth; ++n) {
    std::string vn = "u" + std::to_string(n);
    d.verts.push_back({vn});
    d.edges[n - 1] = {{"a" + std::to_string(n), prev, vn},
                      {"b" + std::to_string(n), prev, vn}};
    prev = vn;
  }
  return d;
}

Diagram loop1(int depth) {
  Diagram d;
  d.verts.push_back({"v0"});
  d.edges.resize(depth);
  std::string prev = "v0";
  for (int n = 1; n <= depth; ++n) {
    std::string zn = "z" + std::to_string(n);
    d.verts.push_back({zn});
    if (n == 1)
      d.edges[0] = {{"la", "v0", zn}, {"lb", "v0", zn}};
    else
      d.edges[n - 1] = {{"lc" + std::to_string(n), prev, zn}};
    prev = zn;
  }
  return d;
}

Subdiagram odo2_half(const Diagram& host) {
  Subdiagram s;
  s.sel.resize(host.depth());
  for (int n = 1; n <= host.depth(); ++n) s.sel[n - 1] = {0};
  return s;
}

Quotient tree_to_loop(int depth) {
  Quotient q;
  q.strict = Strictness::full;
  q.vmap.resize(depth + 1);
  q.emap.resize(depth);
  q.vmap[0] = {0};
  for (int n = 1; n <= depth; ++n) {
    q.vmap[n] = {0, 0};
    if (n == 1)
      q.emap[0] = {0, 1};
    else
      q.emap[n - 1] = {0, 0};
  }
  return q;
}

} // namespace brat::fixtures
