#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "brat/fixtures.hpp"
#include "brat/gen.hpp"
#include "brat/transforms.hpp"

using namespace brat;

namespace {

std::vector<std::vector<Int>> mul(const std::vector<std::vector<Int>>& a,
                                  const std::vector<std::vector<Int>>& b) {
  std::vector<std::vector<Int>> c(a.size(),
                                  std::vector<Int>(b[0].size(), 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t k = 0; k < b.size(); ++k)
      for (size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

} // namespace

TEST_CASE("telescoping with every level is the identity") {
  auto d = fixtures::loop1(4);
  auto [t, rm] = telescope(d, {0, 1, 2, 3, 4});
  CHECK(t.verts == d.verts);
  REQUIRE(t.depth() == d.depth());
  for (int n = 1; n <= 4; ++n)
    CHECK(incidence_matrix(t, n) == incidence_matrix(d, n));
  for (const auto& p : enumerate_paths(d, 4)) CHECK(rm.forward(p) == p);
}

TEST_CASE("telescoped odometer multiplies incidence") {
  auto d = fixtures::odo2(4);
  auto [t, rm] = telescope(d, {0, 2, 4});
  REQUIRE(t.depth() == 2);
  CHECK(incidence_matrix(t, 1) == std::vector<std::vector<Int>>{{4}});
  CHECK(incidence_matrix(t, 2) == std::vector<std::vector<Int>>{{4}});
  CHECK(count_paths(t, 2).total() == count_paths(d, 4).total());
  // Recoding is a bijection respecting the path identification.
  std::set<Path> imgs;
  for (const auto& p : enumerate_paths(d, 4)) {
    auto q = rm.forward(p);
    CHECK(rm.inverse(q) == p);
    imgs.insert(q);
  }
  CHECK(imgs.size() == 16);
}

TEST_CASE("telescoped tree keeps one edge per branch") {
  auto d = fixtures::tree2(4);
  auto [t, rm] = telescope(d, {0, 2, 4});
  CHECK(t.vs(1) == std::vector<std::string>{"x2", "y2"});
  CHECK(incidence_matrix(t, 1) == std::vector<std::vector<Int>>{{1, 1}});
}

TEST_CASE("telescope incidence equals matrix products on random hosts") {
  std::mt19937 rng(7);
  for (int it = 0; it < 5; ++it) {
    auto d = gen::simple_host(rng, 6);
    std::vector<int> cuts{0, 2, 5, 6};
    auto [t, rm] = telescope(d, cuts);
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
      auto want = incidence_matrix(d, cuts[c] + 1);
      for (int n = cuts[c] + 2; n <= cuts[c + 1]; ++n)
        want = mul(want, incidence_matrix(d, n));
      CHECK(incidence_matrix(t, static_cast<int>(c) + 1) == want);
    }
  }
}

TEST_CASE("microscope inserts a copy of the edge level") {
  auto d = fixtures::odo2(3);
  auto [m, rm] = microscope(d, 1);
  REQUIRE(m.depth() == 4);
  CHECK(m.vs(1).size() == 2); // one vertex per split edge
  CHECK(incidence_matrix(m, 1) == std::vector<std::vector<Int>>{{1, 1}});
  CHECK(count_paths(m, 4).total() == count_paths(d, 3).total());
  CHECK(validate_diagram(m).ok());
  for (const auto& p : enumerate_paths(d, 3))
    CHECK(rm.inverse(rm.forward(p)) == p);
}

TEST_CASE("telescoping re-merges a microscoped level") {
  auto d = fixtures::tree2(4);
  auto [m, rm] = microscope(d, 2);
  CHECK(count_paths(m, 5).total() == count_paths(d, 4).total());
  std::vector<int> cuts{0, 1, 3, 4, 5}; // merge the split pair (levels 2,3)
  auto [back, rm2] = telescope(m, cuts);
  REQUIRE(back.depth() == d.depth());
  for (int n = 0; n <= d.depth(); ++n)
    CHECK(back.vs(n).size() == d.vs(n).size());
  for (int n = 1; n <= d.depth(); ++n)
    CHECK(incidence_matrix(back, n) == incidence_matrix(d, n));
  // Round-tripped recoding is the identity on paths.
  auto rt = RecodingMap::compose(rm, rm2);
  for (const auto& p : enumerate_paths(d, 4)) CHECK(rt.forward(p) == p);
}

TEST_CASE("simplicity windows") {
  auto sw = simplicity_window(fixtures::odo2(4));
  CHECK(sw.ok());
  for (int n = 0; n < 4; ++n) CHECK(sw.window[n] == n + 1);
  CHECK_FALSE(simplicity_window(fixtures::tree2(4)).ok());
}

TEST_CASE("capacity on an already-sufficient diagram is the identity") {
  auto d = fixtures::odo2(4);
  CapacityRequest req{{1, 1}, {1, 1}};
  auto [r, rm] = ensure_capacity(d, req);
  CHECK(r.depth() == d.depth());
  CHECK(r.verts == d.verts);
  CHECK(check_capacity(r, req).ok());
}

TEST_CASE("capacity raises the odometer to the requested bounds") {
  // Depth 10 leaves room for the splits and powers the request needs.
  auto d = fixtures::odo2(10);
  CapacityRequest req{{3, 3}, {4, 4}};
  auto [r, rm] = ensure_capacity(d, req);
  CHECK(check_capacity(r, req).ok());
  CHECK(count_paths(r, r.depth()).total() == count_paths(d, 10).total());
  for (const auto& p : enumerate_paths(d, 10))
    CHECK(rm.inverse(rm.forward(p)) == p);
}

TEST_CASE("capacity refuses a non-simple diagram") {
  CapacityRequest req{{2}, {1}};
  CHECK_THROWS_WITH_AS(ensure_capacity(fixtures::tree2(4), req),
                       doctest::Contains("not simple"), TransformError);
}

TEST_CASE("capacity on seeded simple hosts") {
  std::mt19937 rng(11);
  for (int it = 0; it < 10; ++it) {
    auto d = gen::simple_host(rng, 8);
    CapacityRequest req{{2, 2}, {2, 2}};
    auto [r, rm] = ensure_capacity(d, req);
    CHECK(check_capacity(r, req).ok());
    CHECK(validate_diagram(r).ok());
  }
}

TEST_CASE("thinness bounds") {
  auto d = fixtures::odo2(10);
  auto half = fixtures::odo2_half(d);
  CHECK(thinness_bound(d, half, 10) == Rat(1, 1024));
  CHECK(thinness_bound(d, half, 2) == Rat(1, 4));
  CHECK(thinness_bound(d, half, 0) == Rat(1));
}
