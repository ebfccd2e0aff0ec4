#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "brat/diagram.hpp"
#include "brat/fixtures.hpp"

using namespace brat;

TEST_CASE("fixtures validate") {
  CHECK(validate_diagram(fixtures::tree2(4)).ok());
  CHECK(validate_diagram(fixtures::odo2(4)).ok());
  CHECK(validate_diagram(fixtures::loop1(4)).ok());
}

TEST_CASE("isolated vertex is reported at its level") {
  Diagram d = fixtures::odo2(3);
  d.verts[2].push_back("stray");
  auto rep = validate_diagram(d);
  CHECK_FALSE(rep.ok());
  bool mentions_level2 = false;
  for (const auto& s : rep.issues)
    if (s.find("level 2") != std::string::npos) mentions_level2 = true;
  CHECK(mentions_level2);
}

TEST_CASE("incidence matrices") {
  auto odo = fixtures::odo2(3);
  CHECK(incidence_matrix(odo, 1) == std::vector<std::vector<Int>>{{2}});
  auto tree = fixtures::tree2(3);
  CHECK(incidence_matrix(tree, 1) == std::vector<std::vector<Int>>{{1, 1}});
  CHECK(incidence_matrix(tree, 2) ==
        std::vector<std::vector<Int>>{{1, 0}, {0, 1}});
  CHECK_THROWS(incidence_matrix(odo, 4));
}

TEST_CASE("path counts") {
  auto odo = fixtures::odo2(3);
  CHECK(count_paths(odo, 3).counts == std::vector<Int>{8});
  auto tree = fixtures::tree2(3);
  CHECK(count_paths(tree, 3).counts == std::vector<Int>{1, 1});
  auto loop = fixtures::loop1(3);
  CHECK(count_paths(loop, 3).counts == std::vector<Int>{2});
  CHECK(count_paths(odo, 0).counts == std::vector<Int>{1});
}

TEST_CASE("enumeration agrees with counting and is lexicographic") {
  auto odo = fixtures::odo2(2);
  auto ps = enumerate_paths(odo, 2);
  REQUIRE(ps.size() == 4);
  // Edge ids a_n < b_n, so the order is aa, ab, ba, bb.
  CHECK(ps[0] == Path{0, 0});
  CHECK(ps[1] == Path{0, 1});
  CHECK(ps[2] == Path{1, 0});
  CHECK(ps[3] == Path{1, 1});
  CHECK(enumerate_paths(odo, 0) == std::vector<Path>{{}});
  CHECK_THROWS_AS(enumerate_paths(fixtures::odo2(8), 8, 100),
                  EnumerationCapExceeded);
}

TEST_CASE("count equals enumeration grouped by terminal") {
  auto d = fixtures::loop1(4);
  auto pc = count_paths(d, 4);
  std::vector<Int> got(d.vs(4).size(), 0);
  for (const auto& p : enumerate_paths(d, 4)) got[path_terminal(d, p)] += 1;
  CHECK(got == pc.counts);
}

TEST_CASE("subdiagram validation") {
  auto odo = fixtures::odo2(4);
  auto half = fixtures::odo2_half(odo);
  CHECK(validate_subdiagram(odo, half).ok());
  CHECK(count_paths_sub(odo, half, 4).counts == std::vector<Int>{1});

  // Dropping one intermediate level breaks i(F) = {v_0} u t(F).
  Subdiagram broken = half;
  broken.sel[1].clear();
  CHECK_FALSE(validate_subdiagram(odo, broken).ok());

  Subdiagram empty;
  empty.sel.resize(4);
  CHECK_FALSE(validate_subdiagram(odo, empty).ok());
}

TEST_CASE("branch tree inside itself is a valid subdiagram") {
  auto tree = fixtures::tree2(4);
  Subdiagram all;
  all.sel.resize(4);
  for (int n = 1; n <= 4; ++n)
    for (size_t e = 0; e < tree.es(n).size(); ++e)
      all.sel[n - 1].push_back(static_cast<int>(e));
  CHECK(validate_subdiagram(tree, all).ok());

  Subdiagram onebranch = all;
  onebranch.sel[1] = {0}; // level-2 edge of one branch only
  CHECK_FALSE(validate_subdiagram(tree, onebranch).ok());
}

TEST_CASE("tree-to-loop quotient") {
  int N = 4;
  auto tree = fixtures::tree2(N);
  auto loop = fixtures::loop1(N);
  auto q = fixtures::tree_to_loop(N);
  CHECK(validate_quotient(tree, loop, q).ok());
  CHECK(check_lift_bijection(tree, loop, q, N).ok());

  auto p = enumerate_paths(tree, N)[0];
  auto img = map_path(tree, loop, q, p);
  auto back = lift_path(tree, loop, q, img);
  REQUIRE(back.has_value());
  CHECK(*back == p);
}

TEST_CASE("identity quotient validates") {
  // Full strictness demands an injective range map on level 1, which tree2
  // has; loop1's parallel start would need source-fiber strictness instead.
  auto d = fixtures::tree2(3);
  Quotient q;
  q.strict = Strictness::full;
  q.vmap.resize(4);
  q.emap.resize(3);
  for (int n = 0; n <= 3; ++n)
    for (size_t i = 0; i < d.vs(n).size(); ++i)
      q.vmap[n].push_back(static_cast<int>(i));
  for (int n = 1; n <= 3; ++n)
    for (size_t i = 0; i < d.es(n).size(); ++i)
      q.emap[n - 1].push_back(static_cast<int>(i));
  CHECK(validate_quotient(d, d, q).ok());
}

TEST_CASE("collapsing both level-1 edges breaks the source fiber bijection") {
  int N = 3;
  auto tree = fixtures::tree2(N);
  auto loop = fixtures::loop1(N);
  auto q = fixtures::tree_to_loop(N);
  q.emap[0][1] = q.emap[0][0];
  CHECK_FALSE(validate_quotient(tree, loop, q).ok());
}
