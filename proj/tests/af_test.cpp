#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "brat/af.hpp"
#include "brat/fixtures.hpp"
#include "brat/gen.hpp"

using namespace brat;

namespace {

// Partition of the point set induced by mapping each point's coded path into
// its cofinality class.
std::vector<int> chain_via_af(const FiltrationDiagram& fd, int n) {
  int M = fd.d.depth();
  auto af = af_classes_at(fd.d, n, M);
  std::map<Path, int> by_path;
  for (size_t i = 0; i < af.paths.size(); ++i) by_path[af.paths[i]] = af.cls[i];
  std::vector<int> cls;
  for (const auto& p : fd.coding.F) cls.push_back(by_path.at(p));
  return cls;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<int, int> fwd, bwd;
  for (size_t i = 0; i < a.size(); ++i) {
    auto [f, fn] = fwd.emplace(a[i], b[i]);
    auto [g, gn] = bwd.emplace(b[i], a[i]);
    if (f->second != b[i] || g->second != a[i]) return false;
  }
  return true;
}

} // namespace

TEST_CASE("cofinality classes on the odometer") {
  auto d = fixtures::odo2(3);
  CHECK(af_classes_at(d, 0, 3).classes.size() == 8);
  auto af1 = af_classes_at(d, 1, 3);
  CHECK(af1.classes.size() == 4);
  for (const auto& c : af1.classes) CHECK(c.size() == 2);
  auto af3 = af_classes_at(d, 3, 3);
  REQUIRE(af3.classes.size() == 1);
  CHECK(af3.classes[0].size() == 8);
}

TEST_CASE("chain diagram for the four point ladder") {
  std::vector<std::string> pts{"1", "2", "3", "4"};
  std::vector<EqRel> chain{
      EqRel::discrete(pts),
      EqRel::from_classes(pts, {{"1", "2"}, {"3", "4"}}),
      EqRel::from_classes(pts, {{"1", "2", "3", "4"}})};
  auto fd = diagram_from_filtration(chain);
  REQUIRE(fd.d.depth() == 2);
  CHECK(fd.d.vs(1).size() == 2);
  CHECK(fd.d.vs(2).size() == 1);
  CHECK(incidence_matrix(fd.d, 1) == std::vector<std::vector<Int>>{{2, 2}});
  CHECK(incidence_matrix(fd.d, 2) == std::vector<std::vector<Int>>{{1}, {1}});
  // Height recursion: 1*2 + 1*2 = 4 paths into the top class.
  CHECK(count_paths(fd.d, 2).counts == std::vector<Int>{4});
}

TEST_CASE("all-diagonal chain gives singleton towers") {
  std::vector<std::string> pts{"a", "b", "c"};
  std::vector<EqRel> chain(3, EqRel::discrete(pts));
  auto fd = diagram_from_filtration(chain);
  for (int n = 1; n <= 2; ++n) CHECK(fd.d.vs(n).size() == 3);
  std::set<Path> coded(fd.coding.F.begin(), fd.coding.F.end());
  CHECK(coded.size() == 3);
}

TEST_CASE("chain must be nested and start at the diagonal") {
  std::vector<std::string> pts{"1", "2"};
  std::vector<EqRel> bad{EqRel::from_classes(pts, {{"1", "2"}})};
  CHECK_THROWS_AS(diagram_from_filtration(bad), FiltrationError);
  std::vector<EqRel> unnested{
      EqRel::discrete(pts), EqRel::from_classes(pts, {{"1", "2"}}),
      EqRel::discrete(pts)};
  CHECK_THROWS_AS(diagram_from_filtration(unnested), FiltrationError);
}

TEST_CASE("chain round trip through cofinality classes") {
  std::mt19937 rng(17);
  for (int it = 0; it < 20; ++it) {
    auto chain = gen::nested_chain(rng, 12, 4);
    auto fd = diagram_from_filtration(chain);
    for (size_t n = 0; n < chain.size(); ++n)
      CHECK(same_partition(chain[n].cls,
                           chain_via_af(fd, static_cast<int>(n))));
  }
}

TEST_CASE("two-point transverse build is the tree over the loop") {
  std::vector<std::string> pts{"y1", "y2"};
  auto k = EqRel::from_classes(pts, {{"y1", "y2"}});
  std::vector<EqRel> chain(5, EqRel::discrete(pts));
  auto td = transverse_diagrams(chain, k);
  CHECK(td.report.ok());
  int M = td.d.d.depth();
  auto tree = fixtures::tree2(M);
  auto loop = fixtures::loop1(M);
  for (int n = 1; n <= M; ++n) {
    CHECK(incidence_matrix(td.d.d, n) == incidence_matrix(tree, n));
    CHECK(incidence_matrix(td.dprime.d, n) == incidence_matrix(loop, n));
  }
  CHECK(validate_quotient(td.d.d, td.dprime.d, td.q).ok());
  // Shape of the canonical quotient: both branches collapse onto the chain.
  auto q2 = fixtures::tree_to_loop(M);
  CHECK(td.q.vmap == q2.vmap);
  CHECK(td.q.emap == q2.emap);
}

TEST_CASE("diagonal S duplicates the diagram with the identity quotient") {
  std::vector<std::string> pts{"a", "b", "c"};
  std::vector<EqRel> chain{EqRel::discrete(pts), EqRel::discrete(pts),
                           EqRel::from_classes(pts, {{"a", "b"}})};
  auto td = transverse_diagrams(chain, EqRel::discrete(pts));
  CHECK(td.report.ok());
  CHECK(td.d.d.verts == td.dprime.d.verts);
  for (int n = 1; n <= td.d.d.depth(); ++n)
    CHECK(incidence_matrix(td.d.d, n) == incidence_matrix(td.dprime.d, n));
  for (size_t n = 0; n < td.q.vmap.size(); ++n)
    for (size_t i = 0; i < td.q.vmap[n].size(); ++i)
      CHECK(td.q.vmap[n][i] == static_cast<int>(i));
}

TEST_CASE("non-discrete user chains are shifted") {
  std::vector<std::string> pts{"1", "2", "3", "4"};
  auto s = EqRel::from_classes(pts, {{"1", "3"}, {"2", "4"}});
  std::vector<EqRel> chain{
      EqRel::discrete(pts),
      EqRel::from_classes(pts, {{"1", "2"}, {"3", "4"}})};
  auto td = transverse_diagrams(chain, s);
  CHECK(td.shifted);
  CHECK(td.report.ok());
  CHECK(td.chain[1].is_discrete());
}

TEST_CASE("eight point shift instance") {
  std::vector<std::string> pts{"1", "2", "3", "4", "5", "6", "7", "8"};
  auto s = EqRel::from_classes(
      pts, {{"1", "5"}, {"2", "6"}, {"3", "7"}, {"4", "8"}});
  std::vector<EqRel> chain{
      EqRel::discrete(pts),
      EqRel::from_classes(pts, {{"1", "2"}, {"3", "4"}, {"5", "6"},
                                {"7", "8"}}),
      EqRel::from_classes(pts, {{"1", "2", "3", "4"}, {"5", "6", "7", "8"}})};
  auto td = transverse_diagrams(chain, s);
  CHECK(td.report.ok());
  CHECK(validate_quotient(td.d.d, td.dprime.d, td.q).ok());
}

TEST_CASE("seeded grid chains build validating quotients") {
  std::mt19937 rng(23);
  for (int it = 0; it < 20; ++it) {
    auto ti = gen::transverse_instance(rng);
    auto td = transverse_diagrams(ti.chain, ti.s);
    CHECK(td.report.ok());
  }
}
