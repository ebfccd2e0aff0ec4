#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "brat/gen.hpp"
#include "brat/relations.hpp"

using namespace brat;

namespace {

std::vector<std::string> pts4{"1", "2", "3", "4"};

long pair_count(const EqRel& r) {
  long n = 0;
  for (const auto& c : r.classes()) n += static_cast<long>(c.size() * c.size());
  return n;
}

// Independent transitive-closure oracle over the union of the pair sets.
EqRel join_oracle(const EqRel& r, const EqRel& s) {
  int n = r.size();
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : r.pairs()) adj[a].push_back(b);
  for (auto [a, b] : s.pairs()) adj[a].push_back(b);
  std::vector<int> cls(n, -1);
  int next = 0;
  for (int start = 0; start < n; ++start) {
    if (cls[start] >= 0) continue;
    std::vector<int> q{start};
    cls[start] = next;
    while (!q.empty()) {
      int x = q.back();
      q.pop_back();
      for (int y : adj[x])
        if (cls[y] < 0) {
          cls[y] = next;
          q.push_back(y);
        }
    }
    ++next;
  }
  EqRel out;
  out.points = r.points;
  out.cls = cls;
  out.canonicalize();
  return out;
}

} // namespace

TEST_CASE("relation basics") {
  auto r = EqRel::from_classes(pts4, {{"1", "2"}, {"3", "4"}});
  CHECK(r.class_count() == 2);
  CHECK(r.related(0, 1));
  CHECK_FALSE(r.related(1, 2));
  CHECK(r.class_of(3) == std::vector<int>{2, 3});
  CHECK(EqRel::discrete(pts4).is_discrete());
  CHECK(EqRel::discrete(pts4).subset_of(r));
  CHECK_FALSE(r.subset_of(EqRel::discrete(pts4)));
}

TEST_CASE("join") {
  auto r = EqRel::from_classes(pts4, {{"1", "2"}, {"3", "4"}});
  auto s = EqRel::from_classes(pts4, {{"1", "3"}, {"2", "4"}});
  CHECK(join(r, s).class_count() == 1);
  auto d = EqRel::discrete(pts4);
  CHECK(join(r, d).cls == r.cls);
}

TEST_CASE("join equals the closure oracle on random pairs") {
  std::mt19937 rng(3);
  auto random_rel = [&](const std::vector<std::string>& pts) {
    EqRel e = EqRel::discrete(pts);
    int merges = static_cast<int>(rng() % pts.size());
    for (int m = 0; m < merges; ++m) {
      int a = static_cast<int>(rng() % pts.size());
      int b = static_cast<int>(rng() % pts.size());
      int ca = e.cls[a];
      for (auto& c : e.cls)
        if (c == ca) c = e.cls[b];
    }
    e.canonicalize();
    return e;
  };
  for (int it = 0; it < 20; ++it) {
    auto chain = gen::nested_chain(rng, 12, 2);
    auto a = chain.back();
    auto b = random_rel(a.points);
    auto j = join(a, b);
    auto o = join_oracle(a, b);
    CHECK(j.cls == o.cls);
  }
}

TEST_CASE("transversal witness on the product pair") {
  auto r = EqRel::from_classes(pts4, {{"1", "2"}, {"3", "4"}});
  auto s = EqRel::from_classes(pts4, {{"1", "3"}, {"2", "4"}});
  auto tr = find_transversal(r, s);
  REQUIRE(tr.ok);
  CHECK(tr.witness.h.size() == 16);
  CHECK(pair_count(join(r, s)) == 16);
  CHECK(class_size_check(r, s).ok());
}

TEST_CASE("diagonal R is transverse to anything") {
  auto s = EqRel::from_classes(pts4, {{"1", "3"}, {"2", "4"}});
  auto tr = find_transversal(EqRel::discrete(pts4), s);
  REQUIRE(tr.ok);
  for (const auto& [key, yp] : tr.witness.h) CHECK(yp == key[2]);
}

TEST_CASE("lopsided pair fails with a witness") {
  auto r = EqRel::from_classes(pts4, {{"1", "2"}, {"3", "4"}});
  auto s = EqRel::from_classes(pts4, {{"1", "3"}});
  auto tr = find_transversal(r, s);
  CHECK_FALSE(tr.ok);
  CHECK(tr.bad.has_value());
}

TEST_CASE("overlapping pair fails on the intersection") {
  auto r = EqRel::from_classes(pts4, {{"1", "2"}, {"3", "4"}});
  auto tr = find_transversal(r, r);
  CHECK_FALSE(tr.ok);
  REQUIRE(tr.bad.has_value());
  CHECK(r.related(tr.bad->first, tr.bad->second));
}

TEST_CASE("class sizes for the trivial pair") {
  auto d = EqRel::discrete(pts4);
  CHECK(class_size_check(d, d).ok());
}

TEST_CASE("groupoid partitions") {
  auto pair_trivial = [](int, int) { return 0; };
  SUBCASE("diagonal") {
    auto gp = groupoid_refine(EqRel::discrete(pts4), pair_trivial, {});
    CHECK(validate_groupoid_partition(gp).ok());
    CHECK(gp.towers.size() == 1);
    CHECK(gp.height(0) == 1);
  }
  SUBCASE("two classes of two") {
    auto r = EqRel::from_classes(pts4, {{"1", "2"}, {"3", "4"}});
    auto gp = groupoid_refine(r, pair_trivial, {});
    CHECK(validate_groupoid_partition(gp).ok());
    CHECK(gp.towers.size() == 1);
    CHECK(gp.towers[0].size() == 2);
    CHECK(gp.height(0) == 2);
  }
  SUBCASE("point labels split towers") {
    auto r = EqRel::from_classes(pts4, {{"1", "2"}, {"3", "4"}});
    std::vector<int> labels{0, 0, 0, 1};
    auto gp = groupoid_refine(r, pair_trivial, labels);
    CHECK(validate_groupoid_partition(gp, pair_trivial, labels).ok());
    CHECK(gp.towers.size() == 2);
  }
  SUBCASE("full relation is one tall tower") {
    auto r = EqRel::from_classes(pts4, {{"1", "2", "3", "4"}});
    auto gp = groupoid_refine(r, pair_trivial, {});
    CHECK(gp.towers.size() == 1);
    CHECK(gp.height(0) == 4);
  }
}

TEST_CASE("transverse filtration") {
  std::vector<std::string> pts8{"1", "2", "3", "4", "5", "6", "7", "8"};
  auto s = EqRel::from_classes(
      pts8, {{"1", "5"}, {"2", "6"}, {"3", "7"}, {"4", "8"}});
  SUBCASE("diagonal S keeps the chain") {
    std::vector<EqRel> chain{
        EqRel::discrete(pts8),
        EqRel::from_classes(pts8, {{"1", "2"}, {"3", "4"}, {"5", "6"},
                                   {"7", "8"}})};
    auto d = EqRel::discrete(pts8);
    auto tr = find_transversal(chain.back(), d);
    REQUIRE(tr.ok);
    auto out = transverse_filtration(chain, d, tr.witness);
    REQUIRE(out.size() == 2);
    CHECK(out[1].cls == chain[1].cls);
  }
  SUBCASE("shift-invariant chain survives whole") {
    std::vector<EqRel> chain{
        EqRel::discrete(pts8),
        EqRel::from_classes(pts8, {{"1", "2"}, {"3", "4"}, {"5", "6"},
                                   {"7", "8"}}),
        EqRel::from_classes(pts8, {{"1", "2", "3", "4"}, {"5", "6", "7", "8"}})};
    auto tr = find_transversal(chain.back(), s);
    REQUIRE(tr.ok);
    auto out = transverse_filtration(chain, s, tr.witness);
    REQUIRE(out.size() == 3);
    for (size_t n = 0; n < 3; ++n) CHECK(out[n].cls == chain[n].cls);
  }
  SUBCASE("non-invariant level shrinks but stays an equivalence") {
    std::vector<EqRel> chain{
        EqRel::discrete(pts8),
        EqRel::from_classes(pts8, {{"1", "2"}}),
        EqRel::from_classes(pts8, {{"1", "2", "3", "4"}, {"5", "6", "7", "8"}})};
    auto tr = find_transversal(chain.back(), s);
    REQUIRE(tr.ok);
    auto out = transverse_filtration(chain, s, tr.witness);
    // {1,2} without {5,6} is not shift-invariant, so level 1 collapses.
    CHECK(out[1].is_discrete());
    CHECK(out[2].cls == chain[2].cls);
  }
}

TEST_CASE("orbit relations of free actions") {
  SUBCASE("involution") {
    auto g = relation_from_group_action(pts4, {{2, 3, 0, 1}});
    REQUIRE(g.ok);
    CHECK(g.orbits.cls ==
          EqRel::from_classes(pts4, {{"1", "3"}, {"2", "4"}}).cls);
  }
  SUBCASE("four cycle") {
    auto g = relation_from_group_action(pts4, {{1, 2, 3, 0}});
    REQUIRE(g.ok);
    CHECK(g.orbits.class_count() == 1);
  }
  SUBCASE("fixed point rejected") {
    auto g = relation_from_group_action({"1", "2", "3"}, {{1, 0, 2}});
    CHECK_FALSE(g.ok);
    CHECK(g.fixed_point == 2);
    CHECK(g.fixing_element == "(1 2)");
  }
}

TEST_CASE("grid pairs are transverse, broken pairs are not") {
  std::mt19937 rng(5);
  for (int it = 0; it < 20; ++it) {
    auto gp = gen::grid_pair(rng);
    auto tr = find_transversal(gp.r, gp.s);
    REQUIRE(tr.ok);
    CHECK(class_size_check(gp.r, gp.s).ok());
    CHECK(static_cast<long>(tr.witness.h.size()) ==
          pair_count(join(gp.r, gp.s)));
    auto bad = gen::broken_pair(rng);
    auto btr = find_transversal(bad.r, bad.s);
    CHECK_FALSE(btr.ok);
    CHECK(btr.bad.has_value());
  }
}
