#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brat/diagram.hpp"

namespace brat {

// Equivalence relation on a finite ordered point set. cls[i] is the class of
// point i; class ids are assigned in order of each class's least member.
struct EqRel {
  std::vector<std::string> points;
  std::vector<int> cls;

  static EqRel discrete(std::vector<std::string> pts);
  // Builds from explicit classes; unlisted points become singletons.
  static EqRel from_classes(std::vector<std::string> pts,
                            const std::vector<std::vector<std::string>>& cs);

  int size() const { return static_cast<int>(points.size()); }
  int class_count() const;
  bool related(int x, int y) const { return cls[x] == cls[y]; }
  std::vector<std::vector<int>> classes() const;
  std::vector<int> class_of(int x) const; // members, ascending
  bool is_discrete() const;
  // True when every pair of *this is a pair of other (same point set assumed).
  bool subset_of(const EqRel& other) const;
  bool same_points(const EqRel& other) const;
  void canonicalize(); // renumber class ids by least member

  // All ordered related pairs, diagonal included.
  std::vector<std::pair<int, int>> pairs() const;
};

EqRel join(const EqRel& r, const EqRel& s);

// Transversality witness: for every composable ((x,y) in R, (y,z) in S) the
// unique y' with (x,y') in S and (y',z) in R, keyed by the triple (x,y,z).
struct TransversalWitness {
  std::map<std::array<int, 3>, int> h;
};

struct TransversalResult {
  bool ok = false;
  std::string reason;                      // set on failure
  std::optional<std::pair<int, int>> bad;  // a witnessing pair on failure
  TransversalWitness witness;
};

TransversalResult find_transversal(const EqRel& r, const EqRel& s);

// #[x]_S = #[y]_S for (x,y) in R, and every join class has size m*n where m
// counts its R-subclasses and n its S-subclasses.
ValidationReport class_size_check(const EqRel& r, const EqRel& s);

// Tower decomposition of a finite equivalence relation. towers[t] is a list
// of classes (each a point list in ascending order, all of equal length, the
// tower height). Floor (t, l) collects the l-th point of every class in
// tower t; graph (t, l, l') maps floor l to floor l' classwise.
struct GroupoidPartition {
  EqRel host;
  std::vector<std::vector<std::vector<int>>> towers;

  int height(int t) const { return static_cast<int>(towers[t][0].size()); }
  std::vector<int> floor(int t, int l) const;
};

// Groupoid partition whose graphs refine pair_label and whose floors refine
// point_label: classes are grouped by their decorated isomorphism type.
GroupoidPartition groupoid_refine(
    const EqRel& r, const std::function<int(int, int)>& pair_label,
    const std::vector<int>& point_label);

// Checks the groupoid partition axioms plus refinement of the given labels.
ValidationReport validate_groupoid_partition(
    const GroupoidPartition& gp,
    const std::function<int(int, int)>& pair_label = nullptr,
    const std::vector<int>& point_label = {});

struct FiltrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shrinks each R_n of a nested chain (R_0 = diagonal) to the transverse core
// R'_n = {(x,y) in R_n : h carries {(x,y)} x_X S into S x_X R_n}; verifies
// each R'_n is an equivalence relation transverse to S and that R'_M = R_M.
std::vector<EqRel> transverse_filtration(const std::vector<EqRel>& chain,
                                         const EqRel& s,
                                         const TransversalWitness& w);

struct GroupActionResult {
  bool ok = false;
  std::string reason;
  int fixed_point = -1;        // on failure: a point fixed by...
  std::string fixing_element;  // ...this non-identity element (cycle form)
  EqRel orbits;
};

inline constexpr long kGroupEnumCap = 100000;

// Orbit relation of the group generated by the given permutations (each a
// full permutation of 0..n-1), provided the action is free.
GroupActionResult relation_from_group_action(
    std::vector<std::string> points,
    const std::vector<std::vector<int>>& generators,
    long cap = kGroupEnumCap);

std::string cycle_notation(const std::vector<int>& perm,
                           const std::vector<std::string>& points);

} // namespace brat
