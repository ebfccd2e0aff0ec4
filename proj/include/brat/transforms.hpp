#pragma once

#include <functional>
#include <utility>

#include "brat/diagram.hpp"

namespace brat {

// Depth-respecting path recoding between an input and an output diagram,
// bijective on full-depth path sets.
struct RecodingMap {
  std::function<Path(const Path&)> forward;
  std::function<Path(const Path&)> inverse;

  static RecodingMap identity();
  // The map p |-> second.forward(first.forward(p)).
  static RecodingMap compose(const RecodingMap& first,
                             const RecodingMap& second);
};

struct CapacityRequest {
  std::vector<long> a; // minimum vertex count per level, 1-based levels
  std::vector<long> b; // minimum edge multiplicity for every vertex pair
};

struct TransformError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SimplicityWindows {
  // window[n] is the least m > n such that the incidence product over
  // (n, m] is strictly positive, or -1 when none exists within depth.
  std::vector<int> window;
  std::vector<int> failed_levels;
  bool ok() const { return failed_levels.empty(); }
};

std::pair<Diagram, RecodingMap> telescope(const Diagram& d,
                                          const std::vector<int>& cuts,
                                          long cap = kDefaultEnumCap);

std::pair<Diagram, RecodingMap> microscope(const Diagram& d, int n);

inline constexpr int kDefaultStepBudget = 16;

std::pair<Diagram, RecodingMap> ensure_capacity(
    const Diagram& d, const CapacityRequest& req,
    int step_budget = kDefaultStepBudget, long cap = kDefaultEnumCap);

SimplicityWindows simplicity_window(const Diagram& d);

// Checks #V_n >= a_n and all incidence entries >= b_n for n = 1..len(a).
ValidationReport check_capacity(const Diagram& d, const CapacityRequest& req);

// max over level-n subdiagram vertices w of
//   (#subdiagram paths v_0 -> w) / (#host paths v_0 -> w).
Rat thinness_bound(const Diagram& host, const Subdiagram& s, int n);

} // namespace brat
