#pragma once

#include <cstddef>
#include <vector>

#include "obfloc/core.hpp"

namespace obfloc {

struct OptResult {
  Placement placement;
  Rational value;
  std::size_t candidates_evaluated = 0;
};

// Vertices of the feasible region {(y1,y2) in [0,1]^2 : |y1-y2| >= d}. For
// 0 < d < 1 the region is two triangles; their (deduplicated, sorted) corner
// set is returned. Social utility is convex in (y1,y2), so its maximum over
// the region is attained at one of these vertices.
std::vector<Placement> feasible_vertices(const Rational& d);

// Exact optimum of social utility over feasible placements, by vertex
// enumeration. Ties broken toward the lexicographically smallest (y1,y2).
OptResult optimal_placement(const Instance& instance);

// Grid oracle: evaluates every feasible pair (k/m, l/m) and, when
// include_vertices is set (the default), the vertex candidates as well, so
// that its value matches optimal_placement exactly. With include_vertices
// false it is a pure grid search, useful as an independent cross-check.
OptResult brute_force_opt(const Instance& instance, int resolution,
                          bool include_vertices = true);

// n + (1-d) * |N1∩N2|: no feasible placement can beat this.
Rational welfare_upper_bound(const Instance& instance);

}  // namespace obfloc
