#include "obfloc/opt.hpp"

#include <algorithm>

#include "obfloc/errors.hpp"

namespace obfloc {

namespace {

// Keeps the best (value, placement) pair under lexicographic tie-breaking.
struct Best {
  bool has = false;
  Rational value;
  Placement placement;

  void offer(const Rational& v, const Placement& p) {
    if (!has || v > value || (v == value && p < placement)) {
      has = true;
      value = v;
      placement = p;
    }
  }
};

}  // namespace

std::vector<Placement> feasible_vertices(const Rational& d) {
  if (d < Rational(0) || d > Rational(1))
    throw ValidationError("minimum distance d=" + d.str() + " out of [0,1]");
  const Rational one(1);
  std::vector<Placement> vertices = {
      // y2 >= y1 + d triangle
      {Rational(0), d},
      {Rational(0), one},
      {one - d, one},
      // y1 >= y2 + d triangle
      {d, Rational(0)},
      {one, Rational(0)},
      {one, one - d},
  };
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return vertices;
}

OptResult optimal_placement(const Instance& instance) {
  Best best;
  std::size_t evaluated = 0;
  for (const Placement& vertex : feasible_vertices(instance.d)) {
    best.offer(social_utility(instance, vertex), vertex);
    ++evaluated;
  }
  return {best.placement, best.value, evaluated};
}

OptResult brute_force_opt(const Instance& instance, int resolution, bool include_vertices) {
  if (resolution < 1) throw ValidationError("grid resolution must be >= 1");
  const int m = resolution;

  // SU(k/m, l/m) = A[k] + B[l] with A and B the per-facility distance sums;
  // precomputing both rows keeps the m^2 scan cheap without changing any value.
  std::vector<Rational> a(m + 1, Rational(0)), b(m + 1, Rational(0));
  for (int k = 0; k <= m; ++k) {
    const Rational y(k, m);
    for (const Agent& agent : instance.agents) {
      if (agent.p.p1 == 1) a[k] += (agent.x - y).abs();
      if (agent.p.p2 == 1) b[k] += (agent.x - y).abs();
    }
  }

  Best best;
  std::size_t evaluated = 0;
  for (int k = 0; k <= m; ++k) {
    for (int l = 0; l <= m; ++l) {
      const Placement p{Rational(k, m), Rational(l, m)};
      if (!p.feasible_for(instance.d)) continue;
      best.offer(a[k] + b[l], p);
      ++evaluated;
    }
  }
  if (include_vertices) {
    for (const Placement& vertex : feasible_vertices(instance.d)) {
      best.offer(social_utility(instance, vertex), vertex);
      ++evaluated;
    }
  }
  if (!best.has)
    throw FeasibilityError("no feasible grid point at resolution " + std::to_string(m) +
                           " for d = " + instance.d.str());
  return {best.placement, best.value, evaluated};
}

Rational welfare_upper_bound(const Instance& instance) {
  const PartitionCounts c = partition_counts(instance);
  return Rational(static_cast<std::int64_t>(instance.size())) +
         (Rational(1) - instance.d) * Rational(static_cast<std::int64_t>(c.shared));
}

}  // namespace obfloc
