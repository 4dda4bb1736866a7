#pragma once

// Bound propagation through a projection polygon: bounds on the product from
// a finite candidate set, bounds on the factors from the facets and from the
// level sets of the product, and plain interval propagation of linear rows.

#include <optional>
#include <vector>

#include "bilin/lp.hpp"
#include "bilin/oracle.hpp"
#include "bilin/polygon.hpp"

namespace bilin {

enum class CandidateRole { vertex, facet_critical, levelset_intersection };

struct CandidatePoint {
  Point2 p;
  CandidateRole role = CandidateRole::vertex;
};

struct CandidateSet {
  std::vector<CandidatePoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// Change must exceed this fraction of (1 + width) to count.
inline constexpr double kMinImprovement = 1e-6;

// Polygon vertices plus, on each general facet, the maximizer/minimizer of
// x*y along the facet line when it falls inside the segment.
CandidateSet forward_candidates(const Polytope2D& p);

// [min, max] of x*y over P. With current given, the result is intersected
// with it and never loosens it.
Interval forward_bounds(const Polytope2D& p,
                        std::optional<Interval> current = std::nullopt);

// Interval propagation of P's general cuts over the local box to a fixed
// point. Nothing when the box becomes empty.
std::optional<Box2> facet_propagate(const Polytope2D& p, const Box2& local);

// Vertices of P with x*y in [lo, hi] and the crossings of each edge with the
// curves x*y = lo and x*y = hi. Infinite sides contribute no curve.
CandidateSet levelset_candidates(const Polytope2D& p, Interval xy);

struct LevelsetResult {
  bool infeasible = false;
  bool applied = false;  // false when the product bounds are implied by P
  Box2 box;
};

// Range of (x, y) over { (x, y) in P : lo <= x*y <= hi }, intersected with
// P's box.
LevelsetResult levelset_bounds(const Polytope2D& p, Interval xy);

// Applies a candidate bound change when it tightens by more than the
// improvement threshold. Returns true on change.
bool tighten_lower(double& lb, double candidate, double width);
bool tighten_upper(double& ub, double candidate, double width);

struct FbbtResult {
  bool infeasible = false;
  int tightenings = 0;
};

// Activity-based bound tightening over <= rows, in place.
FbbtResult fbbt_rows(const std::vector<LinRow>& rows, std::vector<double>& lb,
                     std::vector<double>& ub, int max_rounds = 10);

}  // namespace bilin
