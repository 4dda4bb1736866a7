#pragma once

// Brute-force references used only by the tests. None of them calls into the
// envelope, projection or propagation code they are compared against.

#include <cstdint>
#include <optional>
#include <vector>

#include "bilin/corpus.hpp"
#include "bilin/envelope.hpp"
#include "bilin/lp.hpp"
#include "bilin/model.hpp"
#include "bilin/polygon.hpp"

namespace oracle {

using bilin::Point2;

// Polygon vertices by enumerating pairwise line intersections of all
// constraints (box sides and cuts), keeping feasible ones, deduplicating and
// sorting by angle around their mean.
std::vector<Point2> line_intersection_vertices(const bilin::Box2& box,
                                               const std::vector<bilin::Halfplane>& cuts,
                                               double tol = 1e-9);

// Value at q of the convex (under) or concave (over) envelope of x*y over P,
// as the lower (upper) hull of x*y lifted over the vertices, per-edge samples
// and an interior grid. Solved as a small LP over the lifted points.
double envelope_value(const bilin::Polytope2D& p, Point2 q, bilin::CutKind kind,
                      int edge_samples = 64, int grid = 12);

// Hit-and-run over {z : rows, column bounds}. The start point is the mean
// of LP optima in random directions.
class HitAndRun {
 public:
  HitAndRun(const bilin::LinRelax& r, std::uint64_t seed);
  bool ok() const { return !point_.empty(); }
  const std::vector<double>& next();

 private:
  const bilin::LinRelax& r_;
  bilin::Rng rng_;
  std::vector<double> point_;
};

// Global minimum of a small continuous MIQCP: a uniform grid followed by
// local zooming around the best feasible grid points. Nothing when no grid
// point is feasible.
struct GridOptimum {
  double value = 0.0;
  std::vector<double> x;
};
std::optional<GridOptimum> grid_minimum(const bilin::Miqcp& p,
                                        long long budget = 1000000,
                                        int keep = 24, int levels = 14);

// Relaxation over (x, y, X) with the given rows only and a box on x, y.
bilin::LinRelax toy_relax(double xl, double xu, double yl, double yu,
                          const std::vector<bilin::LinRow>& rows);

// A relaxation over a few original columns: the McCormick relaxation of a
// random MIQCP plus random two- and three-variable linear rows that hold at
// a random point. Bounds are not tightened.
bilin::LinRelax random_relaxation(std::uint64_t seed);

}  // namespace oracle
