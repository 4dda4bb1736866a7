#pragma once

// Brute-force references: the exact shadow of a relaxation on (x_i, x_j)
// from support LPs, and dense-grid ranges of x*y over a polygon.
// Each kernel has an OpenMP version and a serial version with identical
// results.

#include <optional>

#include "bilin/lp.hpp"
#include "bilin/polygon.hpp"

namespace bilin {

struct OracleOptions {
  bool parallel = true;
};

// Shadow of the relaxation on (x_i, x_j), built by support LPs: starting
// from the four axis extremes, each hull edge is pushed out along its normal
// until no LP moves it. Returns an empty polytope when the relaxation is
// infeasible.
Polytope2D exact_projection_oracle(const LinRelax& r, int i, int j,
                                   OracleOptions opts = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct GridOptions {
  int resolution = 1000;  // points per axis
  bool parallel = true;
  double tol = 1e-9;      // membership tolerance for P
};

// min/max of x*y over grid points of P's box that lie in P. Empty when no
// grid point lies in P.
std::optional<Interval> grid_product_range(const Polytope2D& p,
                                           GridOptions opts = {});

struct BoxRange {
  Interval x;
  Interval y;
};

// Componentwise min/max of the grid points of P whose product lies in
// [lo, hi]. Empty when none does.
std::optional<BoxRange> grid_levelset_range(const Polytope2D& p, Interval xy,
                                            GridOptions opts = {});

// Largest change of x*y between neighbouring grid points over P's box; the
// slack allowed when comparing exact extremes to grid extremes.
double grid_lipschitz_slack(const Polytope2D& p, int resolution);

}  // namespace bilin
