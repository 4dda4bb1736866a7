#pragma once

// Two-dimensional projections of a linear relaxation onto (x_i, x_j): one
// diagonal LP per box vertex shoots a ray from the box center toward the
// vertex; the dual of each solve yields a halfplane in (x_i, x_j) only.

#include <cstdint>
#include <optional>
#include <vector>

#include "bilin/lp.hpp"
#include "bilin/model.hpp"
#include "bilin/obbt.hpp"
#include "bilin/polygon.hpp"

namespace bilin {

Point2 center_of(const Box2& box);

// Ray from center toward vertex: (x_j - C_j)(vx - C_i) = (x_i - C_i)(vy - C_j),
// objective max sign(vx - C_i) * x_i.
struct DiagLpSpec {
  int i = 0;
  int j = 1;
  Point2 center;
  Point2 vertex;

  EqualityRow equality() const;
  LinearObjective objective() const;
  double direction() const { return vertex.x >= center.x ? 1.0 : -1.0; }
};

// Relative tolerance below which a vertex coordinate coincides with the
// center, making the ray axis-parallel.
inline constexpr double kAxisEps = 1e-7;

bool diag_lp_admissible(const DiagLpSpec& spec, const Box2& box);

// Throws NumericalError from the engine.
PrimalDualSolution solve_diag_lp(const LinRelax& r, const DiagLpSpec& spec,
                                 LpEngine& engine);

// The halfplane obtained by aggregating the relaxation rows with the row
// multipliers and eliminating every column other than x_i, x_j through its
// bounds. Returns nothing when the ray reached the vertex, when the cut is
// not tight at the LP point, when it is axis-parallel, or when it cuts off
// no box vertex. Coefficients are scaled to max(|gx|, |gy|) = 1.
std::optional<Halfplane> extract_cut(const LinRelax& r,
                                     const PrimalDualSolution& sol,
                                     const DiagLpSpec& spec);

// Axis-parallel within kAxisEps relative to the box widths.
bool is_axis_parallel(const Halfplane& h, const Box2& box);

struct Projection {
  int i = 0;
  int j = 1;
  Polytope2D poly;
  int lp_solves = 0;
  int filtered = 0;
  int lp_failures = 0;
  bool degenerate = false;  // box too thin, projection skipped
  std::int64_t iterations = 0;

  // phi = 1 iff at least one general cut was found.
  bool effective() const { return !poly.cuts().empty(); }
};

Box2 term_box(const LinRelax& r, int i, int j);

// One term of the projection pass. Diag LPs run while the engine's
// cumulative iteration count stays below iteration_cap.
Projection compute_projection(const LinRelax& r, const BilinearTerm& term,
                              const std::vector<BilinearTerm>& all_terms,
                              FilterSet& filter, LpEngine& engine,
                              std::int64_t iteration_cap = INT64_MAX);

struct ProjectionBatch {
  std::vector<Projection> projections;  // in term order
  std::int64_t iterations = 0;
  bool budget_exhausted = false;
};

// Sequential pass in term order with a filter shared across terms. Stops
// issuing diag LPs once the engine's total iterations exceed
// iteration_cap; remaining terms get their bare box.
ProjectionBatch project_all(const LinRelax& r,
                            const std::vector<BilinearTerm>& terms,
                            FilterSet& filter, LpEngine& engine,
                            std::int64_t iteration_cap = INT64_MAX);

// Serial and OpenMP versions of the budget-free pass in which every term
// starts from a snapshot of the filter; per-term filter updates are merged
// afterwards in term order. Both return the same projections.
ProjectionBatch project_all_snapshot_serial(
    const LinRelax& r, const std::vector<BilinearTerm>& terms,
    FilterSet& filter, LpTolerances tol = {});
ProjectionBatch project_all_snapshot_parallel(
    const LinRelax& r, const std::vector<BilinearTerm>& terms,
    FilterSet& filter, LpTolerances tol = {});

}  // namespace bilin
