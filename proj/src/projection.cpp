#include "bilin/projection.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace bilin {

Point2 center_of(const Box2& box) { return box.center(); }

EqualityRow DiagLpSpec::equality() const {
  const double di = vertex.x - center.x;
  const double dj = vertex.y - center.y;
  // -dj * x_i + di * x_j = C_j * di - C_i * dj
  return EqualityRow{{{i, -dj}, {j, di}}, center.y * di - center.x * dj};
}

LinearObjective DiagLpSpec::objective() const {
  return LinearObjective{{{i, direction()}}, Sense::maximize};
}

bool diag_lp_admissible(const DiagLpSpec& spec, const Box2& box) {
  const double ti = kAxisEps * std::max(box.width_x(), 1e-300);
  const double tj = kAxisEps * std::max(box.width_y(), 1e-300);
  return std::abs(spec.vertex.x - spec.center.x) > ti &&
         std::abs(spec.vertex.y - spec.center.y) > tj;
}

PrimalDualSolution solve_diag_lp(const LinRelax& r, const DiagLpSpec& spec,
                                 LpEngine& engine) {
  return engine.solve(r, spec.objective(), spec.equality());
}

Box2 term_box(const LinRelax& r, int i, int j) {
  return {r.col_lb[i], r.col_ub[i], r.col_lb[j], r.col_ub[j]};
}

bool is_axis_parallel(const Halfplane& h, const Box2& box) {
  // Compare the variation each coefficient produces across the box.
  const double vx = std::abs(h.gx) * box.width_x();
  const double vy = std::abs(h.gy) * box.width_y();
  const double big = std::max(vx, vy);
  return big <= 0.0 || vx <= kAxisEps * big || vy <= kAxisEps * big;
}

std::optional<Halfplane> extract_cut(const LinRelax& r,
                                     const PrimalDualSolution& sol,
                                     const DiagLpSpec& spec) {
  if (!sol.optimal()) return std::nullopt;
  const Box2 box = term_box(r, spec.i, spec.j);
  const double xi = sol.z[spec.i];
  const double xj = sol.z[spec.j];
  const double sx = 1e-9 * (1.0 + std::abs(spec.vertex.x));
  const double sy = 1e-9 * (1.0 + std::abs(spec.vertex.y));
  if (std::abs(xi - spec.vertex.x) <= sx || std::abs(xj - spec.vertex.y) <= sy) {
    return std::nullopt;
  }

  // w = lambda^T A; the cut keeps (s e_i - mu g) on (x_i, x_j) and pays for
  // everything else with bounds, so validity does not rest on mu's accuracy.
  std::vector<double> w(r.num_cols(), 0.0);
  double rhs = 0.0;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const double lam = sol.lambda[k];
    if (lam == 0.0) continue;
    for (const auto& [col, v] : r.rows[k].coeffs) w[col] += lam * v;
    rhs += lam * r.rows[k].rhs;
  }
  const EqualityRow eq = spec.equality();
  double gi = 0.0;
  double gj = 0.0;
  for (const auto& [col, v] : eq.coeffs) {
    if (col == spec.i) gi += v;
    if (col == spec.j) gj += v;
  }
  const double ai = spec.direction() - sol.mu * gi;
  const double aj = -sol.mu * gj;

  auto min_over = [&](double coef, int col) {
    if (coef == 0.0) return 0.0;
    return std::min(coef * r.col_lb[col], coef * r.col_ub[col]);
  };
  for (int col = 0; col < r.num_cols(); ++col) {
    if (col == spec.i || col == spec.j) continue;
    rhs -= min_over(w[col], col);
  }
  rhs -= min_over(w[spec.i] - ai, spec.i);
  rhs -= min_over(w[spec.j] - aj, spec.j);

  const double norm = std::max(std::abs(ai), std::abs(aj));
  if (!(norm > 1e-12) || !std::isfinite(rhs)) return std::nullopt;
  Halfplane h{ai / norm, aj / norm, rhs / norm};

  const double scale = 1.0 + std::max({std::abs(box.xl), std::abs(box.xu),
                                       std::abs(box.yl), std::abs(box.yu)});
  if (std::abs(h.eval({xi, xj})) > 1e-6 * scale) return std::nullopt;
  if (is_axis_parallel(h, box)) return std::nullopt;

  const std::array<Point2, 4> corners = {Point2{box.xl, box.yl},
                                         Point2{box.xu, box.yl},
                                         Point2{box.xl, box.yu},
                                         Point2{box.xu, box.yu}};
  bool separates = false;
  for (const Point2& v : corners) separates |= h.eval(v) > 1e-9 * scale;
  if (!separates) return std::nullopt;
  return h;
}

namespace {

bool degenerate_box(const Box2& box) {
  const double scale = 1.0 + std::max({std::abs(box.xl), std::abs(box.xu),
                                       std::abs(box.yl), std::abs(box.yu)});
  return box.width_x() <= kAxisEps * scale || box.width_y() <= kAxisEps * scale;
}

// Vertex order: (l,l), (u,l), (l,u), (u,u).
std::array<Point2, 4> box_vertices(const Box2& b) {
  return {Point2{b.xl, b.yl}, Point2{b.xu, b.yl}, Point2{b.xl, b.yu},
          Point2{b.xu, b.yu}};
}

}  // namespace

Projection compute_projection(const LinRelax& r, const BilinearTerm& term,
                              const std::vector<BilinearTerm>& all_terms,
                              FilterSet& filter, LpEngine& engine,
                              std::int64_t iteration_cap) {
  Projection out;
  out.i = term.i;
  out.j = term.j;
  const Box2 box = term_box(r, term.i, term.j);
  if (degenerate_box(box)) {
    out.degenerate = true;
    out.poly = Polytope2D(box);
    return out;
  }
  const Point2 c = center_of(box);
  const std::int64_t before = engine.total_iterations();
  std::vector<Halfplane> cuts;
  for (const Point2& v : box_vertices(box)) {
    if (is_filtered(filter, term.i, term.j, v.x, v.y)) {
      ++out.filtered;
      continue;
    }
    if (engine.total_iterations() >= iteration_cap) break;
    const DiagLpSpec spec{term.i, term.j, c, v};
    if (!diag_lp_admissible(spec, box)) continue;
    PrimalDualSolution sol;
    try {
      sol = solve_diag_lp(r, spec, engine);
    } catch (const NumericalError&) {
      ++out.lp_failures;
      continue;
    }
    ++out.lp_solves;
    if (!sol.optimal()) continue;
    update_filter(filter, sol.z, all_terms, r.col_lb, r.col_ub);
    if (auto h = extract_cut(r, sol, spec)) cuts.push_back(*h);
  }
  out.iterations = engine.total_iterations() - before;
  out.poly = Polytope2D(box, std::move(cuts));
  return out;
}

ProjectionBatch project_all(const LinRelax& r,
                            const std::vector<BilinearTerm>& terms,
                            FilterSet& filter, LpEngine& engine,
                            std::int64_t iteration_cap) {
  ProjectionBatch batch;
  const std::int64_t before = engine.total_iterations();
  for (const BilinearTerm& t : terms) {
    if (engine.total_iterations() >= iteration_cap) {
      batch.budget_exhausted = true;
      Projection bare;
      bare.i = t.i;
      bare.j = t.j;
      bare.poly = Polytope2D(term_box(r, t.i, t.j));
      batch.projections.push_back(std::move(bare));
      continue;
    }
    batch.projections.push_back(
        compute_projection(r, t, terms, filter, engine, iteration_cap));
  }
  batch.iterations = engine.total_iterations() - before;
  return batch;
}

namespace {

ProjectionBatch snapshot_pass(const LinRelax& r,
                              const std::vector<BilinearTerm>& terms,
                              FilterSet& filter, LpTolerances tol,
                              bool parallel) {
  const int count = static_cast<int>(terms.size());
  std::vector<Projection> results(count);
  std::vector<FilterSet> local(count, filter);
  std::vector<std::int64_t> iters(count, 0);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int k = 0; k < count; ++k) {
    LpEngine engine(tol);
    results[k] = compute_projection(r, terms[k], terms, local[k], engine);
    iters[k] = engine.total_iterations();
  }
  ProjectionBatch batch;
  for (int k = 0; k < count; ++k) {
    filter.merge(local[k]);
    batch.iterations += iters[k];
  }
  batch.projections = std::move(results);
  return batch;
}

}  // namespace

ProjectionBatch project_all_snapshot_serial(
    const LinRelax& r, const std::vector<BilinearTerm>& terms,
    FilterSet& filter, LpTolerances tol) {
  return snapshot_pass(r, terms, filter, tol, false);
}

ProjectionBatch project_all_snapshot_parallel(
    const LinRelax& r, const std::vector<BilinearTerm>& terms,
    FilterSet& filter, LpTolerances tol) {
  return snapshot_pass(r, terms, filter, tol, true);
}

}  // namespace bilin
