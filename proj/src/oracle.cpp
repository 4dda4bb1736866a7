#include "bilin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bilin {

namespace {

struct Support {
  bool infeasible = false;
  bool ok = false;
  Point2 point;
  double value = 0.0;
};

Support support_point(const LinRelax& r, int i, int j, double cx, double cy) {
  Support s;
  LpEngine engine;
  try {
    const PrimalDualSolution sol =
        engine.solve(r, LinearObjective{{{i, cx}, {j, cy}}, Sense::maximize});
    if (sol.status == LpStatus::infeasible) {
      s.infeasible = true;
    } else if (sol.optimal()) {
      s.ok = true;
      s.point = {sol.z[i], sol.z[j]};
      s.value = sol.obj;
    }
  } catch (const NumericalError&) {
  }
  return s;
}

}  // namespace

Polytope2D exact_projection_oracle(const LinRelax& r, int i, int j,
                                   OracleOptions opts) {
  const Box2 box{r.col_lb[i], r.col_ub[i], r.col_lb[j], r.col_ub[j]};
  const Polytope2D empty(Box2{1.0, 0.0, 1.0, 0.0});
  const double scale = 1.0 + std::max({std::abs(box.xl), std::abs(box.xu),
                                       std::abs(box.yl), std::abs(box.yu)});
  const double tol = 1e-9 * scale;

  // Extreme points in the four axis directions, counter-clockwise.
  std::vector<Point2> hull;
  for (const auto& [cx, cy] : {std::pair{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}}) {
    const Support s = support_point(r, i, j, cx, cy);
    if (s.infeasible) return empty;
    if (!s.ok) throw NumericalError("projection oracle: LP failed");
    hull.push_back(s.point);
  }

  // Refine every edge by its outward normal until no edge moves. Each round
  // solves all open edges, then inserts the new points in order.
  for (int round = 0; round < 200; ++round) {
    std::vector<Point2> pts;
    for (const Point2& p : hull) {
      if (pts.empty() || std::hypot(p.x - pts.back().x, p.y - pts.back().y) > tol) pts.push_back(p);
    }
    while (pts.size() > 1 && std::hypot(pts.front().x - pts.back().x, pts.front().y - pts.back().y) <= tol) {
      pts.pop_back();
    }
    hull = pts;
    const int n = static_cast<int>(hull.size());
    if (n < 2) break;
    std::vector<Support> found(n);
    std::vector<char> grow(n, 0);
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
    for (int k = 0; k < n; ++k) {
      const Point2 a = hull[k];
      const Point2 b = hull[(k + 1) % n];
      const double nx = b.y - a.y;
      const double ny = a.x - b.x;
      const double len = std::hypot(nx, ny);
      const Support s = support_point(r, i, j, nx / len, ny / len);
      found[k] = s;
      grow[k] = s.ok && s.value > (nx * a.x + ny * a.y) / len + tol;
    }
    bool changed = false;
    std::vector<Point2> next;
    for (int k = 0; k < n; ++k) {
      if (found[k].infeasible) return empty;
      next.push_back(hull[k]);
      if (grow[k]) {
        next.push_back(found[k].point);
        changed = true;
      }
    }
    hull = std::move(next);
    if (!changed) break;
  }

  std::vector<Halfplane> cuts;
  const int n = static_cast<int>(hull.size());
  if (n == 1) {
    const Point2 p = hull[0];
    cuts = {{1, 0, p.x}, {-1, 0, -p.x}, {0, 1, p.y}, {0, -1, -p.y}};
  } else if (n == 2) {
    const Point2 a = hull[0];
    const Point2 b = hull[1];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    cuts = {{dy, -dx, dy * a.x - dx * a.y}, {-dy, dx, -dy * a.x + dx * a.y},
            {dx, dy, dx * b.x + dy * b.y}, {-dx, -dy, -dx * a.x - dy * a.y}};
  } else {
    for (int k = 0; k < n; ++k) {
      const Point2 a = hull[k];
      const Point2 b = hull[(k + 1) % n];
      const double nx = b.y - a.y;
      const double ny = a.x - b.x;
      // Box facets are already present.
      if (std::abs(nx) <= 1e-12 * std::abs(ny) || std::abs(ny) <= 1e-12 * std::abs(nx)) continue;
      cuts.push_back({nx, ny, nx * a.x + ny * a.y});
    }
  }
  return Polytope2D(box, std::move(cuts));
}

namespace {

double grid_coord(double lo, double hi, int k, int n) {
  if (n <= 1) return 0.5 * (lo + hi);
  return k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1);
}

}  // namespace

std::optional<Interval> grid_product_range(const Polytope2D& p,
                                           GridOptions opts) {
  const Box2& b = p.box();
  const int n = opts.resolution;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : lo) reduction(max : hi) \
    schedule(static) if (opts.parallel)
  for (int a = 0; a < n; ++a) {
    const double x = grid_coord(b.xl, b.xu, a, n);
    for (int c = 0; c < n; ++c) {
      const double y = grid_coord(b.yl, b.yu, c, n);
      if (!p.contains({x, y}, opts.tol)) continue;
      const double v = x * y;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

std::optional<BoxRange> grid_levelset_range(const Polytope2D& p, Interval xy,
                                            GridOptions opts) {
  const Box2& b = p.box();
  const int n = opts.resolution;
  constexpr double inf = std::numeric_limits<double>::infinity();
  double xlo = inf, xhi = -inf, ylo = inf, yhi = -inf;
#pragma omp parallel for reduction(min : xlo, ylo) reduction(max : xhi, yhi) \
    schedule(static) if (opts.parallel)
  for (int a = 0; a < n; ++a) {
    const double x = grid_coord(b.xl, b.xu, a, n);
    for (int c = 0; c < n; ++c) {
      const double y = grid_coord(b.yl, b.yu, c, n);
      const double v = x * y;
      if (v < xy.lo || v > xy.hi) continue;
      if (!p.contains({x, y}, opts.tol)) continue;
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (xlo > xhi) return std::nullopt;
  return BoxRange{{xlo, xhi}, {ylo, yhi}};
}

double grid_lipschitz_slack(const Polytope2D& p, int resolution) {
  const Box2& b = p.box();
  const double hx = resolution > 1 ? b.width_x() / (resolution - 1) : b.width_x();
  const double hy = resolution > 1 ? b.width_y() / (resolution - 1) : b.width_y();
  const double mx = std::max(std::abs(b.xl), std::abs(b.xu));
  const double my = std::max(std::abs(b.yl), std::abs(b.yu));
  // |d(xy)| <= |y| dx + |x| dy + dx dy along one diagonal step.
  return my * hx + mx * hy + hx * hy;
}

}  // namespace bilin
