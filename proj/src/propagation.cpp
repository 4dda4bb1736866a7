#include "bilin/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bilin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSegTol = 1e-9;

double segment_param(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 <= 0.0) return 0.0;
  return ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
}

// Real roots of a t^2 + b t + c = 0 in cancellation-free form.
std::vector<double> stable_roots(double a, double b, double c) {
  std::vector<double> roots;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return roots;
  if (std::abs(a) <= 1e-15 * scale) {
    if (std::abs(b) > 1e-15 * scale) roots.push_back(-c / b);
    return roots;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    // Near-tangency: accept a double root within roundoff.
    if (disc < -1e-12 * std::max(b * b, std::abs(4.0 * a * c))) return roots;
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q == 0.0) {
    roots.push_back(0.0);
  } else {
    roots.push_back(q / a);
    roots.push_back(c / q);
  }
  return roots;
}

// Points of segment [a, b] where x*y = level.
std::vector<Point2> edge_level_crossings(Point2 a, Point2 b, double level) {
  std::vector<Point2> out;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  std::vector<double> ts;
  if (level == 0.0) {
    // The level set is the two coordinate axes.
    if (dx != 0.0) ts.push_back(-a.x / dx);
    if (dy != 0.0) ts.push_back(-a.y / dy);
  } else {
    ts = stable_roots(dx * dy, a.x * dy + a.y * dx, a.x * a.y - level);
  }
  for (double t : ts) {
    if (t < -kSegTol || t > 1.0 + kSegTol) continue;
    t = std::clamp(t, 0.0, 1.0);
    out.push_back({a.x + t * dx, a.y + t * dy});
  }
  return out;
}

double threshold(double width) {
  return kMinImprovement * (1.0 + (std::isfinite(width) ? width : 0.0));
}

}  // namespace

bool tighten_lower(double& lb, double candidate, double width) {
  if (candidate > lb + threshold(width)) {
    lb = candidate;
    return true;
  }
  return false;
}

bool tighten_upper(double& ub, double candidate, double width) {
  if (candidate < ub - threshold(width)) {
    ub = candidate;
    return true;
  }
  return false;
}

CandidateSet forward_candidates(const Polytope2D& p) {
  CandidateSet out;
  const auto& v = p.vertices();
  for (const Point2& q : v) out.points.push_back({q, CandidateRole::vertex});
  if (v.size() == 2) {
    // A segment has no edges; x*y along it is a parabola in the parameter.
    const double dx = v[1].x - v[0].x;
    const double dy = v[1].y - v[0].y;
    const double quad = dx * dy;
    if (quad != 0.0) {
      const double t = -(v[0].x * dy + v[0].y * dx) / (2.0 * quad);
      if (t > kSegTol && t < 1.0 - kSegTol) {
        out.points.push_back({{v[0].x + t * dx, v[0].y + t * dy}, CandidateRole::facet_critical});
      }
    }
    return out;
  }
  for (const Edge& e : p.edges()) {
    if (e.axis_parallel) continue;
    // x*y on alpha x + beta y = gamma is stationary at
    // (gamma / (2 alpha), gamma / (2 beta)).
    const Point2 crit{e.gamma / (2.0 * e.alpha), e.gamma / (2.0 * e.beta)};
    const double t = segment_param(crit, e.a, e.b);
    if (t <= kSegTol || t >= 1.0 - kSegTol) continue;
    out.points.push_back({crit, CandidateRole::facet_critical});
  }
  return out;
}

Interval forward_bounds(const Polytope2D& p, std::optional<Interval> current) {
  vertices2d(p);  // throws on an empty polygon
  const CandidateSet cs = forward_candidates(p);
  Interval r{kInf, -kInf};
  for (const CandidatePoint& c : cs.points) {
    const double v = c.p.x * c.p.y;
    r.lo = std::min(r.lo, v);
    r.hi = std::max(r.hi, v);
  }
  if (current) {
    r.lo = std::max(r.lo, current->lo);
    r.hi = std::min(r.hi, current->hi);
  }
  return r;
}

std::optional<Box2> facet_propagate(const Polytope2D& p, const Box2& local) {
  Box2 b = local.intersect(p.box());
  const double wx0 = b.width_x();
  const double wy0 = b.width_y();
  const double tol = 1e-9 * p.scale();
  if (b.xl > b.xu + tol || b.yl > b.yu + tol) return std::nullopt;
  for (int pass = 0; pass < 10; ++pass) {
    bool changed = false;
    for (const Halfplane& h : p.cuts()) {
      // gx x <= g0 - gy y, using the most favourable y (and vice versa).
      if (h.gx != 0.0) {
        const double rest = h.g0 - std::min(h.gy * b.yl, h.gy * b.yu);
        if (h.gx > 0.0) {
          changed |= tighten_upper(b.xu, rest / h.gx, wx0);
        } else {
          changed |= tighten_lower(b.xl, rest / h.gx, wx0);
        }
      }
      if (h.gy != 0.0) {
        const double rest = h.g0 - std::min(h.gx * b.xl, h.gx * b.xu);
        if (h.gy > 0.0) {
          changed |= tighten_upper(b.yu, rest / h.gy, wy0);
        } else {
          changed |= tighten_lower(b.yl, rest / h.gy, wy0);
        }
      }
      if (b.xl > b.xu + tol || b.yl > b.yu + tol) return std::nullopt;
    }
    if (!changed) break;
  }
  // Crossed bounds within tolerance collapse to a point.
  if (b.xl > b.xu) b.xl = b.xu = 0.5 * (b.xl + b.xu);
  if (b.yl > b.yu) b.yl = b.yu = 0.5 * (b.yl + b.yu);
  return b;
}

CandidateSet levelset_candidates(const Polytope2D& p, Interval xy) {
  CandidateSet out;
  const double s = p.scale();
  const double tol = 1e-9 * s * s;
  for (const Point2& v : p.vertices()) {
    const double val = v.x * v.y;
    if (val >= xy.lo - tol && val <= xy.hi + tol) {
      out.points.push_back({v, CandidateRole::vertex});
    }
  }
  std::vector<std::pair<Point2, Point2>> segments;
  if (p.vertices().size() == 2) {
    segments.push_back({p.vertices()[0], p.vertices()[1]});
  }
  for (const Edge& e : p.edges()) segments.push_back({e.a, e.b});
  for (const auto& [a, b] : segments) {
    for (double level : {xy.lo, xy.hi}) {
      if (!std::isfinite(level)) continue;
      for (const Point2& c : edge_level_crossings(a, b, level)) {
        out.points.push_back({c, CandidateRole::levelset_intersection});
      }
    }
  }
  return out;
}

LevelsetResult levelset_bounds(const Polytope2D& p, Interval xy) {
  LevelsetResult res;
  res.box = p.box();
  const Interval range = forward_bounds(p);
  const double s = p.scale();
  const double tol = 1e-9 * s * s;
  if (range.lo >= xy.lo - tol && range.hi <= xy.hi + tol) return res;
  res.applied = true;
  const CandidateSet cs = levelset_candidates(p, xy);
  if (cs.empty()) {
    res.infeasible = true;
    return res;
  }
  Box2 hull{kInf, -kInf, kInf, -kInf};
  for (const CandidatePoint& c : cs.points) {
    hull.xl = std::min(hull.xl, c.p.x);
    hull.xu = std::max(hull.xu, c.p.x);
    hull.yl = std::min(hull.yl, c.p.y);
    hull.yu = std::max(hull.yu, c.p.y);
  }
  const double wx = res.box.width_x();
  const double wy = res.box.width_y();
  tighten_lower(res.box.xl, hull.xl, wx);
  tighten_upper(res.box.xu, hull.xu, wx);
  tighten_lower(res.box.yl, hull.yl, wy);
  tighten_upper(res.box.yu, hull.yu, wy);
  return res;
}

FbbtResult fbbt_rows(const std::vector<LinRow>& rows, std::vector<double>& lb,
                     std::vector<double>& ub, int max_rounds) {
  FbbtResult res;
  const std::vector<double> lb0 = lb;
  const std::vector<double> ub0 = ub;
  for (int round = 0; round < max_rounds; ++round) {
    bool changed = false;
    for (const LinRow& row : rows) {
      // Minimum activity with the count of unbounded contributions.
      double min_act = 0.0;
      int inf_count = 0;
      for (const auto& [col, a] : row.coeffs) {
        const double m = a > 0.0 ? a * lb[col] : a * ub[col];
        if (std::isfinite(m)) {
          min_act += m;
        } else {
          ++inf_count;
        }
      }
      if (inf_count == 0 &&
          min_act > row.rhs + 1e-7 * (1.0 + std::abs(row.rhs))) {
        res.infeasible = true;
        return res;
      }
      if (inf_count > 1) continue;
      for (const auto& [col, a] : row.coeffs) {
        if (a == 0.0) continue;
        const double own = a > 0.0 ? a * lb[col] : a * ub[col];
        double rest;
        if (std::isfinite(own)) {
          if (inf_count > 0) continue;
          rest = min_act - own;
        } else {
          rest = min_act;
        }
        const double bound = (row.rhs - rest) / a;
        const double width = ub0[col] - lb0[col];
        if (a > 0.0) {
          if (tighten_upper(ub[col], bound, width)) {
            changed = true;
            ++res.tightenings;
          }
        } else {
          if (tighten_lower(lb[col], bound, width)) {
            changed = true;
            ++res.tightenings;
          }
        }
        if (lb[col] > ub[col]) {
          if (lb[col] > ub[col] + 1e-7 * (1.0 + std::abs(ub[col]))) {
            res.infeasible = true;
            return res;
          }
          lb[col] = ub[col] = 0.5 * (lb[col] + ub[col]);
        }
      }
    }
    if (!changed) break;
  }
  return res;
}

}  // namespace bilin
