#include "bilin/envelope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <tuple>

namespace bilin {

LinRow TangentCut::to_row(int xi, int xj, int slot_col) const {
  // under: ax*x + ay*y - X <= beta;  over: X - ax*x - ay*y <= -beta
  if (kind == CutKind::under) {
    return LinRow{{{xi, alpha_x}, {xj, alpha_y}, {slot_col, -1.0}}, beta,
                  RowOrigin::tangent_cut};
  }
  return LinRow{{{xi, -alpha_x}, {xj, -alpha_y}, {slot_col, 1.0}}, -beta,
                RowOrigin::tangent_cut};
}

namespace {

// Over-estimation of x*y on P is under-estimation of x'*y on the mirror
// image x' = -x; all candidate generation runs in under form.
Polytope2D mirror(const Polytope2D& p) {
  const Box2& b = p.box();
  std::vector<Halfplane> cuts;
  cuts.reserve(p.cuts().size());
  for (const Halfplane& h : p.cuts()) cuts.push_back({-h.gx, h.gy, h.g0});
  return Polytope2D(Box2{-b.xu, -b.xl, b.yl, b.yu}, std::move(cuts));
}

Point2 mirror(Point2 p) { return {-p.x, p.y}; }

// Under-plane L'(x', y) on the mirror maps to the over-plane
// L(x, y) = -L'(-x, y).
Plane mirror(const Plane& pl) { return {pl.a, -pl.b, -pl.c}; }

double f(Point2 p) { return p.x * p.y; }

bool validate_under(const Plane& pl, const Polytope2D& p, double tol) {
  const double s = p.scale();
  const double t = tol * s * s;
  const auto& vs = p.vertices();
  for (const Point2& v : vs) {
    if (f(v) - pl.at(v) < -t) return false;
  }
  auto check_segment = [&](Point2 a, Point2 b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    // h(t) = A2 t^2 + A1 t + A0 along a + t (b - a)
    const double a2 = dx * dy;
    const double a1 = a.x * dy + a.y * dx - (pl.a * dx + pl.b * dy);
    const double a0 = f(a) - pl.at(a);
    if (a2 > 0.0) {
      const double tm = -a1 / (2.0 * a2);
      if (tm > 0.0 && tm < 1.0) {
        const double hm = a0 + tm * (a1 + tm * a2);
        if (hm < -t) return false;
      }
    }
    return true;
  };
  if (vs.size() == 2) return check_segment(vs[0], vs[1]);
  for (const Edge& e : p.edges()) {
    if (!check_segment(e.a, e.b)) return false;
  }
  return true;
}

std::optional<Plane> plane_through(Point2 p0, Point2 p1, Point2 p2) {
  const double m00 = p1.x - p0.x, m01 = p1.y - p0.y;
  const double m10 = p2.x - p0.x, m11 = p2.y - p0.y;
  const double det = m00 * m11 - m01 * m10;
  const double scale = std::max({std::abs(m00), std::abs(m01), std::abs(m10),
                                 std::abs(m11), 1e-300});
  if (std::abs(det) <= 1e-12 * scale * scale) return std::nullopt;
  const double r0 = f(p1) - f(p0);
  const double r1 = f(p2) - f(p0);
  Plane pl;
  pl.a = (r0 * m11 - m01 * r1) / det;
  pl.b = (m00 * r1 - r0 * m10) / det;
  pl.c = f(p0) - pl.a * p0.x - pl.b * p0.y;
  return pl;
}

// Solves the 3x3 system by Cramer's rule; nothing when near singular.
std::optional<std::array<double, 3>> solve3(const std::array<std::array<double, 4>, 3>& m) {
  auto det3 = [](double a, double b, double c, double d, double e, double f_,
                 double g, double h, double i) {
    return a * (e * i - f_ * h) - b * (d * i - f_ * g) + c * (d * h - e * g);
  };
  const double d = det3(m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2],
                        m[2][0], m[2][1], m[2][2]);
  double norm = 0.0;
  for (const auto& row : m) {
    for (int k = 0; k < 3; ++k) norm = std::max(norm, std::abs(row[k]));
  }
  if (!(norm > 0.0) || std::abs(d) <= 1e-13 * norm * norm * norm) {
    return std::nullopt;
  }
  const double dx = det3(m[0][3], m[0][1], m[0][2], m[1][3], m[1][1], m[1][2],
                         m[2][3], m[2][1], m[2][2]);
  const double dy = det3(m[0][0], m[0][3], m[0][2], m[1][0], m[1][3], m[1][2],
                         m[2][0], m[2][3], m[2][2]);
  const double dz = det3(m[0][0], m[0][1], m[0][3], m[1][0], m[1][1], m[1][3],
                         m[2][0], m[2][1], m[2][3]);
  return std::array<double, 3>{dx / d, dy / d, dz / d};
}

// Parameter of the projection of p onto segment [a, b].
double segment_param(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 <= 0.0) return 0.0;
  return ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
}

constexpr double kSegTol = 1e-9;
constexpr double kHullGrace = 1e-12;

bool in_triangle(Point2 a, Point2 b, Point2 c, Point2 q, double s) {
  const double orient = cross(a, b, c);
  const double g = kHullGrace * s * s;
  const double sign = orient > 0.0 ? 1.0 : -1.0;
  return sign * cross(a, b, q) >= -g && sign * cross(b, c, q) >= -g &&
         sign * cross(c, a, q) >= -g;
}

std::vector<Candidate> case1_under(const Polytope2D& p, Point2 q) {
  std::vector<Candidate> out;
  const auto& vs = p.vertices();
  const double s = p.scale();
  const std::size_t n = vs.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        if (std::abs(cross(vs[a], vs[b], vs[c])) <= 1e-14 * s * s) continue;
        if (!in_triangle(vs[a], vs[b], vs[c], q, s)) continue;
        const auto pl = plane_through(vs[a], vs[b], vs[c]);
        if (!pl || !validate_under(*pl, p, 1e-7)) continue;
        out.push_back({*pl, {vs[a], vs[b], vs[c]}, 1});
      }
    }
  }
  return out;
}

std::vector<Candidate> case2_under(const Polytope2D& p, Point2 q) {
  std::vector<Candidate> out;
  const double s = p.scale();
  for (const Point2& v : p.vertices()) {
    const double dx = q.x - v.x;
    const double dy = q.y - v.y;
    if (std::hypot(dx, dy) <= 1e-12 * s) continue;
    for (const Edge& e : p.edges()) {
      if (e.axis_parallel) continue;
      const double num = e.gamma - e.alpha * v.x - e.beta * v.y;
      if (std::abs(num) <= 1e-12 * s) continue;  // v on the facet line
      const double den = e.alpha * dx + e.beta * dy;
      if (std::abs(den) <= 1e-14 * s) continue;
      const double t = num / den;
      if (t < 1.0 - kHullGrace) continue;
      const Point2 pt{v.x + t * dx, v.y + t * dy};
      const double u = segment_param(pt, e.a, e.b);
      if (u < -kSegTol || u > 1.0 + kSegTol) continue;
      const double tx = e.b.x - e.a.x;
      const double ty = e.b.y - e.a.y;
      // Interpolate at v and pt; match the derivative of x*y along the facet.
      const std::array<std::array<double, 4>, 3> m = {{
          {v.x, v.y, 1.0, f(v)},
          {pt.x, pt.y, 1.0, f(pt)},
          {tx, ty, 0.0, pt.y * tx + pt.x * ty},
      }};
      const auto sol = solve3(m);
      if (!sol) continue;
      const Plane pl{(*sol)[0], (*sol)[1], (*sol)[2]};
      if (!validate_under(pl, p, 1e-7)) continue;
      out.push_back({pl, {v, pt}, 2});
    }
  }
  return out;
}

// Stable real roots of A s^2 + B s + C = 0.
std::vector<double> quadratic_roots(double a, double b, double c) {
  std::vector<double> roots;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return roots;
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(b) > 1e-14 * scale) roots.push_back(-c / b);
    return roots;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc < -1e-12 * b * b - 1e-300) return roots;
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  const double qv = -0.5 * (b + std::copysign(sq, b));
  if (qv != 0.0) {
    roots.push_back(qv / a);
    roots.push_back(c / qv);
  } else {
    roots.push_back(0.0);
  }
  return roots;
}

std::vector<Candidate> case3_under(const Polytope2D& p, Point2 q) {
  std::vector<Candidate> out;
  const double s = p.scale();
  const auto& es = p.edges();
  for (std::size_t k1 = 0; k1 < es.size(); ++k1) {
    const Edge& e1 = es[k1];
    if (e1.axis_parallel) continue;
    for (std::size_t k2 = k1 + 1; k2 < es.size(); ++k2) {
      const Edge& e2 = es[k2];
      if (e2.axis_parallel) continue;
      const double p1 = e1.alpha * e1.beta;
      const double p2 = e2.alpha * e2.beta;
      if (p1 * p2 <= 0.0) continue;
      const double sigma = p1 > 0.0 ? 1.0 : -1.0;
      const double rho1 = std::sqrt(std::abs(p1));
      const double rho2 = std::sqrt(std::abs(p2));
      for (double eps : {1.0, -1.0}) {
        // Unknowns (b, a, w), tangency on line k:
        //   (alpha_k b + beta_k a - gamma_k) / rho_k = eps_k w,  K = sigma w^2/4.
        const std::array<double, 3> r1 = {e1.alpha / rho1, e1.beta / rho1, -1.0};
        const std::array<double, 3> r2 = {e2.alpha / rho2, e2.beta / rho2, -eps};
        const double h1 = e1.gamma / rho1;
        const double h2 = e2.gamma / rho2;
        std::array<double, 3> dir = {r1[1] * r2[2] - r1[2] * r2[1],
                                     r1[2] * r2[0] - r1[0] * r2[2],
                                     r1[0] * r2[1] - r1[1] * r2[0]};
        const double dn = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
        if (dn <= 1e-12) continue;
        for (double& d : dir) d /= dn;
        // Least-norm particular solution M^T (M M^T)^{-1} h.
        const double g11 = r1[0] * r1[0] + r1[1] * r1[1] + r1[2] * r1[2];
        const double g12 = r1[0] * r2[0] + r1[1] * r2[1] + r1[2] * r2[2];
        const double g22 = r2[0] * r2[0] + r2[1] * r2[1] + r2[2] * r2[2];
        const double gd = g11 * g22 - g12 * g12;
        if (std::abs(gd) <= 1e-14) continue;
        const double y1 = (g22 * h1 - g12 * h2) / gd;
        const double y2 = (g11 * h2 - g12 * h1) / gd;
        std::array<double, 3> base;
        for (int c = 0; c < 3; ++c) base[c] = r1[c] * y1 + r2[c] * y2;

        auto unknowns = [&](double t) {
          return std::array<double, 3>{base[0] + t * dir[0],
                                       base[1] + t * dir[1],
                                       base[2] + t * dir[2]};
        };
        auto tangent_point = [](const Edge& e, double b, double a) {
          const double x = (e.gamma - a * e.beta + e.alpha * b) / (2.0 * e.alpha);
          return Point2{x, (e.gamma - e.alpha * x) / e.beta};
        };
        auto collinearity = [&](double t) {
          const auto u = unknowns(t);
          return cross(q, tangent_point(e1, u[0], u[1]),
                       tangent_point(e2, u[0], u[1]));
        };
        const double big = s;
        const double g0 = collinearity(0.0);
        const double gp = collinearity(big);
        const double gm = collinearity(-big);
        const double qa = (gp + gm - 2.0 * g0) / (2.0 * big * big);
        const double qb = (gp - gm) / (2.0 * big);
        for (double t : quadratic_roots(qa, qb, g0)) {
          const auto u = unknowns(t);
          const double b = u[0];
          const double a = u[1];
          const double w = u[2];
          const Point2 t1 = tangent_point(e1, b, a);
          const Point2 t2 = tangent_point(e2, b, a);
          if (!std::isfinite(t1.x) || !std::isfinite(t2.x)) continue;
          const double s1 = segment_param(t1, e1.a, e1.b);
          const double s2 = segment_param(t2, e2.a, e2.b);
          if (s1 < -kSegTol || s1 > 1.0 + kSegTol) continue;
          if (s2 < -kSegTol || s2 > 1.0 + kSegTol) continue;
          const double len = std::hypot(t2.x - t1.x, t2.y - t1.y);
          if (len <= 1e-12 * s) continue;
          if (std::abs(cross(t1, t2, q)) > 1e-9 * s * len) continue;
          const double along = segment_param(q, t1, t2);
          if (along < -kSegTol || along > 1.0 + kSegTol) continue;
          const double kk = sigma * w * w / 4.0;
          const Plane pl{a, b, kk - a * b};
          if (!validate_under(pl, p, 1e-7)) continue;
          out.push_back({pl, {t1, t2}, 3});
        }
      }
    }
  }
  return out;
}

template <class Gen>
std::vector<Candidate> in_kind(const Polytope2D& p, Point2 q, CutKind kind,
                               Gen gen) {
  if (p.vertices().size() < 3) return {};
  if (kind == CutKind::under) return gen(p, q);
  std::vector<Candidate> out = gen(mirror(p), mirror(q));
  for (Candidate& c : out) {
    c.plane = mirror(c.plane);
    for (Point2& s : c.support) s = mirror(s);
  }
  return out;
}

}  // namespace

bool validate_plane(const Plane& plane, const Polytope2D& p, CutKind kind,
                    double tol) {
  if (p.empty()) return true;
  if (kind == CutKind::under) return validate_under(plane, p, tol);
  return validate_under(mirror(plane), mirror(p), tol);
}

std::vector<Candidate> candidates_case1(const Polytope2D& p, Point2 q,
                                        CutKind kind) {
  return in_kind(p, q, kind, case1_under);
}

std::vector<Candidate> candidates_case2(const Polytope2D& p, Point2 q,
                                        CutKind kind) {
  return in_kind(p, q, kind, case2_under);
}

std::vector<Candidate> candidates_case3(const Polytope2D& p, Point2 q,
                                        CutKind kind) {
  return in_kind(p, q, kind, case3_under);
}

TangentCut separate(const Polytope2D& p, Point2 q, CutKind kind) {
  if (p.empty() || !p.contains(q, 1e-7)) {
    throw SeparationError("query point outside the polygon");
  }
  std::vector<Candidate> all = candidates_case1(p, q, kind);
  for (auto* gen : {&candidates_case2, &candidates_case3}) {
    std::vector<Candidate> more = gen(p, q, kind);
    all.insert(all.end(), more.begin(), more.end());
  }
  if (all.empty()) throw SeparationError("no valid envelope candidate");

  // Under: smallest value at q; over: largest. Valid candidates whose support
  // hull holds q all attain the envelope value, so this only breaks noise.
  const double sign = kind == CutKind::under ? 1.0 : -1.0;
  const Candidate* best = nullptr;
  double best_val = 0.0;
  for (const Candidate& c : all) {
    const double v = sign * c.plane.at(q);
    if (best == nullptr) {
      best = &c;
      best_val = v;
      continue;
    }
    const double tie = 1e-9 * (1.0 + std::abs(best_val));
    if (v < best_val - tie ||
        (v <= best_val + tie &&
         std::tie(c.plane.a, c.plane.b, c.plane.c) <
             std::tie(best->plane.a, best->plane.b, best->plane.c))) {
      best = &c;
      best_val = v;
    }
  }
  TangentCut cut;
  cut.kind = kind;
  cut.alpha_x = best->plane.a;
  cut.alpha_y = best->plane.b;
  cut.beta = -best->plane.c;
  cut.support = best->support;
  cut.value_at_query = best->plane.at(q);
  cut.pattern = best->pattern;
  return cut;
}

}  // namespace bilin
