#include "bilin/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bilin {

Box2 Box2::intersect(const Box2& o) const {
  return {std::max(xl, o.xl), std::min(xu, o.xu), std::max(yl, o.yl),
          std::min(yu, o.yu)};
}

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double polygon_area(const std::vector<Point2>& pts) {
  double twice = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point2& p = pts[k];
    const Point2& q = pts[(k + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(twice);
}

std::vector<Point2> clip_polygon(const std::vector<Point2>& poly,
                                 const Halfplane& h) {
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  for (std::size_t k = 0; k < n; ++k) {
    const Point2& p = poly[k];
    const Point2& q = poly[(k + 1) % n];
    const double fp = h.eval(p);
    const double fq = h.eval(q);
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
    }
  }
  return out;
}

Polytope2D::Polytope2D(Box2 box, std::vector<Halfplane> cuts)
    : box_(box), cuts_(std::move(cuts)) {
  rebuild();
}

double Polytope2D::scale() const {
  return 1.0 + std::max({std::abs(box_.xl), std::abs(box_.xu),
                         std::abs(box_.yl), std::abs(box_.yu)});
}

bool Polytope2D::contains(Point2 p, double tol) const {
  const double t = tol * scale();
  if (p.x < box_.xl - t || p.x > box_.xu + t) return false;
  if (p.y < box_.yl - t || p.y > box_.yu + t) return false;
  for (const Halfplane& h : cuts_) {
    const double norm = std::max(std::abs(h.gx), std::abs(h.gy));
    if (h.eval(p) > t * norm) return false;
  }
  return true;
}

int Polytope2D::num_general_facets() const {
  int count = 0;
  for (const Edge& e : edges_) count += e.axis_parallel ? 0 : 1;
  return count;
}

Polytope2D Polytope2D::restricted(const Box2& local) const {
  return Polytope2D(box_.intersect(local), cuts_);
}

void Polytope2D::rebuild() {
  vertices_.clear();
  edges_.clear();
  if (box_.xl > box_.xu || box_.yl > box_.yu) return;
  std::vector<Point2> poly = {{box_.xl, box_.yl},
                              {box_.xu, box_.yl},
                              {box_.xu, box_.yu},
                              {box_.xl, box_.yu}};
  for (const Halfplane& h : cuts_) {
    // Scale-free clipping so tiny cut coefficients do not distort the test.
    const double norm = std::max(std::abs(h.gx), std::abs(h.gy));
    if (norm == 0.0) {
      if (h.g0 < 0.0) return;
      continue;
    }
    poly = clip_polygon(poly, {h.gx / norm, h.gy / norm, h.g0 / norm});
    if (poly.empty()) return;
  }

  const double merge_tol = 1e-9 * scale();
  // Drop coincident neighbours.
  std::vector<Point2> dedup;
  for (const Point2& p : poly) {
    if (!dedup.empty() && std::abs(p.x - dedup.back().x) <= merge_tol &&
        std::abs(p.y - dedup.back().y) <= merge_tol) {
      continue;
    }
    dedup.push_back(p);
  }
  while (dedup.size() > 1 &&
         std::abs(dedup.front().x - dedup.back().x) <= merge_tol &&
         std::abs(dedup.front().y - dedup.back().y) <= merge_tol) {
    dedup.pop_back();
  }
  // Drop collinear middle points.
  bool changed = true;
  while (changed && dedup.size() > 2) {
    changed = false;
    for (std::size_t k = 0; k < dedup.size(); ++k) {
      const std::size_t n = dedup.size();
      const Point2& prev = dedup[(k + n - 1) % n];
      const Point2& next = dedup[(k + 1) % n];
      const double len = std::hypot(next.x - prev.x, next.y - prev.y);
      if (std::abs(cross(prev, dedup[k], next)) <= merge_tol * std::max(len, 1e-300)) {
        dedup.erase(dedup.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
    }
  }
  vertices_ = std::move(dedup);
  if (vertices_.size() < 3) {
    // Degenerate (segment or point): no facets.
    return;
  }

  // Identify the generating constraint of every edge.
  struct Line {
    double a, b, c;
    int source;
  };
  std::vector<Line> lines;
  for (std::size_t k = 0; k < cuts_.size(); ++k) {
    const Halfplane& h = cuts_[k];
    const double norm = std::max(std::abs(h.gx), std::abs(h.gy));
    if (norm == 0.0) continue;
    lines.push_back({h.gx / norm, h.gy / norm, h.g0 / norm, static_cast<int>(k)});
  }
  lines.push_back({-1.0, 0.0, -box_.xl, -1});
  lines.push_back({1.0, 0.0, box_.xu, -2});
  lines.push_back({0.0, -1.0, -box_.yl, -3});
  lines.push_back({0.0, 1.0, box_.yu, -4});

  const std::size_t n = vertices_.size();
  for (std::size_t k = 0; k < n; ++k) {
    Edge e;
    e.a = vertices_[k];
    e.b = vertices_[(k + 1) % n];
    const double dx = e.b.x - e.a.x;
    const double dy = e.b.y - e.a.y;
    // Outward normal of a counter-clockwise edge.
    double best = std::numeric_limits<double>::infinity();
    const Line* pick = nullptr;
    for (const Line& l : lines) {
      if (l.a * dy - l.b * dx <= 0.0) continue;  // wrong orientation
      const double ra = std::abs(l.a * e.a.x + l.b * e.a.y - l.c);
      const double rb = std::abs(l.a * e.b.x + l.b * e.b.y - l.c);
      const double r = std::max(ra, rb);
      if (r < best) {
        best = r;
        pick = &l;
      }
    }
    if (pick != nullptr && best <= 1e-7 * scale()) {
      e.alpha = pick->a;
      e.beta = pick->b;
      e.gamma = pick->c;
      e.source = pick->source;
    } else {
      const double norm = std::max(std::abs(dx), std::abs(dy));
      e.alpha = dy / norm;
      e.beta = -dx / norm;
      e.gamma = e.alpha * e.a.x + e.beta * e.a.y;
      e.source = -5;
    }
    e.axis_parallel = std::abs(e.alpha) <= 1e-9 || std::abs(e.beta) <= 1e-9;
    edges_.push_back(e);
  }
}

const std::vector<Point2>& vertices2d(const Polytope2D& p) {
  if (p.empty()) throw EmptyPolytope();
  return p.vertices();
}

double volume2d(const Polytope2D& p) {
  if (p.empty()) throw EmptyPolytope();
  return polygon_area(p.vertices());
}

double volume_quotient(const Polytope2D& exact, const Polytope2D& relaxed) {
  const double relaxed_area = volume2d(relaxed);
  const double exact_area = volume2d(exact);
  if (relaxed_area <= 1e-15 * relaxed.scale() * relaxed.scale()) return 1.0;
  return exact_area / relaxed_area;
}

}  // namespace bilin
