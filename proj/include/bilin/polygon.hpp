#pragma once

// Convex polygons in the (x_i, x_j) plane: a box intersected with a few
// general halfplanes, with a cached counter-clockwise vertex list.

#include <stdexcept>
#include <vector>

namespace bilin {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// gx * x + gy * y <= g0
struct Halfplane {
  double gx = 0.0;
  double gy = 0.0;
  double g0 = 0.0;

  double eval(Point2 p) const { return gx * p.x + gy * p.y - g0; }
};

struct Box2 {
  double xl = 0.0;
  double xu = 0.0;
  double yl = 0.0;
  double yu = 0.0;

  double width_x() const { return xu - xl; }
  double width_y() const { return yu - yl; }
  Point2 center() const { return {0.5 * (xl + xu), 0.5 * (yl + yu)}; }
  Box2 intersect(const Box2& o) const;
};

// One side of the polygon. The line is alpha * x + beta * y = gamma with
// (alpha, beta) the outward normal scaled so that max(|alpha|, |beta|) = 1.
struct Edge {
  Point2 a;
  Point2 b;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  int source = 0;  // cut index, or -1..-4 for xl, xu, yl, yu
  bool axis_parallel = true;
};

class EmptyPolytope : public std::runtime_error {
 public:
  EmptyPolytope() : std::runtime_error("empty polytope") {}
};

class Polytope2D {
 public:
  Polytope2D() = default;
  explicit Polytope2D(Box2 box, std::vector<Halfplane> cuts = {});

  const Box2& box() const { return box_; }
  const std::vector<Halfplane>& cuts() const { return cuts_; }
  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool empty() const { return vertices_.empty(); }
  bool contains(Point2 p, double tol = 1e-7) const;
  int num_facets() const { return static_cast<int>(edges_.size()); }
  int num_general_facets() const;

  // Same cuts over box ∩ local.
  Polytope2D restricted(const Box2& local) const;

  // Scale used for relative tolerances: 1 + largest coordinate magnitude.
  double scale() const;

 private:
  void rebuild();

  Box2 box_;
  std::vector<Halfplane> cuts_;
  std::vector<Point2> vertices_;
  std::vector<Edge> edges_;
};

double cross(Point2 o, Point2 a, Point2 b);
double polygon_area(const std::vector<Point2>& pts);
std::vector<Point2> clip_polygon(const std::vector<Point2>& poly,
                                 const Halfplane& h);

// Counter-clockwise vertices. Throws EmptyPolytope.
const std::vector<Point2>& vertices2d(const Polytope2D& p);
double volume2d(const Polytope2D& p);
// area(exact) / area(relaxed); 1 when the relaxed polygon has no area.
double volume_quotient(const Polytope2D& exact, const Polytope2D& relaxed);

}  // namespace bilin
