#pragma once

// Tangent planes of the convex (under) and concave (over) envelope of x*y
// over a convex polygon. Candidates come from three support patterns:
// three vertices; a vertex plus a tangency point on a general facet; two
// tangency points on two general facets with slopes of equal sign.

#include <stdexcept>
#include <vector>

#include "bilin/lp.hpp"
#include "bilin/polygon.hpp"

namespace bilin {

enum class CutKind { under, over };

// z = a*x + b*y + c
struct Plane {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double at(Point2 p) const { return a * p.x + b * p.y + c; }
};

struct Candidate {
  Plane plane;
  std::vector<Point2> support;
  int pattern = 1;  // 1, 2 or 3
};

// X >= ax*x + ay*y - beta (under) or X <= ax*x + ay*y - beta (over).
struct TangentCut {
  CutKind kind = CutKind::under;
  double alpha_x = 0.0;
  double alpha_y = 0.0;
  double beta = 0.0;
  std::vector<Point2> support;
  double value_at_query = 0.0;
  int pattern = 1;

  Plane plane() const { return {alpha_x, alpha_y, -beta}; }
  // The cut as a <= row over columns (xi, xj, slot).
  LinRow to_row(int xi, int xj, int slot_col) const;
};

class SeparationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact test: the plane stays below (under) or above (over) x*y on every
// vertex and along every edge of the polygon.
bool validate_plane(const Plane& plane, const Polytope2D& p, CutKind kind,
                    double tol = 1e-7);

// Candidate planes of each pattern whose support hull contains q. Only
// planes passing validate_plane are returned.
std::vector<Candidate> candidates_case1(const Polytope2D& p, Point2 q,
                                        CutKind kind);
std::vector<Candidate> candidates_case2(const Polytope2D& p, Point2 q,
                                        CutKind kind);
std::vector<Candidate> candidates_case3(const Polytope2D& p, Point2 q,
                                        CutKind kind);

// Envelope tangent at q. Throws SeparationError when q lies outside P or
// when no candidate validates.
TangentCut separate(const Polytope2D& p, Point2 q, CutKind kind);

}  // namespace bilin
