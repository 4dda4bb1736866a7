#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bilin/corpus.hpp"
#include "bilin/polygon.hpp"
#include "oracles.hpp"

using namespace bilin;

namespace {

const Box2 kUnit{0, 1, 0, 1};

bool same_vertex_sets(const std::vector<Point2>& a, const std::vector<Point2>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const Point2& p : a) {
    bool hit = false;
    for (const Point2& q : b) hit |= std::abs(p.x - q.x) <= tol && std::abs(p.y - q.y) <= tol;
    if (!hit) return false;
  }
  return true;
}

// Halfplanes of a counter-clockwise polygon, one per edge.
std::vector<Halfplane> hull_halfplanes(const std::vector<Point2>& ccw) {
  std::vector<Halfplane> out;
  for (std::size_t k = 0; k < ccw.size(); ++k) {
    const Point2 a = ccw[k];
    const Point2 b = ccw[(k + 1) % ccw.size()];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    out.push_back({dy, -dx, dy * a.x - dx * a.y});
  }
  return out;
}

}  // namespace

TEST_CASE("vertices of simple polygons") {
  SUBCASE("unit box") {
    const Polytope2D p(kUnit);
    CHECK(vertices2d(p).size() == 4);
    CHECK(p.num_facets() == 4);
    CHECK(p.num_general_facets() == 0);
    CHECK(volume2d(p) == doctest::Approx(1.0));
  }
  SUBCASE("box with x + y <= 3/2") {
    const Polytope2D p(kUnit, {{1, 1, 1.5}});
    const std::vector<Point2> expected = {{0, 0}, {1, 0}, {1, 0.5}, {0.5, 1}, {0, 1}};
    CHECK(same_vertex_sets(vertices2d(p), expected, 1e-12));
    CHECK(p.num_general_facets() == 1);
    CHECK(volume2d(p) == doctest::Approx(0.875));
  }
  SUBCASE("cut through two opposite corners") {
    const Polytope2D p(kUnit, {{1, 1, 1}});
    const std::vector<Point2> expected = {{0, 0}, {1, 0}, {0, 1}};
    CHECK(same_vertex_sets(vertices2d(p), expected, 1e-12));
    CHECK(volume2d(p) == doctest::Approx(0.5));
  }
  SUBCASE("cut through a corner and a side point replaces one facet") {
    // Through (0, 1) and (1, 1/2).
    const Polytope2D p(kUnit, {{0.5, 1, 1}});
    const auto v = vertices2d(p);
    CHECK(v.size() == 4);
    CHECK(same_vertex_sets(v, oracle::line_intersection_vertices(kUnit, p.cuts()), 1e-12));
    CHECK(p.num_facets() == 4);
    CHECK(p.num_general_facets() == 1);
  }
  SUBCASE("redundant cut") {
    const Polytope2D p(kUnit, {{1, 1, 5}});
    CHECK(vertices2d(p).size() == 4);
    CHECK(p.num_general_facets() == 0);
  }
  SUBCASE("empty") {
    const Polytope2D p(kUnit, {{1, 1, -1}});
    CHECK(p.empty());
    CHECK_THROWS_AS(vertices2d(p), EmptyPolytope);
  }
}

TEST_CASE("vertex lists agree with pairwise line intersections") {
  Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    const Box2 box{rng.uniform(-2, 0), rng.uniform(0.1, 2), rng.uniform(-2, 0), rng.uniform(0.1, 2)};
    std::vector<Halfplane> cuts;
    const Point2 c = box.center();
    const int k = rng.integer(0, 4);
    for (int s = 0; s < k; ++s) {
      const double ang = rng.uniform(0, 2 * M_PI);
      Halfplane h{std::cos(ang), std::sin(ang), 0};
      // Keep the center inside so the polygon is never empty.
      h.g0 = h.gx * c.x + h.gy * c.y + rng.uniform(0.05, 1.5);
      cuts.push_back(h);
    }
    const Polytope2D p(box, cuts);
    const auto ref = oracle::line_intersection_vertices(box, cuts);
    const auto& v = vertices2d(p);
    CHECK(same_vertex_sets(v, ref, 1e-8));
    CHECK(p.num_facets() <= 8);
    CHECK(polygon_area(v) > 0.0);
    for (const Point2& q : v) CHECK(p.contains(q));
    // Each vertex lies on two edges and every edge carries its own line.
    for (const Edge& e : p.edges()) {
      const double norm = std::hypot(e.alpha, e.beta);
      CHECK(std::abs(e.alpha * e.a.x + e.beta * e.a.y - e.gamma) <= 1e-9 * norm * p.scale());
      CHECK(std::abs(e.alpha * e.b.x + e.beta * e.b.y - e.gamma) <= 1e-9 * norm * p.scale());
    }
  }
}

TEST_CASE("volume family from the tightness construction") {
  for (double a : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    const Polytope2D relaxed(kUnit, {{-1, 1, 1 - a}, {1, -1, 1 - a}});
    const std::vector<Point2> inner = {{0, 0}, {1 - a / 2, a / 2}, {1, 1}, {a / 2, 1 - a / 2}};
    const Polytope2D exact(kUnit, hull_halfplanes(inner));
    CHECK(relaxed.vertices().size() == 6);
    CHECK(exact.vertices().size() == 4);
    CHECK(std::abs(volume2d(relaxed) - (1 - a * a)) <= 1e-12);
    CHECK(std::abs(volume2d(exact) - (1 - a)) <= 1e-12);
    CHECK(std::abs(volume_quotient(exact, relaxed) - 1 / (1 + a)) <= 1e-9);
  }
  // Small a approaches 1.
  const double a = 1e-4;
  const Polytope2D relaxed(kUnit, {{-1, 1, 1 - a}, {1, -1, 1 - a}});
  const Polytope2D exact(kUnit, hull_halfplanes({{0, 0}, {1 - a / 2, a / 2}, {1, 1}, {a / 2, 1 - a / 2}}));
  CHECK(volume_quotient(exact, relaxed) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(volume_quotient(relaxed, relaxed) == 1.0);
}

TEST_CASE("zero-area relaxed polygon") {
  const Polytope2D line(Box2{0, 1, 0.5, 0.5});
  CHECK(volume2d(line) == 0.0);
  CHECK(volume_quotient(line, line) == 1.0);
}

TEST_CASE("restriction and containment") {
  const Polytope2D p(kUnit, {{1, 1, 1.5}});
  const Polytope2D r = p.restricted(Box2{0.6, 1, 0.6, 1});
  CHECK_FALSE(r.empty());
  CHECK(volume2d(r) == doctest::Approx(0.5 * 0.3 * 0.3));
  CHECK(r.contains({0.7, 0.7}));
  CHECK_FALSE(r.contains({0.9, 0.9}));
  CHECK(p.restricted(Box2{0.9, 1, 0.9, 1}).empty());
  CHECK(p.contains({0.75, 0.75}));
  CHECK(p.contains({0.75, 0.75 + 1e-9}));
  CHECK_FALSE(p.contains({0.8, 0.8}));
}
