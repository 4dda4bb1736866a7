#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bilin/corpus.hpp"
#include "bilin/envelope.hpp"
#include "oracles.hpp"

using namespace bilin;

namespace {

const Box2 kUnit{0, 1, 0, 1};

bool same_plane(const Plane& p, double a, double b, double c, double tol = 1e-9) {
  return std::abs(p.a - a) <= tol && std::abs(p.b - b) <= tol && std::abs(p.c - c) <= tol;
}

// Best McCormick value at q over the box of P.
double mccormick_value(const Box2& b, Point2 q, CutKind kind) {
  const double u1 = b.yu * q.x + b.xu * q.y - b.xu * b.yu;
  const double u2 = b.yl * q.x + b.xl * q.y - b.xl * b.yl;
  const double o1 = b.yu * q.x + b.xl * q.y - b.xl * b.yu;
  const double o2 = b.yl * q.x + b.xu * q.y - b.xu * b.yl;
  return kind == CutKind::under ? std::max(u1, u2) : std::min(o1, o2);
}

Polytope2D random_polygon(Rng& rng) {
  const Box2 box{rng.uniform(-2, 0.5), 0.0, rng.uniform(-2, 0.5), 0.0};
  Box2 b = box;
  b.xu = b.xl + rng.uniform(0.3, 3);
  b.yu = b.yl + rng.uniform(0.3, 3);
  const Point2 c = b.center();
  std::vector<Halfplane> cuts;
  const int k = rng.integer(0, 4);
  for (int s = 0; s < k; ++s) {
    // A cut through a point on the segment from the center to a corner.
    const double cx = rng.unit() < 0.5 ? b.xl : b.xu;
    const double cy = rng.unit() < 0.5 ? b.yl : b.yu;
    const double t = rng.uniform(0.3, 0.95);
    const Point2 p{c.x + t * (cx - c.x), c.y + t * (cy - c.y)};
    const double gx = (cx - c.x) * rng.uniform(0.3, 1.0) / b.width_x();
    const double gy = (cy - c.y) * rng.uniform(0.3, 1.0) / b.width_y();
    cuts.push_back({gx, gy, gx * p.x + gy * p.y});
  }
  return Polytope2D(b, cuts);
}

Point2 random_point_in(const Polytope2D& p, Rng& rng) {
  const Box2& b = p.box();
  for (int s = 0; s < 10000; ++s) {
    const Point2 q{rng.uniform(b.xl, b.xu), rng.uniform(b.yl, b.yu)};
    if (p.contains(q, 0.0)) return q;
  }
  return p.vertices().front();
}

}  // namespace

TEST_CASE("plane validation") {
  const Polytope2D box(kUnit);
  CHECK(validate_plane({0, 0, 0}, box, CutKind::under));
  CHECK(validate_plane({1, 1, -1}, box, CutKind::under));
  CHECK_FALSE(validate_plane({1, 1, -1 + 1e-3}, box, CutKind::under));
  CHECK(validate_plane({1, 0, 0}, box, CutKind::over));
  CHECK(validate_plane({0.5, 0.5, 0}, box, CutKind::over));
  CHECK_FALSE(validate_plane({0.5, 0.5, -0.1}, box, CutKind::over));
  // z = 0.45 (x + y) stays above x*y only once the corner (1, 1) is cut off.
  const Polytope2D cut(kUnit, {{1, 1, 1.5}});
  CHECK(validate_plane({0.45, 0.45, 0}, cut, CutKind::over));
  CHECK_FALSE(validate_plane({0.45, 0.45, 0}, box, CutKind::over));
}

TEST_CASE("three-vertex pattern on the box") {
  const Polytope2D box(kUnit);
  const auto under = candidates_case1(box, {0.5, 0.5}, CutKind::under);
  bool zero = false, diag = false;
  for (const Candidate& c : under) {
    CHECK(c.support.size() == 3);
    zero |= same_plane(c.plane, 0, 0, 0);
    diag |= same_plane(c.plane, 1, 1, -1);
    CHECK((same_plane(c.plane, 0, 0, 0) || same_plane(c.plane, 1, 1, -1)));
  }
  CHECK(zero);
  CHECK(diag);
}

TEST_CASE("three-vertex pattern on a triangle") {
  // Triangle (0,0), (1,0), (1,1).
  const Polytope2D tri(kUnit, {{-1, 1, 0}});
  REQUIRE(tri.vertices().size() == 3);
  const auto over = candidates_case1(tri, {2.0 / 3, 1.0 / 3}, CutKind::over);
  REQUIRE_FALSE(over.empty());
  for (const Candidate& c : over) CHECK(same_plane(c.plane, 0, 1, 0));
  const TangentCut cut = separate(tri, {2.0 / 3, 1.0 / 3}, CutKind::over);
  CHECK(cut.value_at_query == doctest::Approx(1.0 / 3));
}

TEST_CASE("vertex-facet pattern") {
  const Polytope2D p(kUnit, {{1, 1, 1.5}});
  const Point2 q{0.75, 0.75};
  CHECK(candidates_case1(p, q, CutKind::over).empty());
  const auto c2 = candidates_case2(p, q, CutKind::over);
  REQUIRE_FALSE(c2.empty());
  for (const Candidate& c : c2) {
    CHECK(c.plane.at(q) == doctest::Approx(0.5625));
    CHECK(validate_plane(c.plane, p, CutKind::over));
  }
  const TangentCut cut = separate(p, q, CutKind::over);
  CHECK(std::abs(cut.value_at_query - 9.0 / 16) <= 1e-9);
  CHECK(cut.value_at_query < 0.75);
  // Axis-parallel facets only: nothing to be tangent to.
  CHECK(candidates_case2(Polytope2D(kUnit), {0.5, 0.5}, CutKind::over).empty());
}

TEST_CASE("two-facet pattern") {
  const Polytope2D p(kUnit, {{-1, -1, -0.25}, {1, 1, 1.75}});
  const Point2 q{0.5, 0.5};
  const auto over = candidates_case3(p, q, CutKind::over);
  REQUIRE_FALSE(over.empty());
  // Tangent at (1/8, 1/8) and (7/8, 7/8): z = (x + y)/2 - 7/64.
  bool found = false;
  for (const Candidate& c : over) {
    CHECK(c.support.size() == 2);
    CHECK(validate_plane(c.plane, p, CutKind::over));
    found |= same_plane(c.plane, 0.5, 0.5, -7.0 / 64, 1e-9);
  }
  CHECK(found);
  const TangentCut cut = separate(p, q, CutKind::over);
  CHECK(std::abs(cut.value_at_query - 25.0 / 64) <= 1e-9);
  CHECK(std::abs(cut.value_at_query - oracle::envelope_value(p, q, CutKind::over)) <= 5e-3);

  // One general facet, or facets with opposite slope signs: no candidates.
  CHECK(candidates_case3(Polytope2D(kUnit, {{1, 1, 1.5}}), q, CutKind::over).empty());
  CHECK(candidates_case3(Polytope2D(kUnit, {{1, 1, 1.75}, {1, -1, 0.75}}), q, CutKind::over).empty());
  CHECK(candidates_case3(Polytope2D(kUnit, {{1, 1, 1.75}, {1, -1, 0.75}}), q, CutKind::under).empty());
}

TEST_CASE("separation reproduces McCormick on the box") {
  const Polytope2D box(kUnit);
  const TangentCut under = separate(box, {0.5, 0.5}, CutKind::under);
  CHECK(under.value_at_query == doctest::Approx(0.0));
  const TangentCut over = separate(box, {0.5, 0.5}, CutKind::over);
  CHECK(over.value_at_query == doctest::Approx(0.5));

  Rng rng(21);
  for (int t = 0; t < 40; ++t) {
    const Box2 b{rng.uniform(-2, 1), 0, rng.uniform(-2, 1), 0};
    Box2 bb = b;
    bb.xu = bb.xl + rng.uniform(0.2, 3);
    bb.yu = bb.yl + rng.uniform(0.2, 3);
    const Polytope2D p(bb);
    const Point2 q{rng.uniform(bb.xl, bb.xu), rng.uniform(bb.yl, bb.yu)};
    const TangentCut u = separate(p, q, CutKind::under);
    const bool u1 = same_plane(u.plane(), bb.yu, bb.xu, -bb.xu * bb.yu);
    const bool u2 = same_plane(u.plane(), bb.yl, bb.xl, -bb.xl * bb.yl);
    CHECK((u1 || u2));
    const TangentCut o = separate(p, q, CutKind::over);
    const bool o1 = same_plane(o.plane(), bb.yu, bb.xl, -bb.xl * bb.yu);
    const bool o2 = same_plane(o.plane(), bb.yl, bb.xu, -bb.xu * bb.yl);
    CHECK((o1 || o2));
  }
}

TEST_CASE("ordering halfplane tightens the underestimator") {
  // On box ∩ {x <= y} the convex envelope is x^2 / (1 + x - y); 1/4 at the center.
  const Polytope2D p(kUnit, {{1, -1, 0}});
  const Point2 q{0.5, 0.5};
  const TangentCut cut = separate(p, q, CutKind::under);
  CHECK(std::abs(cut.value_at_query - 0.25) <= 1e-9);
  CHECK(cut.value_at_query >= mccormick_value(kUnit, q, CutKind::under));
  CHECK(std::abs(cut.value_at_query - oracle::envelope_value(p, q, CutKind::under)) <= 5e-3);
  for (double x : {0.1, 0.3, 0.7}) {
    for (double y : {0.8, 0.9}) {
      const TangentCut c = separate(p, {x, y}, CutKind::under);
      CHECK(std::abs(c.value_at_query - x * x / (1 + x - y)) <= 1e-9);
    }
  }
}

TEST_CASE("query outside P") {
  const Polytope2D p(kUnit, {{1, 1, 1.5}});
  CHECK_THROWS_AS(separate(p, {0.9, 0.9}, CutKind::under), SeparationError);
}

TEST_CASE("rows built from cuts") {
  const Polytope2D p(kUnit, {{1, 1, 1.5}});
  const TangentCut over = separate(p, {0.75, 0.75}, CutKind::over);
  const LinRow row = over.to_row(0, 1, 2);
  CHECK(row.origin == RowOrigin::tangent_cut);
  // X - 3/4 x - 3/4 y <= -9/16, tight at the tangency point.
  const std::vector<double> z = {0.75, 0.75, 0.5625};
  CHECK(std::abs(row.activity(z) - row.rhs) <= 1e-9);
  const std::vector<double> above = {0.75, 0.75, 0.6};
  CHECK(row.activity(above) > row.rhs);
}

TEST_CASE("random polygons against the lifted hull") {
  Rng rng(1234);
  int compared = 0;
  for (int t = 0; t < 60; ++t) {
    const Polytope2D p = random_polygon(rng);
    REQUIRE_FALSE(p.empty());
    const Point2 q = random_point_in(p, rng);
    for (CutKind kind : {CutKind::under, CutKind::over}) {
      const TangentCut cut = separate(p, q, kind);
      CHECK(validate_plane(cut.plane(), p, kind));
      const double ref = oracle::envelope_value(p, q, kind);
      CHECK(std::abs(cut.value_at_query - ref) <= 5e-3);
      const double mc = mccormick_value(p.box(), q, kind);
      if (kind == CutKind::under) {
        CHECK(cut.value_at_query >= mc - 1e-9);
      } else {
        CHECK(cut.value_at_query <= mc + 1e-9);
      }
      ++compared;
    }
  }
  CHECK(compared >= 100);
}
