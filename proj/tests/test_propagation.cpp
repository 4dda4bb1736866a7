#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "bilin/corpus.hpp"
#include "bilin/oracle.hpp"
#include "bilin/propagation.hpp"

using namespace bilin;

namespace {

const Box2 kUnit{0, 1, 0, 1};
constexpr double kInf = std::numeric_limits<double>::infinity();

bool has_point(const CandidateSet& cs, Point2 q, double tol = 1e-12) {
  for (const CandidatePoint& c : cs.points) {
    if (std::abs(c.p.x - q.x) <= tol && std::abs(c.p.y - q.y) <= tol) return true;
  }
  return false;
}

int count_role(const CandidateSet& cs, CandidateRole role) {
  int n = 0;
  for (const CandidatePoint& c : cs.points) n += c.role == role;
  return n;
}

Polytope2D random_polygon(Rng& rng) {
  Box2 b{rng.uniform(-2, 1), 0, rng.uniform(-2, 1), 0};
  b.xu = b.xl + rng.uniform(0.3, 3);
  b.yu = b.yl + rng.uniform(0.3, 3);
  const Point2 c = b.center();
  std::vector<Halfplane> cuts;
  const int k = rng.integer(0, 4);
  for (int s = 0; s < k; ++s) {
    const double ang = rng.uniform(0, 2 * M_PI);
    Halfplane h{std::cos(ang), std::sin(ang), 0};
    h.g0 = h.gx * c.x + h.gy * c.y + rng.uniform(0.02, 1.0);
    cuts.push_back(h);
  }
  return Polytope2D(b, cuts);
}

}  // namespace

TEST_CASE("forward candidates") {
  SUBCASE("box") {
    const CandidateSet cs = forward_candidates(Polytope2D(kUnit));
    CHECK(cs.size() == 4);
    CHECK(count_role(cs, CandidateRole::facet_critical) == 0);
  }
  SUBCASE("x + y <= 3/2 adds the stationary point of the facet") {
    const CandidateSet cs = forward_candidates(Polytope2D(kUnit, {{1, 1, 1.5}}));
    CHECK(cs.size() == 6);
    CHECK(has_point(cs, {0.75, 0.75}));
    CHECK(count_role(cs, CandidateRole::facet_critical) == 1);
  }
  SUBCASE("stationary point off the facet") {
    // Facet from (0, 1) to (1, 2) on y = x + 1; x(x + 1) is stationary at x = -1/2.
    const Polytope2D p(Box2{0, 1, 0, 2}, {{-1, 1, 1}});
    const CandidateSet cs = forward_candidates(p);
    CHECK(count_role(cs, CandidateRole::facet_critical) == 0);
    CHECK(has_point(cs, {0, 1}));
    CHECK(has_point(cs, {1, 2}));
  }
  SUBCASE("segment") {
    // x + y = 1 on the unit box collapses P to a segment.
    const Polytope2D p(kUnit, {{1, 1, 1}, {-1, -1, -1}});
    REQUIRE(p.vertices().size() == 2);
    const CandidateSet cs = forward_candidates(p);
    CHECK(has_point(cs, {0.5, 0.5}, 1e-12));
    const Interval r = forward_bounds(p);
    CHECK(r.lo == doctest::Approx(0.0));
    CHECK(r.hi == doctest::Approx(0.25));
  }
  SUBCASE("size bound") {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) CHECK(forward_candidates(random_polygon(rng)).size() <= 12);
  }
}

TEST_CASE("forward bounds") {
  const Interval toy = forward_bounds(Polytope2D(kUnit, {{1, 1, 1.5}}));
  CHECK(std::abs(toy.hi - 0.5625) <= 1e-12);
  CHECK(std::abs(toy.lo) <= 1e-12);
  const Interval box = forward_bounds(Polytope2D(kUnit));
  CHECK(box.lo == 0.0);
  CHECK(box.hi == 1.0);
  // Never loosens an existing interval.
  const Interval kept = forward_bounds(Polytope2D(kUnit), Interval{0.1, 0.4});
  CHECK(kept.lo == 0.1);
  CHECK(kept.hi == 0.4);

  // Mixed-sign box with two general facets.
  const Polytope2D p(Box2{-1, 1, -1, 2}, {{1, 1, 1.5}, {-1, -1, 0.5}, {1, -1, 1.2}});
  const Interval exact = forward_bounds(p);
  const auto grid = grid_product_range(p, GridOptions{2000, true, 1e-9});
  REQUIRE(grid);
  const double slack = grid_lipschitz_slack(p, 2000);
  CHECK(exact.lo <= grid->lo + 1e-12);
  CHECK(exact.hi >= grid->hi - 1e-12);
  CHECK(grid->lo - exact.lo <= slack);
  CHECK(exact.hi - grid->hi <= slack);
  CHECK_THROWS_AS(forward_bounds(Polytope2D(kUnit, {{1, 1, -1}})), EmptyPolytope);
}

TEST_CASE("facet propagation after branching") {
  // P between y = x/2 and y = (x + 1)/2.
  const Polytope2D p(kUnit, {{-1, 2, 1}, {1, -2, 0}});
  const auto b = facet_propagate(p, Box2{0, 0.5, 0, 1});
  REQUIRE(b);
  CHECK(b->xl == 0.0);
  CHECK(b->xu == 0.5);
  CHECK(b->yl == 0.0);
  CHECK(b->yu == doctest::Approx(0.75));
  const auto right = facet_propagate(p, Box2{0.5, 1, 0, 1});
  REQUIRE(right);
  CHECK(right->yl == doctest::Approx(0.25));
  CHECK(right->yu == 1.0);

  // At the root box nothing moves: the cuts are facets of P.
  const auto root = facet_propagate(p, kUnit);
  REQUIRE(root);
  CHECK(root->xl == 0.0);
  CHECK(root->xu == 1.0);
  CHECK(root->yl == 0.0);
  CHECK(root->yu == 1.0);

  CHECK_FALSE(facet_propagate(Polytope2D(kUnit, {{1, 1, 0.5}}), Box2{0.9, 1, 0, 1}));
}

TEST_CASE("level-set candidates and bounds") {
  SUBCASE("x*y <= 1/4 on the unit box") {
    const Polytope2D p(kUnit);
    const CandidateSet cs = levelset_candidates(p, {-kInf, 0.25});
    CHECK(has_point(cs, {1, 0.25}));
    CHECK(has_point(cs, {0.25, 1}));
    CHECK_FALSE(has_point(cs, {1, 1}));
    const LevelsetResult r = levelset_bounds(p, {-kInf, 0.25});
    CHECK(r.applied);
    CHECK_FALSE(r.infeasible);
    // The band reaches every side of the box: no reduction.
    CHECK(r.box.xl == 0.0);
    CHECK(r.box.xu == 1.0);
    CHECK(r.box.yu == 1.0);
  }
  SUBCASE("x*y >= 3/4 on [1/2, 1]^2") {
    const Polytope2D p(Box2{0.5, 1, 0.5, 1});
    const LevelsetResult r = levelset_bounds(p, {0.75, kInf});
    CHECK(r.applied);
    CHECK(r.box.xl == doctest::Approx(0.75));
    CHECK(r.box.yl == doctest::Approx(0.75));
    CHECK(r.box.xu == 1.0);
    CHECK(r.box.yu == 1.0);
  }
  SUBCASE("level above the maximum") {
    const LevelsetResult r = levelset_bounds(Polytope2D(kUnit), {1.5, kInf});
    CHECK(r.applied);
    CHECK(r.infeasible);
  }
  SUBCASE("implied product bounds") {
    const LevelsetResult r = levelset_bounds(Polytope2D(kUnit), {-1, 2});
    CHECK_FALSE(r.applied);
  }
  SUBCASE("a general facet carries the crossing") {
    // On x + y <= 3/2 the band x*y >= 1/2 is cut off near (1, 1).
    const Polytope2D p(kUnit, {{1, 1, 1.5}});
    const LevelsetResult r = levelset_bounds(p, {0.5, kInf});
    CHECK(r.box.xl == doctest::Approx(0.5));
    CHECK(r.box.yl == doctest::Approx(0.5));
    CHECK(r.box.xu == 1.0);
  }
}

TEST_CASE("exact ranges agree with dense grids") {
  Rng rng(77);
  const int res = 400;
  int compared = 0;
  for (int t = 0; t < 500; ++t) {
    const Polytope2D p = random_polygon(rng);
    if (p.empty() || volume2d(p) < 1e-3) continue;
    const double slack = grid_lipschitz_slack(p, res);
    const double cx = p.box().width_x() / (res - 1);
    const double cy = p.box().width_y() / (res - 1);
    // Strict grid points lie in P. The loose grid accepts every grid point
    // within one cell of P, so each point of P has an accepted neighbour.
    const GridOptions strict{res, true, 1e-9};
    const GridOptions loose{res, true, std::sqrt(2.0) * std::max(cx, cy) / p.scale() + 1e-9};

    const Interval exact = forward_bounds(p);
    const auto grid = grid_product_range(p, strict);
    const auto wide = grid_product_range(p, loose);
    REQUIRE(grid);
    REQUIRE(wide);
    CHECK(exact.lo <= grid->lo + 1e-9);
    CHECK(exact.hi >= grid->hi - 1e-9);
    CHECK(exact.lo >= wide->lo - slack - 1e-9);
    CHECK(exact.hi <= wide->hi + slack + 1e-9);

    // A band around a random level that holds a good share of P.
    const double mid = rng.uniform(exact.lo, exact.hi);
    const double half = 0.25 * (exact.hi - exact.lo);
    const Interval band{mid - half, mid + half};
    const LevelsetResult ls = levelset_bounds(p, band);
    const auto gl = grid_levelset_range(p, band, strict);
    const auto gw = grid_levelset_range(p, {band.lo - slack, band.hi + slack}, loose);
    if (!gl) continue;
    REQUIRE(gw);
    REQUIRE_FALSE(ls.infeasible);
    const Box2& b = ls.box;
    // Sound: every strict grid point of the band is inside the reduced box.
    CHECK(b.xl <= gl->x.lo + 1e-9);
    CHECK(b.xu >= gl->x.hi - 1e-9);
    CHECK(b.yl <= gl->y.lo + 1e-9);
    CHECK(b.yu >= gl->y.hi - 1e-9);
    // Tight: no looser than the loose grid, up to one cell and the
    // minimum-improvement threshold.
    const double tx = cx + kMinImprovement * (1 + p.box().width_x()) + 1e-9;
    const double ty = cy + kMinImprovement * (1 + p.box().width_y()) + 1e-9;
    CHECK(gw->x.lo - b.xl <= tx);
    CHECK(b.xu - gw->x.hi <= tx);
    CHECK(gw->y.lo - b.yl <= ty);
    CHECK(b.yu - gw->y.hi <= ty);
    ++compared;
  }
  CHECK(compared >= 300);
}

TEST_CASE("sampled points respect the propagated bounds") {
  Rng rng(91);
  for (int t = 0; t < 100; ++t) {
    const Polytope2D p = random_polygon(rng);
    if (p.empty()) continue;
    const Interval fwd = forward_bounds(p);
    const double mid = rng.uniform(fwd.lo, fwd.hi);
    const Interval band{mid - 0.1, mid + 0.2};
    const LevelsetResult ls = levelset_bounds(p, band);
    const Box2& bx = p.box();
    int in_band = 0;
    for (int s = 0; s < 4000; ++s) {
      const Point2 q{rng.uniform(bx.xl, bx.xu), rng.uniform(bx.yl, bx.yu)};
      if (!p.contains(q, 0.0)) continue;
      const double v = q.x * q.y;
      CHECK(v >= fwd.lo - 1e-12);
      CHECK(v <= fwd.hi + 1e-12);
      if (v < band.lo || v > band.hi) continue;
      ++in_band;
      CHECK_FALSE(ls.infeasible);
      CHECK(q.x >= ls.box.xl - 1e-12);
      CHECK(q.x <= ls.box.xu + 1e-12);
      CHECK(q.y >= ls.box.yl - 1e-12);
      CHECK(q.y <= ls.box.yu + 1e-12);
    }
    (void)in_band;
  }
}

TEST_CASE("improvement threshold") {
  double lb = 0.0;
  CHECK_FALSE(tighten_lower(lb, 1e-7, 1.0));
  CHECK(lb == 0.0);
  CHECK(tighten_lower(lb, 1e-3, 1.0));
  CHECK(lb == 1e-3);
  double ub = 1.0;
  CHECK_FALSE(tighten_upper(ub, 1.5, 1.0));
  CHECK(tighten_upper(ub, 0.5, 1.0));
  CHECK(ub == 0.5);
}

TEST_CASE("interval propagation of linear rows") {
  SUBCASE("x + y <= 1 with x >= 0.4") {
    std::vector<double> lb = {0.4, 0.0}, ub = {1.0, 1.0};
    const FbbtResult r = fbbt_rows({LinRow{{{0, 1}, {1, 1}}, 1.0}}, lb, ub);
    CHECK_FALSE(r.infeasible);
    CHECK(ub[0] == 1.0);
    CHECK(ub[1] == doctest::Approx(0.6));
    CHECK(r.tightenings == 1);
  }
  SUBCASE("chains through two rows") {
    // x - y <= 0 and y <= 0.3 give x <= 0.3.
    std::vector<double> lb = {0.0, 0.0}, ub = {1.0, 1.0};
    const std::vector<LinRow> rows = {LinRow{{{0, 1}, {1, -1}}, 0.0}, LinRow{{{1, 1}}, 0.3}};
    fbbt_rows(rows, lb, ub);
    CHECK(ub[1] == doctest::Approx(0.3));
    CHECK(ub[0] == doctest::Approx(0.3));
  }
  SUBCASE("infeasible") {
    std::vector<double> lb = {0.8, 0.8}, ub = {1.0, 1.0};
    CHECK(fbbt_rows({LinRow{{{0, 1}, {1, 1}}, 1.0}}, lb, ub).infeasible);
  }
  SUBCASE("one unbounded column") {
    std::vector<double> lb = {-kInf, 0.0}, ub = {kInf, 1.0};
    fbbt_rows({LinRow{{{0, 1}, {1, 1}}, 1.0}}, lb, ub);
    CHECK(ub[0] == doctest::Approx(1.0));
    CHECK(ub[1] == 1.0);
  }
}
