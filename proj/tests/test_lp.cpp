#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bilin/corpus.hpp"
#include "bilin/lp.hpp"
#include "oracles.hpp"

using namespace bilin;

namespace {

// Largest under-row value and smallest over-row value at (x, y): the
// McCormick interval for X.
std::pair<double, double> mccormick_interval(const std::vector<LinRow>& rows, double x,
                                             double y) {
  double lo = -1e300;
  double hi = 1e300;
  for (const LinRow& r : rows) {
    double ax = 0.0;
    double slot = 0.0;
    for (const auto& [c, v] : r.coeffs) {
      if (c == 0) ax += v * x;
      if (c == 1) ax += v * y;
      if (c == 2) slot = v;
    }
    // ax + slot * X <= rhs
    const double bound = (r.rhs - ax) / slot;
    if (slot < 0) lo = std::max(lo, bound);
    if (slot > 0) hi = std::min(hi, bound);
  }
  return {lo, hi};
}

LinRow row(SparseVec coeffs, double rhs) { return LinRow{std::move(coeffs), rhs}; }

}  // namespace

TEST_CASE("McCormick rows on the unit box") {
  const auto rows = mccormick_rows(0, 1, 2, 0, 1, 0, 1);
  REQUIRE(rows.size() == 4);
  // x + y - X <= 1, -X <= 0, -x + X <= 0, -y + X <= 0
  CHECK(rows[0].rhs == 1.0);
  CHECK(rows[1].rhs == 0.0);
  CHECK(mccormick_interval(rows, 0.5, 0.5).first == doctest::Approx(0.0));
  CHECK(mccormick_interval(rows, 0.5, 0.5).second == doctest::Approx(0.5));
  CHECK(mccormick_interval(rows, 0.9, 0.8).first == doctest::Approx(0.7));
  CHECK(mccormick_interval(rows, 0.9, 0.8).second == doctest::Approx(0.8));
  for (const LinRow& r : rows) CHECK(r.origin == RowOrigin::mccormick);
}

TEST_CASE("McCormick rows on a mixed-sign box") {
  const auto rows = mccormick_rows(0, 1, 2, -1, 1, -1, 2);
  // At (-1, -1): 2(-1) + 1(-1) - 2 = -5 and (-1)(-1) + (-1)(-1) - 1 = 1.
  CHECK(mccormick_interval(rows, -1, -1).first == doctest::Approx(1.0));
  // Each row is tight at two box corners.
  for (double x : {-1.0, 1.0}) {
    for (double y : {-1.0, 2.0}) {
      const auto [lo, hi] = mccormick_interval(rows, x, y);
      CHECK(lo == doctest::Approx(x * y));
      CHECK(hi == doctest::Approx(x * y));
    }
  }
}

TEST_CASE("McCormick rows on a degenerate box") {
  const auto rows = mccormick_rows(0, 1, 2, 0.5, 0.5, 0, 1);
  for (double y : {0.0, 0.3, 0.77, 1.0}) {
    const auto [lo, hi] = mccormick_interval(rows, 0.5, y);
    CHECK(lo == doctest::Approx(0.5 * y).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.5 * y).epsilon(1e-12));
  }
}

TEST_CASE("square rows bracket x^2") {
  const auto rows = square_rows(0, 1, -1.0, 2.0);
  CHECK(rows.size() == 4);
  for (double x = -1.0; x <= 2.0; x += 0.25) {
    for (const LinRow& r : rows) {
      double ax = 0.0;
      double slot = 0.0;
      for (const auto& [c, v] : r.coeffs) (c == 0 ? ax : slot) += v * (c == 0 ? x : 1.0);
      CHECK(ax + slot * x * x <= r.rhs + 1e-12);
    }
  }
}

TEST_CASE("relaxation contents") {
  SUBCASE("single product row") {
    const Miqcp p = parse_problem(R"({"n":2,"c":[1,1],"lb":[0,0],"ub":[1,1],
      "cons":[{"Q":[[0,1,1]],"q":[0,0],"b":1}]})");
    const LinRelax r = build_relaxation(build_extended(p));
    REQUIRE(r.rows.size() == 5);
    CHECK(r.rows[0].origin == RowOrigin::linearized);
    CHECK(std::count_if(r.rows.begin(), r.rows.end(), [](const LinRow& w) {
            return w.origin == RowOrigin::mccormick;
          }) == 4);
    CHECK(r.col_lb[2] == 0.0);
    CHECK(r.col_ub[2] == 1.0);
  }
  SUBCASE("ordering fixture keeps x <= y and no square rows") {
    const Miqcp p = parse_problem(R"({"n":2,"c":[0,0],"lb":[0,0],"ub":[1,1],
      "cons":[{"Q":[[0,1,1]],"q":[0,0],"b":1},{"q":[1,-1],"b":0}]})");
    const LinRelax r = build_relaxation(build_extended(p));
    bool has_order = false;
    for (const LinRow& w : r.rows) {
      CHECK(w.origin != RowOrigin::secant);
      CHECK(w.origin != RowOrigin::gradient);
      if (w.origin == RowOrigin::original_linear && w.coeffs.size() == 2 &&
          w.coeffs[0].second == 1.0 && w.coeffs[1].second == -1.0 && w.rhs == 0.0) {
        has_order = true;
      }
    }
    CHECK(has_order);
  }
  SUBCASE("two-circle fragment") {
    const Miqcp p = parse_problem(R"({"n":4,"c":[0,0,0,0],"lb":[0,0,0,0],"ub":[1,1,1,1],
      "cons":[{"Q":[[0,0,1],[0,1,-2],[1,1,1],[2,2,1],[2,3,-2],[3,3,1]],"q":[0,0,0,0],"b":0.3,"sense":"ge"},
              {"q":[1,-1,0,0],"b":0}]})");
    const LinRelax r = build_relaxation(build_extended(p));
    int mc = 0, lin = 0, sq = 0;
    for (const LinRow& w : r.rows) {
      mc += w.origin == RowOrigin::mccormick;
      lin += w.origin == RowOrigin::original_linear;
      sq += w.origin == RowOrigin::secant;
    }
    CHECK(mc == 8);
    CHECK(lin == 1);
    CHECK(sq == 4);
  }
}

TEST_CASE("relaxation is valid for feasible points") {
  Rng rng(5);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    RandomParams rp;
    rp.n = 5;
    rp.m = 3;
    rp.seed = seed;
    const Miqcp p = random_miqcp(rp);
    const ExtendedForm e = build_extended(p);
    const LinRelax r = build_relaxation(e);
    int tested = 0;
    for (int s = 0; s < 2000 && tested < 100; ++s) {
      std::vector<double> x(p.n);
      for (int i = 0; i < p.n; ++i) x[i] = rng.uniform(p.lb[i], p.ub[i]);
      if (p.max_violation(x) > 0.0) continue;
      ++tested;
      std::vector<double> z = x;
      const auto lifted = e.lift(x);
      z.insert(z.end(), lifted.begin(), lifted.end());
      CHECK(r.max_violation(z) <= 1e-9);
    }
    CHECK(tested > 0);
  }
}

TEST_CASE("LP solves from the worked example") {
  SUBCASE("maximum of X under McCormick and x + y <= 3/2") {
    auto rows = mccormick_rows(0, 1, 2, 0, 1, 0, 1);
    rows.push_back(row({{0, 1}, {1, 1}}, 1.5));
    const LinRelax r = oracle::toy_relax(0, 1, 0, 1, rows);
    LpEngine engine;
    const auto sol = engine.solve(r, LinearObjective{{{2, 1.0}}, Sense::maximize});
    REQUIRE(sol.optimal());
    CHECK(std::abs(sol.obj - 0.75) <= 1e-9);
  }
  SUBCASE("minimum of x over the box") {
    const LinRelax r = oracle::toy_relax(0, 1, 0, 1, {});
    LpEngine engine;
    const auto sol = engine.solve(r, LinearObjective{{{0, 1.0}}, Sense::minimize});
    REQUIRE(sol.optimal());
    CHECK(sol.obj == 0.0);
    CHECK(sol.bound_lb_dual[0] == doctest::Approx(1.0));
  }
  SUBCASE("maximum of x + y with the row active") {
    const LinRelax r = oracle::toy_relax(0, 1, 0, 1, {row({{0, 1}, {1, 1}}, 1.5)});
    LpEngine engine;
    const LinearObjective obj{{{0, 1.0}, {1, 1.0}}, Sense::maximize};
    const auto sol = engine.solve(r, obj);
    REQUIRE(sol.optimal());
    CHECK(sol.obj == doctest::Approx(1.5));
    // -1 + lambda = 0 for the coordinate strictly inside its bounds.
    CHECK(sol.lambda[0] == doctest::Approx(1.0));
    const KktReport k = kkt_report(r, obj, std::nullopt, sol);
    CHECK(k.stationarity <= 1e-9);
    CHECK(k.duality_gap <= 1e-9);
  }
  SUBCASE("infeasible rows") {
    const LinRelax r = oracle::toy_relax(0, 1, 0, 1, {row({{0, -1}}, -0.8), row({{0, 1}}, 0.2)});
    LpEngine engine;
    const auto sol = engine.solve(r, LinearObjective{{{0, 1.0}}, Sense::minimize});
    CHECK(sol.status == LpStatus::infeasible);
  }
  SUBCASE("equality row multiplier") {
    // max x s.t. x - y = 0 over [0,1] x [0,0.4]: optimum 0.4, mu = -1.
    const LinRelax r = oracle::toy_relax(0, 1, 0, 0.4, {});
    LpEngine engine;
    const LinearObjective obj{{{0, 1.0}}, Sense::maximize};
    const EqualityRow eq{{{0, 1.0}, {1, -1.0}}, 0.0};
    const auto sol = engine.solve(r, obj, eq);
    REQUIRE(sol.optimal());
    CHECK(sol.obj == doctest::Approx(0.4));
    CHECK(std::abs(sol.mu) == doctest::Approx(1.0));
    CHECK(kkt_report(r, obj, eq, sol).stationarity <= 1e-9);
  }
}

TEST_CASE("KKT audit, duality and aggregation on random relaxations") {
  Rng rng(11);
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    RandomParams rp;
    rp.n = 5;
    rp.m = 3;
    rp.density = 0.6;
    rp.seed = seed;
    const LinRelax r = build_relaxation(build_extended(random_miqcp(rp)));
    LinearObjective obj;
    for (int c = 0; c < r.num_cols(); ++c) obj.coeffs.push_back({c, rng.uniform(-1, 1)});
    obj.sense = seed % 2 ? Sense::minimize : Sense::maximize;
    LpEngine engine;
    const auto sol = engine.solve(r, obj);
    REQUIRE(sol.optimal());
    const KktReport k = kkt_report(r, obj, std::nullopt, sol);
    CHECK(k.primal_infeasibility <= 1e-7);
    CHECK(k.stationarity <= 1e-6);
    CHECK(k.complementarity <= 1e-6);
    CHECK(std::abs(sol.obj - k.dual_objective) <= 1e-7 * (1.0 + std::abs(sol.obj)));
    for (double l : sol.lambda) CHECK(l >= 0.0);

    // Determinism.
    LpEngine again;
    const auto sol2 = again.solve(r, obj);
    CHECK(sol2.basis == sol.basis);
    CHECK(sol2.z == sol.z);

    if (seed <= 3) {
      double agg_rhs = 0.0;
      for (std::size_t k2 = 0; k2 < r.rows.size(); ++k2) agg_rhs += sol.lambda[k2] * r.rows[k2].rhs;
      oracle::HitAndRun sampler(r, seed);
      REQUIRE(sampler.ok());
      int bad = 0;
      for (int s = 0; s < 10000; ++s) {
        const auto& z = sampler.next();
        double agg = 0.0;
        for (std::size_t k2 = 0; k2 < r.rows.size(); ++k2) agg += sol.lambda[k2] * r.rows[k2].activity(z);
        if (agg > agg_rhs + 1e-9 * (1.0 + std::abs(agg_rhs))) ++bad;
      }
      CHECK(bad == 0);
    }
  }
}
