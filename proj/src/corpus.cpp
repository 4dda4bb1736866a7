#include "bilin/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace bilin {

namespace {

// Rounds to a short decimal so generated documents stay readable.
double tidy(double v) { return std::round(v * 1e4) / 1e4; }

QuadConstraint empty_row(int n) {
  QuadConstraint c;
  c.lin.assign(n, 0.0);
  return c;
}

}  // namespace

Miqcp pointpack(int k, std::uint64_t seed) {
  Rng rng(seed);
  Miqcp p;
  p.n = 2 * k;
  p.lb.assign(p.n, 0.0);
  p.ub.assign(p.n, 1.0);
  // Costs of one sign per axis pull every point toward the same corner, so
  // the distance rows bind.
  p.c.resize(p.n);
  const double sx = rng.unit() < 0.5 ? -1.0 : 1.0;
  const double sy = rng.unit() < 0.5 ? -1.0 : 1.0;
  for (int v = 0; v < p.n; ++v) p.c[v] = tidy((v % 2 == 0 ? sx : sy) * rng.uniform(0.2, 1.0));
  // Points spread along the diagonal are at distance sqrt(2)/(k-1), so any
  // d^2 below 2/(k-1)^2 keeps the instance feasible.
  const double spread = k > 1 ? 2.0 / ((k - 1) * (k - 1)) : 1.0;
  const double d2 = tidy(std::min(1.0, spread) * rng.uniform(0.2, 0.6));
  auto xv = [](int a) { return 2 * a; };
  auto yv = [](int a) { return 2 * a + 1; };
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      // -(x_a - x_b)^2 - (y_a - y_b)^2 <= -d^2
      QuadConstraint c = empty_row(p.n);
      c.quad = {{xv(a), xv(a), -1.0}, {xv(a), xv(b), 2.0}, {xv(b), xv(b), -1.0},
                {yv(a), yv(a), -1.0}, {yv(a), yv(b), 2.0}, {yv(b), yv(b), -1.0}};
      std::sort(c.quad.begin(), c.quad.end(), [](const QuadTerm& l, const QuadTerm& r) {
        return std::tie(l.i, l.j) < std::tie(r.i, r.j);
      });
      c.rhs = -d2;
      p.constraints.push_back(std::move(c));
    }
  }
  for (int a = 0; a + 1 < k; ++a) {
    QuadConstraint c = empty_row(p.n);
    c.lin[xv(a)] = 1.0;
    c.lin[xv(a + 1)] = -1.0;
    p.constraints.push_back(std::move(c));
  }
  validate(p);
  return p;
}

Miqcp ordering_instance(std::uint64_t seed) {
  Rng rng(seed);
  // Columns: x_a, x_b, s1, s2, w1, w2, w3, t (objective epigraph).
  enum { xa, xb, s1, s2, w1, w2, w3, t, count };
  Miqcp p;
  p.n = count;
  const double cap = tidy(rng.uniform(20.0, 60.0));
  p.lb.assign(p.n, 0.0);
  p.ub.assign(p.n, cap);
  p.c.assign(p.n, 0.0);
  p.c[t] = 1.0;

  QuadConstraint r1 = empty_row(p.n);  // s1 + s2 + x_a <= cap
  r1.lin[s1] = r1.lin[s2] = r1.lin[xa] = 1.0;
  r1.rhs = cap;
  p.constraints.push_back(r1);
  QuadConstraint r2 = empty_row(p.n);  // -x_b + w1 + w2 + w3 = 0
  r2.lin[xb] = -1.0;
  r2.lin[w1] = r2.lin[w2] = r2.lin[w3] = 1.0;
  p.constraints.push_back(r2);
  for (double& v : r2.lin) v = -v;
  p.constraints.push_back(r2);
  QuadConstraint r3 = empty_row(p.n);  // s1 + s2 + w3 = cap
  r3.lin[s1] = r3.lin[s2] = r3.lin[w3] = 1.0;
  r3.rhs = cap;
  p.constraints.push_back(r3);
  for (double& v : r3.lin) v = -v;
  r3.rhs = -cap;
  p.constraints.push_back(r3);

  // Quality row: x_a * x_b <= q cap^2 + small linear terms.
  QuadConstraint quality = empty_row(p.n);
  quality.quad = {{xa, xb, 1.0}};
  quality.lin[w1] = tidy(rng.uniform(-0.5, 0.5)) * cap;
  quality.lin[w2] = tidy(rng.uniform(-0.5, 0.5)) * cap;
  quality.rhs = tidy(rng.uniform(0.3, 0.8)) * cap * cap;
  p.constraints.push_back(quality);

  // x_a x_b - c_a x_a - c_b x_b + small costs - t <= 0, minimize t.
  // c_a > c_b rewards x_a above x_b, against the implied ordering.
  const double ca = tidy(rng.uniform(0.5, 0.8)) * cap;
  const double cb = tidy(rng.uniform(0.2, 0.45)) * cap;
  QuadConstraint epi = empty_row(p.n);
  epi.quad = {{xa, xb, 1.0}};
  epi.lin[xa] = -ca;
  epi.lin[xb] = -cb;
  epi.lin[s1] = tidy(rng.uniform(0.0, 0.2)) * cap;
  epi.lin[s2] = tidy(rng.uniform(0.0, 0.2)) * cap;
  epi.lin[w1] = tidy(rng.uniform(0.0, 0.2)) * cap;
  epi.lin[t] = -1.0;
  p.constraints.push_back(epi);
  // t ranges over the interval enclosure of the objective expression.
  p.lb[t] = -(ca + cb) * cap;
  p.ub[t] = cap * cap + 0.6 * cap * cap;
  validate(p);
  return p;
}

Miqcp random_miqcp(const RandomParams& params) {
  Rng rng(params.seed);
  Miqcp p;
  p.n = params.n;
  p.lb.resize(p.n);
  p.ub.resize(p.n);
  std::vector<double> x0(p.n);
  for (int i = 0; i < p.n; ++i) {
    if (i < params.integers) {
      p.lb[i] = -rng.integer(0, 2);
      p.ub[i] = rng.integer(1, 3);
      p.int_set.push_back(i);
      x0[i] = rng.integer(static_cast<int>(p.lb[i]), static_cast<int>(p.ub[i]));
    } else {
      p.lb[i] = tidy(-rng.uniform(0.0, 2.0));
      p.ub[i] = tidy(rng.uniform(0.5, 2.0));
      x0[i] = p.lb[i] + (p.ub[i] - p.lb[i]) * rng.uniform(0.2, 0.8);
    }
  }
  p.c.resize(p.n);
  for (double& c : p.c) c = tidy(rng.uniform(-1.0, 1.0));
  for (int k = 0; k < params.m; ++k) {
    QuadConstraint c = empty_row(p.n);
    for (int i = 0; i < p.n; ++i) {
      for (int j = i; j < p.n; ++j) {
        const double prob = i == j ? 0.5 * params.density : params.density;
        if (rng.unit() >= prob) continue;
        const double mag = rng.uniform(0.5, 1.5);
        const double v = tidy(rng.unit() < 0.5 ? -mag : mag);
        if (v != 0.0) c.quad.push_back({i, j, v});
      }
    }
    for (double& v : c.lin) v = tidy(rng.uniform(-1.0, 1.0));
    c.rhs = tidy(c.evaluate(x0) + rng.uniform(0.1, 1.0));
    p.constraints.push_back(std::move(c));
  }
  validate(p);
  return p;
}

}  // namespace bilin
