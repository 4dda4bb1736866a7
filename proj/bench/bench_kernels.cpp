// Wall-clock comparison of the serial and OpenMP versions of the batch
// kernels on a generated instance. Prints one line per kernel and checks
// that both versions agree.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include <omp.h>

#include "bilin/corpus.hpp"
#include "bilin/lp.hpp"
#include "bilin/model.hpp"
#include "bilin/oracle.hpp"
#include "bilin/projection.hpp"

using namespace bilin;

namespace {

double time_ms(const std::function<void()>& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < reps; ++k) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

bool same_polytopes(const ProjectionBatch& a, const ProjectionBatch& b) {
  if (a.projections.size() != b.projections.size()) return false;
  for (std::size_t k = 0; k < a.projections.size(); ++k) {
    const auto& ca = a.projections[k].poly.cuts();
    const auto& cb = b.projections[k].poly.cuts();
    if (ca.size() != cb.size()) return false;
    for (std::size_t c = 0; c < ca.size(); ++c) {
      if (ca[c].gx != cb[c].gx || ca[c].gy != cb[c].gy || ca[c].g0 != cb[c].g0) return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int points = argc > 1 ? std::atoi(argv[1]) : 6;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  std::printf("threads: %d\n", omp_get_max_threads());

  const ExtendedForm e = build_extended(pointpack(points, 7));
  const std::vector<BilinearTerm> terms = collect_terms(e);
  const LinRelax r = build_relaxation(e);

  ProjectionBatch serial, parallel;
  const double ts = time_ms([&] {
    FilterSet f;
    serial = project_all_snapshot_serial(r, terms, f);
  }, reps);
  const double tp = time_ms([&] {
    FilterSet f;
    parallel = project_all_snapshot_parallel(r, terms, f);
  }, reps);
  std::printf("projection batch (%zu terms): serial %.2f ms, parallel %.2f ms, agree %s\n",
              terms.size(), ts, tp, same_polytopes(serial, parallel) ? "yes" : "NO");

  const BilinearTerm t = terms.front();
  Polytope2D os, op;
  const double tos = time_ms([&] { os = exact_projection_oracle(r, t.i, t.j, {false}); }, reps);
  const double top = time_ms([&] { op = exact_projection_oracle(r, t.i, t.j, {true}); }, reps);
  std::printf("exact projection oracle: serial %.2f ms, parallel %.2f ms, agree %s\n", tos, top,
              volume2d(os) == volume2d(op) ? "yes" : "NO");

  const Polytope2D p(Box2{-1, 1, -1, 2}, {{1, 1, 2}, {-1, 1, 1.5}});
  std::optional<Interval> gs, gp;
  const double tgs = time_ms([&] { gs = grid_product_range(p, {1000, false}); }, reps);
  const double tgp = time_ms([&] { gp = grid_product_range(p, {1000, true}); }, reps);
  std::printf("grid product range: serial %.2f ms, parallel %.2f ms, agree %s\n", tgs, tgp,
              gs && gp && gs->lo == gp->lo && gs->hi == gp->hi ? "yes" : "NO");

  std::optional<BoxRange> ls, lp;
  const double tls = time_ms([&] { ls = grid_levelset_range(p, {0.25, 1.0}, {1000, false}); }, reps);
  const double tlp = time_ms([&] { lp = grid_levelset_range(p, {0.25, 1.0}, {1000, true}); }, reps);
  std::printf("grid levelset range: serial %.2f ms, parallel %.2f ms, agree %s\n", tls, tlp,
              ls && lp && ls->x.lo == lp->x.lo && ls->y.hi == lp->y.hi ? "yes" : "NO");
  return 0;
}
