#include "bilin/obbt.hpp"

#include <algorithm>
#include <cmath>

namespace bilin {

void FilterSet::insert(const Entry& e) {
  // Later witnesses replace earlier ones recorded against older bounds.
  entries_.erase(e);
  entries_.insert(e);
}

bool FilterSet::contains(int i, int j, double vertex_i, double vertex_j,
                         double tol) const {
  for (BoundSide si : {BoundSide::lower, BoundSide::upper}) {
    for (BoundSide sj : {BoundSide::lower, BoundSide::upper}) {
      const auto it = entries_.find(Entry{i, j, si, sj, 0.0, 0.0});
      if (it == entries_.end()) continue;
      const double si_scale = 1.0 + std::abs(vertex_i);
      const double sj_scale = 1.0 + std::abs(vertex_j);
      if (std::abs(it->value_i - vertex_i) <= tol * si_scale &&
          std::abs(it->value_j - vertex_j) <= tol * sj_scale) {
        return true;
      }
    }
  }
  return false;
}

void FilterSet::merge(const FilterSet& other) {
  for (const Entry& e : other.entries_) insert(e);
}

ObbtResult obbt_variable(LinRelax& r, int i, LpEngine& engine) {
  ObbtResult res;
  const std::int64_t before = engine.total_iterations();
  LinearObjective obj{{{i, 1.0}}, Sense::minimize};
  const PrimalDualSolution lo = engine.solve(r, obj);
  if (!lo.optimal()) {
    res.infeasible = true;
    res.iterations = engine.total_iterations() - before;
    return res;
  }
  obj.sense = Sense::maximize;
  const PrimalDualSolution hi = engine.solve(r, obj);
  if (!hi.optimal()) {
    res.infeasible = true;
    res.iterations = engine.total_iterations() - before;
    return res;
  }
  res.new_lb = std::max(r.col_lb[i], lo.obj);
  res.new_ub = std::min(r.col_ub[i], hi.obj);
  if (res.new_lb > res.new_ub) {
    // Roundoff on a fixed column: collapse to the midpoint.
    const double mid = 0.5 * (res.new_lb + res.new_ub);
    res.new_lb = res.new_ub = mid;
  }
  r.col_lb[i] = res.new_lb;
  r.col_ub[i] = res.new_ub;
  res.min_point = lo.z;
  res.max_point = hi.z;
  res.iterations = engine.total_iterations() - before;
  return res;
}

namespace {

std::optional<BoundSide> snap(double v, double lb, double ub, double tol) {
  if (std::abs(v - lb) <= tol * (1.0 + std::abs(lb))) return BoundSide::lower;
  if (std::abs(v - ub) <= tol * (1.0 + std::abs(ub))) return BoundSide::upper;
  return std::nullopt;
}

}  // namespace

void update_filter(FilterSet& f, const std::vector<double>& sol,
                   const std::vector<BilinearTerm>& terms,
                   const std::vector<double>& lb, const std::vector<double>& ub,
                   double feas_tol) {
  for (const BilinearTerm& t : terms) {
    const auto si = snap(sol[t.i], lb[t.i], ub[t.i], feas_tol);
    if (!si) continue;
    const auto sj = snap(sol[t.j], lb[t.j], ub[t.j], feas_tol);
    if (!sj) continue;
    f.insert({t.i, t.j, *si, *sj,
              *si == BoundSide::lower ? lb[t.i] : ub[t.i],
              *sj == BoundSide::lower ? lb[t.j] : ub[t.j]});
  }
}

bool is_filtered(const FilterSet& f, int i, int j, double vertex_i,
                 double vertex_j) {
  return f.contains(i, j, vertex_i, vertex_j);
}

}  // namespace bilin
