#include "bilin/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

#include "bilin/envelope.hpp"
#include "bilin/propagation.hpp"

namespace bilin {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::limit: return "limit";
  }
  return "unknown";
}

double gap_closed(double p, double d1, double d2) {
  const double tol = 1e-9 * (1.0 + std::abs(p));
  if (d1 > p + tol || d2 > p + tol) {
    throw std::invalid_argument("dual bound exceeds primal bound");
  }
  if (std::abs(d1 - d2) <= tol) return 0.0;
  if (d1 > d2) return 1.0 - std::max(p - d1, 0.0) / (p - d2);
  return -1.0 + std::max(p - d2, 0.0) / (p - d1);
}

double effectiveness(const std::vector<BilinearTerm>& terms,
                     const std::vector<int>& phi) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    den += terms[k].occurrences;
    if (k < phi.size() && phi[k] != 0) num += terms[k].occurrences;
  }
  return den > 0.0 ? num / den : 0.0;
}

std::optional<BranchDecision> choose_branch(
    const ExtendedForm& e, const std::vector<BilinearTerm>& terms,
    const std::vector<double>& z, const std::vector<double>& x_lb,
    const std::vector<double>& x_ub, double viol_tol, double int_tol) {
  const Miqcp& p = e.base();
  // Fractional integer variables first, most fractional wins.
  int best_int = -1;
  double best_frac = int_tol;
  for (int i : p.int_set) {
    const double f = z[i] - std::floor(z[i]);
    const double frac = std::min(f, 1.0 - f);
    if (frac > best_frac && x_ub[i] - x_lb[i] >= 1.0) {
      best_frac = frac;
      best_int = i;
    }
  }
  if (best_int >= 0) {
    BranchDecision d;
    d.var = best_int;
    d.point = z[best_int];
    d.integer = true;
    d.down_ub = std::floor(z[best_int]);
    d.up_lb = d.down_ub + 1.0;
    return d;
  }

  // Product slots in priority order: collected terms, then the rest.
  std::vector<int> order;
  std::vector<char> seen(e.num_slots(), 0);
  for (const BilinearTerm& t : terms) {
    order.push_back(t.slot);
    seen[t.slot] = 1;
  }
  for (int s = 0; s < e.num_slots(); ++s) {
    if (!seen[s]) order.push_back(s);
  }
  auto branchable = [&](int v) {
    const double w = x_ub[v] - x_lb[v];
    if (p.is_integer(v)) return w >= 1.0;
    return w > 1e-9 * (1.0 + std::abs(x_ub[v]));
  };
  int best_slot = -1;
  double best_viol = 0.0;
  for (int s : order) {
    const Slot& sl = e.slots()[s];
    const double prod = z[sl.i] * z[sl.j];
    const double viol = std::abs(z[e.column_of_slot(s)] - prod);
    if (viol <= viol_tol * (1.0 + std::abs(prod))) continue;
    if (!branchable(sl.i) && !branchable(sl.j)) continue;
    if (viol > best_viol) {
      best_viol = viol;
      best_slot = s;
    }
  }
  if (best_slot < 0) return std::nullopt;

  const Slot& sl = e.slots()[best_slot];
  BranchDecision best;
  double best_score = -1.0;
  for (int v : {sl.i, sl.j}) {
    if (!branchable(v)) continue;
    const int other = v == sl.i ? sl.j : sl.i;
    const double l = x_lb[v];
    const double u = x_ub[v];
    const double w = u - l;
    const double pt = std::clamp(z[v], l + 0.1 * w, u - 0.1 * w);
    // Reduction of the largest McCormick error w_v * w_other / 4.
    const double score =
        (x_ub[other] - x_lb[other]) / 4.0 * std::min(pt - l, u - pt);
    if (score > best_score) {
      best_score = score;
      best.var = v;
      best.point = pt;
      best.integer = p.is_integer(v);
      if (best.integer) {
        best.down_ub = std::floor(pt);
        if (best.down_ub >= u) best.down_ub = u - 1.0;
        best.up_lb = best.down_ub + 1.0;
      } else {
        best.down_ub = pt;
        best.up_lb = pt;
      }
    }
  }
  if (best.var < 0) return std::nullopt;
  return best;
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct NodeData {
  std::vector<double> lb;  // combined (x, slot) columns
  std::vector<double> ub;
  double bound = -kInf;
  int depth = 0;
  std::int64_t id = 0;
  std::vector<LinRow> local_cuts;
};

struct NodeOrder {
  bool operator()(const NodeData& a, const NodeData& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

struct AuditCut {
  LinRow row;
  int i;
  int j;
  Box2 box;
};

}  // namespace

struct Solver::Impl {
  const ExtendedForm& e;
  const std::vector<BilinearTerm>& terms;
  const SolverOptions& o;
  LpEngine engine;
  std::vector<LinRow> base;
  LinearObjective obj;
  std::vector<Polytope2D> polys;  // per term, used by propagation/separation
  RootInfo root;
  double upper = kInf;
  std::vector<double> incumbent;
  std::int64_t lp_failures = 0;
  int node_tangent_cuts = 0;
  std::vector<AuditCut> audit;

  Impl(const ExtendedForm& ef, const std::vector<BilinearTerm>& t,
       const SolverOptions& opts)
      : e(ef), terms(t), o(opts), engine(opts.lp), base(base_rows(ef)) {
    for (int k = 0; k < e.num_vars(); ++k) {
      if (e.base().c[k] != 0.0) obj.coeffs.emplace_back(k, e.base().c[k]);
    }
  }

  int n() const { return e.num_vars(); }
  int slot_col(const BilinearTerm& t) const { return e.column_of_slot(t.slot); }

  double gap() const {
    return std::max(o.abs_gap, o.rel_gap * std::abs(upper));
  }

  void round_integer_bounds(std::vector<double>& lb, std::vector<double>& ub) const {
    for (int i : e.base().int_set) {
      lb[i] = std::ceil(lb[i] - o.int_tol);
      ub[i] = std::floor(ub[i] + o.int_tol);
    }
  }

  std::optional<LinRow> cutoff_row() const {
    if (!std::isfinite(upper) || obj.coeffs.empty()) return std::nullopt;
    return LinRow{obj.coeffs, upper, RowOrigin::cutoff};
  }

  // Relaxation over the combined bounds plus root cuts, local cuts and the
  // objective cutoff.
  LinRelax make_relax(const std::vector<double>& lb, const std::vector<double>& ub,
                      const std::vector<LinRow>& local) const {
    const std::vector<double> xl(lb.begin(), lb.begin() + n());
    const std::vector<double> xu(ub.begin(), ub.begin() + n());
    const std::vector<double> sl(lb.begin() + n(), lb.end());
    const std::vector<double> su(ub.begin() + n(), ub.end());
    LinRelax r = build_relaxation(e, xl, xu, &sl, &su);
    r.rows.insert(r.rows.end(), root.cuts.begin(), root.cuts.end());
    r.rows.insert(r.rows.end(), local.begin(), local.end());
    if (auto c = cutoff_row()) r.rows.push_back(*c);
    return r;
  }

  static bool crossed(const std::vector<double>& lb, const std::vector<double>& ub) {
    for (std::size_t k = 0; k < lb.size(); ++k) {
      if (lb[k] > ub[k] + 1e-7 * (1.0 + std::abs(ub[k]))) return true;
    }
    return false;
  }

  static void uncross(std::vector<double>& lb, std::vector<double>& ub) {
    for (std::size_t k = 0; k < lb.size(); ++k) {
      if (lb[k] > ub[k]) lb[k] = ub[k] = 0.5 * (lb[k] + ub[k]);
    }
  }

  struct PropResult {
    bool infeasible = false;
    bool changed = false;
  };

  // Facet, forward and level-set propagation over every term's polygon.
  PropResult propagate(std::vector<double>& lb, std::vector<double>& ub) const {
    PropResult res;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const BilinearTerm& t = terms[k];
      const Polytope2D& P = polys[k];
      Box2 box{lb[t.i], ub[t.i], lb[t.j], ub[t.j]};
      const double wi = box.width_x();
      const double wj = box.width_y();
      if (!P.cuts().empty()) {
        const auto fb = facet_propagate(P, box);
        if (!fb) {
          res.infeasible = true;
          return res;
        }
        res.changed |= tighten_lower(lb[t.i], fb->xl, wi);
        res.changed |= tighten_upper(ub[t.i], fb->xu, wi);
        res.changed |= tighten_lower(lb[t.j], fb->yl, wj);
        res.changed |= tighten_upper(ub[t.j], fb->yu, wj);
        box = {lb[t.i], ub[t.i], lb[t.j], ub[t.j]};
      }
      const Polytope2D local = P.restricted(box);
      if (local.empty()) {
        res.infeasible = true;
        return res;
      }
      const int col = slot_col(t);
      const double wx = ub[col] - lb[col];
      const Interval fwd = forward_bounds(local);
      res.changed |= tighten_lower(lb[col], fwd.lo, wx);
      res.changed |= tighten_upper(ub[col], fwd.hi, wx);
      if (lb[col] > ub[col] + 1e-7 * (1.0 + std::abs(ub[col]))) {
        res.infeasible = true;
        return res;
      }
      const LevelsetResult ls = levelset_bounds(local, {lb[col], ub[col]});
      if (ls.infeasible) {
        res.infeasible = true;
        return res;
      }
      if (ls.applied) {
        res.changed |= tighten_lower(lb[t.i], ls.box.xl, wi);
        res.changed |= tighten_upper(ub[t.i], ls.box.xu, wi);
        res.changed |= tighten_lower(lb[t.j], ls.box.yl, wj);
        res.changed |= tighten_upper(ub[t.j], ls.box.yu, wj);
      }
      if (crossed(lb, ub)) {
        res.infeasible = true;
        return res;
      }
      uncross(lb, ub);
    }
    return res;
  }

  // Linear-row FBBT, integer rounding and (optionally) polygon propagation
  // to a fixed point. False when the box is empty.
  bool tighten_box(std::vector<double>& lb, std::vector<double>& ub,
                   const std::vector<LinRow>& local) const {
    std::vector<LinRow> rows = base;
    rows.insert(rows.end(), root.cuts.begin(), root.cuts.end());
    rows.insert(rows.end(), local.begin(), local.end());
    if (auto c = cutoff_row()) rows.push_back(*c);
    for (int pass = 0; pass < 10; ++pass) {
      const FbbtResult fr = fbbt_rows(rows, lb, ub);
      if (fr.infeasible) return false;
      round_integer_bounds(lb, ub);
      if (crossed(lb, ub)) return false;
      uncross(lb, ub);
      if (!o.enable_propagation) break;
      const PropResult pr = propagate(lb, ub);
      if (pr.infeasible) return false;
      if (!pr.changed) break;
    }
    return true;
  }

  // Initial slot bounds: interval products over the x box.
  std::vector<double> combined(const std::vector<double>& x, bool upper_side,
                               const std::vector<double>& xl,
                               const std::vector<double>& xu) const {
    std::vector<double> out = x;
    const LinRelax r = build_relaxation(e, xl, xu);
    for (int s = 0; s < e.num_slots(); ++s) {
      const int col = e.column_of_slot(s);
      out.push_back(upper_side ? r.col_ub[col] : r.col_lb[col]);
    }
    return out;
  }

  // One separation round at z. Violated tangent cuts are appended to out.
  int separate_round(const std::vector<double>& z, const std::vector<double>& lb,
                     const std::vector<double>& ub, std::vector<LinRow>& out,
                     bool record_audit) {
    int added = 0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const Polytope2D& P = polys[k];
      if (P.cuts().empty()) continue;
      const BilinearTerm& t = terms[k];
      const Box2 box{lb[t.i], ub[t.i], lb[t.j], ub[t.j]};
      const Polytope2D local = P.restricted(box);
      if (local.vertices().size() < 3) continue;
      const Point2 q{z[t.i], z[t.j]};
      if (!local.contains(q, 1e-7)) continue;
      const int col = slot_col(t);
      const double xv = z[col];
      for (CutKind kind : {CutKind::under, CutKind::over}) {
        try {
          const TangentCut cut = separate(local, q, kind);
          const double v = cut.value_at_query;
          const double tol = o.viol_tol * (1.0 + std::abs(v));
          const bool violated =
              kind == CutKind::under ? xv < v - tol : xv > v + tol;
          if (!violated) continue;
          LinRow row = cut.to_row(t.i, t.j, col);
          out.push_back(row);
          if (record_audit && audit.size() < 100000) {
            audit.push_back({row, t.i, t.j, local.box()});
          }
          ++added;
        } catch (const SeparationError&) {
          // q on the boundary within tolerance but outside every candidate.
        }
      }
    }
    return added;
  }

  RootInfo run_root() {
    const Miqcp& p = e.base();
    std::vector<double> xl = p.lb;
    std::vector<double> xu = p.ub;
    round_integer_bounds(xl, xu);
    LinRelax r = build_relaxation(e, xl, xu);
    const PrimalDualSolution first = engine.solve(r, obj);
    if (!first.optimal()) {
      root.infeasible = first.status == LpStatus::infeasible;
      if (!root.infeasible) throw NumericalError("unbounded root relaxation");
      return root;
    }
    root.first_lp_bound = first.obj;
    root.dual_bound = first.obj;

    // OBBT on every variable of a bilinear term, ascending index.
    FilterSet filter;
    std::set<int> vars;
    for (const BilinearTerm& t : terms) {
      vars.insert(t.i);
      vars.insert(t.j);
    }
    for (int i : vars) {
      const ObbtResult res = obbt_variable(r, i, engine);
      if (res.infeasible) {
        root.infeasible = true;
        return root;
      }
      update_filter(filter, res.min_point, terms, r.col_lb, r.col_ub);
      update_filter(filter, res.max_point, terms, r.col_lb, r.col_ub);
    }
    root.lp_iterations = engine.total_iterations();

    if (o.enable_projection) {
      const std::int64_t so_far = engine.total_iterations();
      const std::int64_t cap =
          o.lp_budget_factor < 0.0
              ? INT64_MAX
              : so_far + static_cast<std::int64_t>(
                             std::floor(o.lp_budget_factor * so_far));
      ProjectionBatch batch = project_all(r, terms, filter, engine, cap);
      root.projection_iterations = batch.iterations;
      root.budget_exhausted = batch.budget_exhausted;
      root.projections = std::move(batch.projections);
    } else {
      for (const BilinearTerm& t : terms) {
        Projection bare;
        bare.i = t.i;
        bare.j = t.j;
        bare.poly = Polytope2D(term_box(r, t.i, t.j));
        root.projections.push_back(std::move(bare));
      }
    }
    for (const Projection& pr : root.projections) polys.push_back(pr.poly);
    root.projected = r;

    xl.assign(r.col_lb.begin(), r.col_lb.begin() + n());
    xu.assign(r.col_ub.begin(), r.col_ub.begin() + n());
    round_integer_bounds(xl, xu);
    std::vector<double> lb = combined(xl, false, xl, xu);
    std::vector<double> ub = combined(xu, true, xl, xu);
    if (!tighten_box(lb, ub, {})) {
      root.infeasible = true;
      return root;
    }

    for (int round = 0; round < std::max(o.root_rounds, 1); ++round) {
      r = make_relax(lb, ub, {});
      const PrimalDualSolution sol = engine.solve(r, obj);
      ++root.rounds;
      if (sol.status == LpStatus::infeasible) {
        root.infeasible = true;
        return root;
      }
      if (!sol.optimal()) throw NumericalError("unbounded root relaxation");
      root.dual_bound = std::max(root.dual_bound, sol.obj);
      root.lp_point = sol.z;
      if (!(o.enable_separation && o.enable_projection)) break;
      std::vector<LinRow> fresh;
      if (separate_round(sol.z, lb, ub, fresh, true) == 0) break;
      root.cuts.insert(root.cuts.end(), fresh.begin(), fresh.end());
    }
    root.x_lb.assign(lb.begin(), lb.begin() + n());
    root.x_ub.assign(ub.begin(), ub.begin() + n());
    root.slot_lb.assign(lb.begin() + n(), lb.end());
    root.slot_ub.assign(ub.begin() + n(), ub.end());
    return root;
  }

  void try_incumbent(const std::vector<double>& z) {
    const Miqcp& p = e.base();
    std::vector<double> x(z.begin(), z.begin() + n());
    for (int i : p.int_set) x[i] = std::round(x[i]);
    for (int i = 0; i < n(); ++i) x[i] = std::clamp(x[i], p.lb[i], p.ub[i]);
    if (p.max_violation(x) > o.feas_tol) return;
    const double val = p.objective(x);
    if (val < upper) {
      upper = val;
      incumbent = std::move(x);
    }
  }

  // Processes one node; children are appended to out.
  void process(NodeData& node, std::vector<NodeData>& out) {
    std::vector<double>& lb = node.lb;
    std::vector<double>& ub = node.ub;
    if (!tighten_box(lb, ub, node.local_cuts)) return;

    std::vector<double> z;
    double bound = node.bound;
    bool lp_ok = true;
    try {
      LinRelax r = make_relax(lb, ub, node.local_cuts);
      PrimalDualSolution sol = engine.solve(r, obj);
      if (sol.status == LpStatus::infeasible) return;
      if (!sol.optimal()) throw NumericalError("unbounded node relaxation");
      bound = std::max(bound, sol.obj);
      z = sol.z;
      if (bound >= upper - gap()) return;
      if (o.enable_separation && o.enable_projection) {
        for (int round = 0; round < o.node_rounds; ++round) {
          std::vector<LinRow> fresh;
          if (separate_round(z, lb, ub, fresh, true) == 0) break;
          node_tangent_cuts += static_cast<int>(fresh.size());
          node.local_cuts.insert(node.local_cuts.end(), fresh.begin(), fresh.end());
          r.rows.insert(r.rows.end(), fresh.begin(), fresh.end());
          sol = engine.solve(r, obj);
          if (sol.status == LpStatus::infeasible) return;
          if (!sol.optimal()) throw NumericalError("unbounded node relaxation");
          bound = std::max(bound, sol.obj);
          z = sol.z;
          if (bound >= upper - gap()) return;
        }
      }
    } catch (const NumericalError&) {
      ++lp_failures;
      lp_ok = false;
      // Branch on the box midpoint; the parent bound stays valid.
      z.assign(lb.size(), 0.0);
      for (std::size_t k = 0; k < lb.size(); ++k) z[k] = 0.5 * (lb[k] + ub[k]);
      for (int s = 0; s < e.num_slots(); ++s) {
        // Force a violation on every product so a branching term exists.
        const Slot& sl = e.slots()[s];
        z[e.column_of_slot(s)] = z[sl.i] * z[sl.j] + 1.0;
      }
    }

    if (lp_ok) {
      try_incumbent(z);
      if (bound >= upper - gap()) return;
    }
    const std::vector<double> xl(lb.begin(), lb.begin() + n());
    const std::vector<double> xu(ub.begin(), ub.begin() + n());
    std::optional<BranchDecision> d =
        choose_branch(e, terms, z, xl, xu, o.viol_tol, o.int_tol);
    if (!d) {
      // Products hold at z but the original rows do not within feas_tol:
      // split the widest continuous factor, or give up on a tiny box.
      int widest = -1;
      double width = 1e-6;
      for (const Slot& sl : e.slots()) {
        for (int v : {sl.i, sl.j}) {
          if (xu[v] - xl[v] > width && !e.base().is_integer(v)) {
            width = xu[v] - xl[v];
            widest = v;
          }
        }
      }
      if (widest < 0) return;
      d = BranchDecision{widest, 0.5 * (xl[widest] + xu[widest]), false,
                         0.5 * (xl[widest] + xu[widest]),
                         0.5 * (xl[widest] + xu[widest])};
    }
    NodeData down;
    down.lb = lb;
    down.ub = ub;
    down.ub[d->var] = std::min(ub[d->var], d->down_ub);
    down.bound = bound;
    down.depth = node.depth + 1;
    down.local_cuts = node.local_cuts;
    NodeData up = down;
    up.ub[d->var] = ub[d->var];
    up.lb[d->var] = std::max(lb[d->var], d->up_lb);
    out.push_back(std::move(down));
    out.push_back(std::move(up));
  }
};

Solver::Solver(const Miqcp& p, SolverOptions opts)
    : e_(build_extended(p)), terms_(collect_terms(e_)), opts_(opts) {}

RootInfo Solver::solve_root() {
  Impl impl(e_, terms_, opts_);
  return impl.run_root();
}

SolveResult Solver::solve() {
  const auto t0 = Clock::now();
  Impl impl(e_, terms_, opts_);
  SolveResult res;
  res.terms = terms_;
  res.root = impl.run_root();
  for (const Projection& pr : res.root.projections) {
    res.phi.push_back(opts_.enable_projection && pr.effective() ? 1 : 0);
  }
  res.psi = effectiveness(terms_, res.phi);
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  if (!res.root.infeasible && !opts_.root_only) {
    std::priority_queue<NodeData, std::vector<NodeData>, NodeOrder> open;
    std::int64_t next_id = 0;
    NodeData rootnode;
    rootnode.lb = res.root.x_lb;
    rootnode.lb.insert(rootnode.lb.end(), res.root.slot_lb.begin(),
                       res.root.slot_lb.end());
    rootnode.ub = res.root.x_ub;
    rootnode.ub.insert(rootnode.ub.end(), res.root.slot_ub.begin(),
                       res.root.slot_ub.end());
    rootnode.bound = res.root.dual_bound;
    rootnode.id = next_id++;
    std::optional<NodeData> dive = std::move(rootnode);
    int plunge = 0;
    while (dive || !open.empty()) {
      if (res.nodes >= opts_.node_limit) {
        res.node_limit_hit = true;
        break;
      }
      if (elapsed() > opts_.time_limit) {
        res.time_limit_hit = true;
        break;
      }
      NodeData node;
      if (dive) {
        node = std::move(*dive);
        dive.reset();
      } else {
        node = open.top();
        open.pop();
        plunge = 0;
      }
      if (node.bound >= impl.upper - impl.gap()) continue;
      ++res.nodes;
      std::vector<NodeData> children;
      impl.process(node, children);
      for (NodeData& c : children) c.id = next_id++;
      if (children.empty()) continue;
      if (plunge < opts_.plunge_depth) {
        ++plunge;
        dive = std::move(children[0]);
        open.push(std::move(children[1]));
      } else {
        for (NodeData& c : children) open.push(std::move(c));
      }
    }
    double dual = impl.upper;
    if (dive && dive->bound < impl.upper - impl.gap()) dual = std::min(dual, dive->bound);
    while (!open.empty()) {
      const NodeData& top = open.top();
      if (top.bound < impl.upper - impl.gap()) dual = std::min(dual, top.bound);
      open.pop();
    }
    res.dual = std::max(dual, res.root.dual_bound);
    if (std::isfinite(impl.upper)) res.dual = std::min(res.dual, impl.upper);
    const bool limited = res.node_limit_hit || res.time_limit_hit;
    const bool closed = impl.upper - res.dual <= impl.gap();
    if (std::isfinite(impl.upper) && (closed || !limited)) {
      res.status = SolveStatus::optimal;
    } else if (!std::isfinite(impl.upper) && !limited) {
      res.status = SolveStatus::infeasible;
      res.dual = kInf;
    } else {
      res.status = SolveStatus::limit;
    }
  } else if (res.root.infeasible) {
    res.status = SolveStatus::infeasible;
    res.dual = kInf;
  } else {
    res.status = SolveStatus::limit;
    res.dual = res.root.dual_bound;
  }

  res.primal = impl.upper;
  res.incumbent = impl.incumbent;
  res.lp_iterations = impl.engine.total_iterations();
  res.lp_failures = impl.lp_failures;
  for (const Projection& pr : res.root.projections) {
    res.cut_counts[to_string(RowOrigin::projection_cut)] +=
        static_cast<int>(pr.poly.cuts().size());
  }
  res.cut_counts[to_string(RowOrigin::tangent_cut)] =
      static_cast<int>(res.root.cuts.size()) + impl.node_tangent_cuts;
  if (!res.incumbent.empty()) {
    for (const AuditCut& a : impl.audit) {
      const double xi = res.incumbent[a.i];
      const double xj = res.incumbent[a.j];
      const double t = 1e-9 * (1.0 + std::abs(xi) + std::abs(xj));
      if (xi < a.box.xl - t || xi > a.box.xu + t || xj < a.box.yl - t ||
          xj > a.box.yu + t) {
        continue;
      }
      res.audit_cuts.push_back(a.row);
    }
  }
  res.seconds = elapsed();
  return res;
}

SolveResult solve(const Miqcp& p, const SolverOptions& opts) {
  return Solver(p, opts).solve();
}

}  // namespace bilin
