#pragma once

// Spatial branch-and-bound over the extended formulation. The root applies
// OBBT to every variable of a bilinear term, computes the projection
// polygons once, and then alternates LP solves with tangent-cut separation
// and polygon-based propagation. Nodes repeat propagation and a bounded
// number of separation rounds on their local box.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bilin/lp.hpp"
#include "bilin/model.hpp"
#include "bilin/obbt.hpp"
#include "bilin/projection.hpp"

namespace bilin {

struct SolverOptions {
  bool enable_projection = true;
  bool enable_separation = true;
  bool enable_propagation = true;

  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  std::int64_t node_limit = 100000;
  // Projection LPs stop once their iterations exceed this multiple of the
  // root iterations spent before them. Negative means unlimited.
  double lp_budget_factor = 3.0;

  double rel_gap = 1e-4;
  double abs_gap = 1e-6;
  double viol_tol = 1e-6;
  double int_tol = 1e-6;
  double feas_tol = 1e-6;  // original constraints, incumbent acceptance
  int root_rounds = 20;
  int node_rounds = 2;
  int plunge_depth = 3;
  bool root_only = false;
  LpTolerances lp;
};

enum class SolveStatus { optimal, infeasible, limit };
const char* to_string(SolveStatus s);

struct RootInfo {
  bool infeasible = false;
  double dual_bound = -std::numeric_limits<double>::infinity();
  double first_lp_bound = -std::numeric_limits<double>::infinity();
  std::int64_t lp_iterations = 0;          // up to and including OBBT
  std::int64_t projection_iterations = 0;  // diag LPs
  bool budget_exhausted = false;
  int rounds = 0;
  std::vector<double> x_lb;  // global box after OBBT and propagation
  std::vector<double> x_ub;
  std::vector<double> slot_lb;
  std::vector<double> slot_ub;
  std::vector<Projection> projections;  // parallel to terms
  LinRelax projected;                   // relaxation the projections came from
  std::vector<LinRow> cuts;             // valid on the whole root box
  std::vector<double> lp_point;         // final root LP solution
};

struct SolveResult {
  SolveStatus status = SolveStatus::limit;
  double primal = std::numeric_limits<double>::infinity();
  double dual = -std::numeric_limits<double>::infinity();
  std::vector<double> incumbent;
  std::int64_t nodes = 0;
  std::int64_t lp_iterations = 0;
  std::int64_t lp_failures = 0;
  bool node_limit_hit = false;
  bool time_limit_hit = false;
  double seconds = 0.0;  // wall time; not part of deterministic reports

  std::vector<BilinearTerm> terms;
  std::vector<int> phi;  // per term: 1 iff a general cut was found
  double psi = 0.0;
  RootInfo root;
  std::map<std::string, int> cut_counts;  // rows added, by origin
  std::vector<LinRow> audit_cuts;         // cuts valid around the incumbent
};

class Solver {
 public:
  Solver(const Miqcp& p, SolverOptions opts);

  // Root processing only.
  RootInfo solve_root();
  SolveResult solve();

  const ExtendedForm& extended() const { return e_; }
  const std::vector<BilinearTerm>& terms() const { return terms_; }

 private:
  struct Impl;
  ExtendedForm e_;
  std::vector<BilinearTerm> terms_;
  SolverOptions opts_;
};

SolveResult solve(const Miqcp& p, const SolverOptions& opts = {});

// Branching decision for a relaxation point over the local box.
struct BranchDecision {
  int var = -1;
  double point = 0.0;
  bool integer = false;
  // Children: [lb, down_ub] and [up_lb, ub].
  double down_ub = 0.0;
  double up_lb = 0.0;
};

std::optional<BranchDecision> choose_branch(
    const ExtendedForm& e, const std::vector<BilinearTerm>& terms,
    const std::vector<double>& z, const std::vector<double>& x_lb,
    const std::vector<double>& x_ub, double viol_tol, double int_tol);

// Gap closed by d1 over d2 relative to primal bound p (both dual bounds of a
// minimization). Bounds within 1e-9 (1 + |p|) of each other count as equal.
double gap_closed(double p, double d1, double d2);

// Occurrence-weighted share of terms with phi = 1; 0 without terms.
double effectiveness(const std::vector<BilinearTerm>& terms,
                     const std::vector<int>& phi);

}  // namespace bilin
