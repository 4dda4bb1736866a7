#pragma once

// Polyhedral relaxation of the extended form and a dense bounded-variable
// primal simplex that reports a full KKT certificate (row multipliers, bound
// multipliers, equality multiplier).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bilin/model.hpp"

namespace bilin {

enum class RowOrigin {
  original_linear,
  linearized,
  mccormick,
  secant,
  gradient,
  projection_cut,
  tangent_cut,
  cutoff,
};

const char* to_string(RowOrigin origin);

using SparseVec = std::vector<std::pair<int, double>>;

// coeffs^T z <= rhs over the combined column space z = (x, X).
struct LinRow {
  SparseVec coeffs;
  double rhs = 0.0;
  RowOrigin origin = RowOrigin::original_linear;

  double activity(const std::vector<double>& z) const;
};

// Columns 0..num_x-1 are the original variables, num_x.. the product slots.
struct LinRelax {
  int num_x = 0;
  int num_slots = 0;
  std::vector<LinRow> rows;
  std::vector<double> col_lb;
  std::vector<double> col_ub;

  int num_cols() const { return num_x + num_slots; }
  int slot_column(int slot) const { return num_x + slot; }
  double max_violation(const std::vector<double>& z) const;
};

struct LpTolerances {
  double feas = 1e-7;
  double kkt = 1e-6;
  double cs = 1e-6;
};

// The four McCormick inequalities for X = x_i * x_j over the box, as <= rows
// over columns (i, j, slot_col).
std::vector<LinRow> mccormick_rows(int i, int j, int slot_col, double li,
                                   double ui, double lj, double uj);

// Secant over [l, u] plus gradient cuts at l, midpoint and u for X = x_i^2.
std::vector<LinRow> square_rows(int i, int slot_col, double l, double u);

// Interval hull of x_i * x_j over the box.
std::pair<double, double> product_range(double li, double ui, double lj,
                                        double uj);

// Rows of the original problem that do not depend on the box: purely linear
// constraints and linearized quadratic constraints.
std::vector<LinRow> base_rows(const ExtendedForm& e);

// Relaxation over the root box of the problem.
LinRelax build_relaxation(const ExtendedForm& e);

// Relaxation over the given bounds of the x columns; slot column bounds are
// the interval products, intersected with slot_lb/slot_ub when provided.
LinRelax build_relaxation(const ExtendedForm& e, const std::vector<double>& x_lb,
                          const std::vector<double>& x_ub,
                          const std::vector<double>* slot_lb = nullptr,
                          const std::vector<double>* slot_ub = nullptr);

enum class LpStatus { optimal, infeasible, unbounded };
enum class Sense { minimize, maximize };

struct LinearObjective {
  SparseVec coeffs;
  Sense sense = Sense::minimize;
};

struct EqualityRow {
  SparseVec coeffs;
  double rhs = 0.0;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// KKT certificate in minimization form. With c the objective negated for
// maximization problems:
//   c + A^T lambda + mu * g - bound_lb_dual + bound_ub_dual = 0,
//   lambda >= 0, bound duals >= 0.
struct PrimalDualSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> z;
  double obj = 0.0;  // in the caller's sense
  std::vector<double> lambda;
  std::vector<double> bound_lb_dual;
  std::vector<double> bound_ub_dual;
  double mu = 0.0;
  std::vector<int> basis;
  std::int64_t iterations = 0;

  bool optimal() const { return status == LpStatus::optimal; }
};

struct KktReport {
  double primal_infeasibility = 0.0;
  double stationarity = 0.0;
  double complementarity = 0.0;
  double dual_objective = 0.0;  // in the caller's sense
  double duality_gap = 0.0;
};

KktReport kkt_report(const LinRelax& r, const LinearObjective& obj,
                     const std::optional<EqualityRow>& eq,
                     const PrimalDualSolution& sol);

// Dense bounded-variable primal simplex with Dantzig pricing and a switch to
// Bland's rule after a run of degenerate pivots. Column bounds must be finite
// on at least one side.
class LpEngine {
 public:
  explicit LpEngine(LpTolerances tol = {}) : tol_(tol) {}

  // Throws NumericalError when the KKT audit fails after refactorization.
  PrimalDualSolution solve(const LinRelax& r, const LinearObjective& obj,
                           const std::optional<EqualityRow>& eq = std::nullopt);

  std::int64_t total_iterations() const { return total_iterations_; }
  const LpTolerances& tolerances() const { return tol_; }

 private:
  LpTolerances tol_;
  std::int64_t total_iterations_ = 0;
};

}  // namespace bilin
