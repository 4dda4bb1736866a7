#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "bilin/lp.hpp"

namespace bilin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 64;
constexpr int kBlandAfter = 50;

enum class VarState : unsigned char { basic, at_lower, at_upper };

// Working state of one solve. Variables are laid out as
// [structural (N) | slacks (m) | artificials (count)].
class Simplex {
 public:
  Simplex(const LinRelax& r, const LinearObjective& obj,
          const std::optional<EqualityRow>& eq, const LpTolerances& tol)
      : tol_(tol) {
    n_ = r.num_cols();
    rows_ = static_cast<int>(r.rows.size());
    m_ = rows_ + (eq ? 1 : 0);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m_, n_);
    rhs_.resize(m_);
    for (int k = 0; k < rows_; ++k) {
      for (const auto& [col, v] : r.rows[k].coeffs) a(k, col) += v;
      rhs_(k) = r.rows[k].rhs;
    }
    if (eq) {
      for (const auto& [col, v] : eq->coeffs) a(rows_, col) += v;
      rhs_(rows_) = eq->rhs;
    }
    cost_min_ = Eigen::VectorXd::Zero(n_);
    for (const auto& [col, v] : obj.coeffs) cost_min_(col) += v;
    if (obj.sense == Sense::maximize) cost_min_ = -cost_min_;

    lo_.assign(n_ + m_, 0.0);
    hi_.assign(n_ + m_, kInf);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = r.col_lb[j];
      hi_[j] = r.col_ub[j];
    }
    if (eq) hi_[n_ + rows_] = 0.0;

    for (int j = 0; j < n_; ++j) {
      if (lo_[j] > hi_[j] + tol_.feas) bound_conflict_ = true;
      if (!std::isfinite(lo_[j]) && !std::isfinite(hi_[j])) {
        throw std::invalid_argument("free columns are not supported");
      }
    }
    if (bound_conflict_) return;

    // Structural columns start at a finite bound.
    value_.assign(n_ + m_, 0.0);
    state_.assign(n_ + m_, VarState::at_lower);
    for (int j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j])) {
        value_[j] = lo_[j];
      } else {
        value_[j] = hi_[j];
        state_[j] = VarState::at_upper;
      }
    }
    Eigen::VectorXd z0(n_);
    for (int j = 0; j < n_; ++j) z0(j) = value_[j];
    const Eigen::VectorXd resid = rhs_ - a * z0;

    // Rows with a negative residual, and the equality row, get an artificial.
    std::vector<int> art_rows;
    std::vector<double> art_sign;
    for (int k = 0; k < m_; ++k) {
      const bool is_eq = k >= rows_;
      if (!is_eq && resid(k) >= 0.0) continue;
      art_rows.push_back(k);
      art_sign.push_back(resid(k) >= 0.0 ? 1.0 : -1.0);
    }
    num_art_ = static_cast<int>(art_rows.size());
    total_ = n_ + m_ + num_art_;
    lo_.resize(total_, 0.0);
    hi_.resize(total_, kInf);
    value_.resize(total_, 0.0);
    state_.resize(total_, VarState::at_lower);

    full_ = Eigen::MatrixXd::Zero(m_, total_);
    full_.leftCols(n_) = a;
    full_.block(0, n_, m_, m_).setIdentity();
    for (int t = 0; t < num_art_; ++t) {
      full_(art_rows[t], n_ + m_ + t) = art_sign[t];
    }

    head_.assign(m_, -1);
    for (int k = 0; k < m_; ++k) head_[k] = n_ + k;
    for (int t = 0; t < num_art_; ++t) head_[art_rows[t]] = n_ + m_ + t;
    for (int k = 0; k < m_; ++k) state_[head_[k]] = VarState::basic;
    refactor();
  }

  PrimalDualSolution run() {
    PrimalDualSolution sol;
    if (bound_conflict_) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    // Phase 1.
    if (num_art_ > 0) {
      Eigen::VectorXd cost = Eigen::VectorXd::Zero(total_);
      cost.tail(num_art_).setOnes();
      if (!iterate(cost)) throw NumericalError("phase 1 reported unbounded");
      double infeas = 0.0;
      for (int t = 0; t < num_art_; ++t) infeas += value_of(n_ + m_ + t);
      const double scale = 1.0 + rhs_.lpNorm<Eigen::Infinity>();
      if (infeas > tol_.feas * scale) {
        sol.status = LpStatus::infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      for (int t = 0; t < num_art_; ++t) hi_[n_ + m_ + t] = 0.0;
    }
    // Phase 2.
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(total_);
    cost.head(n_) = cost_min_;
    if (!iterate(cost)) {
      sol.status = LpStatus::unbounded;
      sol.iterations = iterations_;
      return sol;
    }

    const Eigen::VectorXd d = reduced_costs(cost);
    sol.status = LpStatus::optimal;
    sol.iterations = iterations_;
    sol.z.resize(n_);
    for (int j = 0; j < n_; ++j) sol.z[j] = std::clamp(value_of(j), lo_[j], hi_[j]);
    sol.lambda.assign(rows_, 0.0);
    for (int k = 0; k < rows_; ++k) {
      if (state_[n_ + k] != VarState::basic) sol.lambda[k] = std::max(0.0, d(n_ + k));
    }
    sol.mu = m_ > rows_ ? d(n_ + rows_) : 0.0;
    sol.bound_lb_dual.assign(n_, 0.0);
    sol.bound_ub_dual.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (state_[j] == VarState::basic) continue;
      if (d(j) > 0.0) {
        sol.bound_lb_dual[j] = d(j);
      } else {
        sol.bound_ub_dual[j] = -d(j);
      }
    }
    sol.basis = head_;
    return sol;
  }

 private:
  double value_of(int v) const {
    if (state_[v] != VarState::basic) return value_[v];
    for (int k = 0; k < m_; ++k) {
      if (head_[k] == v) return xb_(k);
    }
    return 0.0;
  }

  void refactor() {
    since_refactor_ = 0;
    if (m_ == 0) {
      tableau_ = Eigen::MatrixXd::Zero(0, total_);
      xb_ = Eigen::VectorXd::Zero(0);
      return;
    }
    Eigen::MatrixXd basis(m_, m_);
    for (int k = 0; k < m_; ++k) basis.col(k) = full_.col(head_[k]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    if (!(lu.rcond() > 1e-14)) {
      throw NumericalError("singular basis during refactorization");
    }
    tableau_ = lu.solve(full_);
    Eigen::VectorXd b = rhs_;
    for (int v = 0; v < total_; ++v) {
      if (state_[v] != VarState::basic && value_[v] != 0.0) {
        b -= full_.col(v) * value_[v];
      }
    }
    xb_ = lu.solve(b);
    since_refactor_ = 0;
  }

  Eigen::VectorXd reduced_costs(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(m_);
    for (int k = 0; k < m_; ++k) cb(k) = cost(head_[k]);
    return cost - tableau_.transpose() * cb;
  }

  // Returns false when the objective is unbounded.
  bool iterate(const Eigen::VectorXd& cost) {
    const double opt_tol = 1e-9 * (1.0 + cost.lpNorm<Eigen::Infinity>());
    const std::int64_t max_iter = 200LL * (m_ + total_) + 1000;
    int degenerate_run = 0;
    int refactor_checks = 0;
    for (;;) {
      if (iterations_ > max_iter) throw NumericalError("iteration limit");
      if (since_refactor_ >= kRefactorEvery) refactor();
      const Eigen::VectorXd d = reduced_costs(cost);
      const bool bland = degenerate_run > kBlandAfter;
      int enter = -1;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == VarState::basic || hi_[j] - lo_[j] <= 0.0) continue;
        double score = 0.0;
        if (state_[j] == VarState::at_lower && d(j) < -opt_tol) score = -d(j);
        if (state_[j] == VarState::at_upper && d(j) > opt_tol) score = d(j);
        if (score <= 0.0) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (score > best) {
          best = score;
          enter = j;
        }
      }
      if (enter < 0) {
        // Confirm optimality on a fresh factorization before returning.
        if (since_refactor_ == 0 || refactor_checks > 3) return true;
        ++refactor_checks;
        refactor();
        continue;
      }
      const double dir = state_[enter] == VarState::at_lower ? 1.0 : -1.0;
      const Eigen::VectorXd alpha = tableau_.col(enter);

      // Two-pass ratio test with a small feasibility relaxation.
      const double relax = 1e-11;
      double t_max = kInf;
      for (int k = 0; k < m_; ++k) {
        const double rate = dir * alpha(k);
        if (std::abs(rate) <= kPivotTol) continue;
        const int v = head_[k];
        if (rate > 0.0 && std::isfinite(lo_[v])) {
          t_max = std::min(t_max, (xb_(k) - lo_[v] + relax) / rate);
        } else if (rate < 0.0 && std::isfinite(hi_[v])) {
          t_max = std::min(t_max, (hi_[v] - xb_(k) + relax) / -rate);
        }
      }
      int leave = -1;
      double step = kInf;
      double best_rate = 0.0;
      for (int k = 0; k < m_; ++k) {
        const double rate = dir * alpha(k);
        if (std::abs(rate) <= kPivotTol) continue;
        const int v = head_[k];
        double dist;
        if (rate > 0.0 && std::isfinite(lo_[v])) {
          dist = (xb_(k) - lo_[v]) / rate;
        } else if (rate < 0.0 && std::isfinite(hi_[v])) {
          dist = (hi_[v] - xb_(k)) / -rate;
        } else {
          continue;
        }
        if (dist > t_max) continue;
        const bool better =
            bland ? (leave < 0 || dist < step - 1e-15 ||
                     (dist <= step + 1e-15 && v < head_[leave]))
                  : std::abs(rate) > best_rate;
        if (better) {
          leave = k;
          step = std::max(dist, 0.0);
          best_rate = std::abs(rate);
        }
      }
      const double flip = hi_[enter] - lo_[enter];
      ++iterations_;
      ++since_refactor_;
      if (std::isfinite(flip) && flip <= step) {
        xb_ -= (dir * flip) * alpha;
        state_[enter] =
            dir > 0 ? VarState::at_upper : VarState::at_lower;
        value_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
        degenerate_run = 0;
        continue;
      }
      if (leave < 0) return false;
      degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;

      const double entering_value = value_[enter] + dir * step;
      xb_ -= (dir * step) * alpha;
      const int out = head_[leave];
      const double rate = dir * alpha(leave);
      state_[out] = rate > 0.0 ? VarState::at_lower : VarState::at_upper;
      value_[out] = rate > 0.0 ? lo_[out] : hi_[out];
      head_[leave] = enter;
      state_[enter] = VarState::basic;
      xb_(leave) = entering_value;

      Eigen::VectorXd col = alpha;
      const double piv = col(leave);
      tableau_.row(leave) /= piv;
      col(leave) = 0.0;
      tableau_.noalias() -= col * tableau_.row(leave);
    }
  }

  LpTolerances tol_;
  int n_ = 0;
  int rows_ = 0;
  int m_ = 0;
  int num_art_ = 0;
  int total_ = 0;
  bool bound_conflict_ = false;
  Eigen::VectorXd rhs_;
  Eigen::VectorXd cost_min_;
  Eigen::MatrixXd full_;
  Eigen::MatrixXd tableau_;
  Eigen::VectorXd xb_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> value_;
  std::vector<VarState> state_;
  std::vector<int> head_;
  std::int64_t iterations_ = 0;
  int since_refactor_ = 0;
};

}  // namespace

KktReport kkt_report(const LinRelax& r, const LinearObjective& obj,
                     const std::optional<EqualityRow>& eq,
                     const PrimalDualSolution& sol) {
  KktReport rep;
  const int n = r.num_cols();
  std::vector<double> grad(n, 0.0);
  const double sign = obj.sense == Sense::maximize ? -1.0 : 1.0;
  for (const auto& [col, v] : obj.coeffs) grad[col] += sign * v;
  double primal = 0.0;
  for (int j = 0; j < n; ++j) primal += grad[j] * sol.z[j];

  double dual = 0.0;
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const LinRow& row = r.rows[k];
    const double lam = sol.lambda[k];
    for (const auto& [col, v] : row.coeffs) grad[col] += lam * v;
    const double slack = row.rhs - row.activity(sol.z);
    rep.primal_infeasibility = std::max(rep.primal_infeasibility, -slack);
    rep.complementarity = std::max(rep.complementarity, std::abs(lam * slack));
    dual -= lam * row.rhs;
  }
  if (eq) {
    double act = 0.0;
    for (const auto& [col, v] : eq->coeffs) {
      grad[col] += sol.mu * v;
      act += v * sol.z[col];
    }
    rep.primal_infeasibility =
        std::max(rep.primal_infeasibility, std::abs(act - eq->rhs));
    dual -= sol.mu * eq->rhs;
  }
  for (int j = 0; j < n; ++j) {
    grad[j] += sol.bound_ub_dual[j] - sol.bound_lb_dual[j];
    rep.stationarity = std::max(rep.stationarity, std::abs(grad[j]));
    rep.primal_infeasibility = std::max(
        {rep.primal_infeasibility, r.col_lb[j] - sol.z[j], sol.z[j] - r.col_ub[j]});
    if (sol.bound_lb_dual[j] > 0.0) {
      dual += sol.bound_lb_dual[j] * r.col_lb[j];
      rep.complementarity = std::max(
          rep.complementarity, sol.bound_lb_dual[j] * (sol.z[j] - r.col_lb[j]));
    }
    if (sol.bound_ub_dual[j] > 0.0) {
      dual -= sol.bound_ub_dual[j] * r.col_ub[j];
      rep.complementarity = std::max(
          rep.complementarity, sol.bound_ub_dual[j] * (r.col_ub[j] - sol.z[j]));
    }
  }
  rep.duality_gap = std::abs(primal - dual);
  rep.dual_objective = sign * dual;
  return rep;
}

PrimalDualSolution LpEngine::solve(const LinRelax& r, const LinearObjective& obj,
                                   const std::optional<EqualityRow>& eq) {
  Simplex simplex(r, obj, eq, tol_);
  PrimalDualSolution sol = simplex.run();
  total_iterations_ += sol.iterations;
  if (!sol.optimal()) return sol;

  sol.obj = 0.0;
  for (const auto& [col, v] : obj.coeffs) sol.obj += v * sol.z[col];

  const KktReport rep = kkt_report(r, obj, eq, sol);
  double scale = 1.0;
  for (const auto& [col, v] : obj.coeffs) scale = std::max(scale, std::abs(v));
  if (rep.primal_infeasibility > tol_.feas ||
      rep.stationarity > tol_.kkt * scale ||
      rep.complementarity > tol_.cs * scale ||
      rep.duality_gap > 1e-7 * (1.0 + std::abs(sol.obj))) {
    throw NumericalError("KKT audit failed");
  }
  return sol;
}

}  // namespace bilin
