#include <algorithm>
#include <cmath>

#include "bilin/lp.hpp"

namespace bilin {

const char* to_string(RowOrigin origin) {
  switch (origin) {
    case RowOrigin::original_linear: return "original-linear";
    case RowOrigin::linearized: return "linearized";
    case RowOrigin::mccormick: return "mccormick";
    case RowOrigin::secant: return "secant";
    case RowOrigin::gradient: return "gradient";
    case RowOrigin::projection_cut: return "projection-cut";
    case RowOrigin::tangent_cut: return "tangent-cut";
    case RowOrigin::cutoff: return "cutoff";
  }
  return "unknown";
}

double LinRow::activity(const std::vector<double>& z) const {
  double v = 0.0;
  for (const auto& [k, a] : coeffs) v += a * z[k];
  return v;
}

double LinRelax::max_violation(const std::vector<double>& z) const {
  double worst = 0.0;
  for (int k = 0; k < num_cols(); ++k) {
    worst = std::max({worst, col_lb[k] - z[k], z[k] - col_ub[k]});
  }
  for (const LinRow& row : rows) worst = std::max(worst, row.activity(z) - row.rhs);
  return worst;
}

std::vector<LinRow> mccormick_rows(int i, int j, int slot_col, double li,
                                   double ui, double lj, double uj) {
  const auto mc = RowOrigin::mccormick;
  return {
      // X >= u_j x_i + u_i x_j - u_i u_j
      {{{i, uj}, {j, ui}, {slot_col, -1.0}}, ui * uj, mc},
      // X >= l_j x_i + l_i x_j - l_i l_j
      {{{i, lj}, {j, li}, {slot_col, -1.0}}, li * lj, mc},
      // X <= u_j x_i + l_i x_j - l_i u_j
      {{{i, -uj}, {j, -li}, {slot_col, 1.0}}, -li * uj, mc},
      // X <= l_j x_i + u_i x_j - u_i l_j
      {{{i, -lj}, {j, -ui}, {slot_col, 1.0}}, -ui * lj, mc},
  };
}

std::vector<LinRow> square_rows(int i, int slot_col, double l, double u) {
  std::vector<LinRow> rows;
  // X <= (l + u) x - l u
  rows.push_back({{{i, -(l + u)}, {slot_col, 1.0}}, -l * u, RowOrigin::secant});
  const double pts[3] = {l, 0.5 * (l + u), u};
  for (int k = 0; k < 3; ++k) {
    if (k == 2 && u == l) break;
    if (k == 1 && u == l) continue;
    // X >= 2 a x - a^2
    const double a = pts[k];
    rows.push_back({{{i, 2.0 * a}, {slot_col, -1.0}}, a * a, RowOrigin::gradient});
  }
  return rows;
}

std::pair<double, double> product_range(double li, double ui, double lj,
                                        double uj) {
  const double p[4] = {li * lj, li * uj, ui * lj, ui * uj};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

std::vector<LinRow> base_rows(const ExtendedForm& e) {
  std::vector<LinRow> rows;
  const int n = e.num_vars();
  for (const auto& lc : e.linearized()) {
    LinRow row;
    for (int k = 0; k < n; ++k) {
      if (lc.lin[k] != 0.0) row.coeffs.emplace_back(k, lc.lin[k]);
    }
    for (const auto& [s, a] : lc.slot_coeffs) {
      row.coeffs.emplace_back(e.column_of_slot(s), a);
    }
    row.rhs = lc.rhs;
    row.origin = lc.slot_coeffs.empty() ? RowOrigin::original_linear
                                        : RowOrigin::linearized;
    rows.push_back(std::move(row));
  }
  return rows;
}

LinRelax build_relaxation(const ExtendedForm& e) {
  return build_relaxation(e, e.base().lb, e.base().ub);
}

LinRelax build_relaxation(const ExtendedForm& e, const std::vector<double>& x_lb,
                          const std::vector<double>& x_ub,
                          const std::vector<double>* slot_lb,
                          const std::vector<double>* slot_ub) {
  LinRelax r;
  r.num_x = e.num_vars();
  r.num_slots = e.num_slots();
  r.rows = base_rows(e);
  r.col_lb = x_lb;
  r.col_ub = x_ub;
  r.col_lb.resize(r.num_cols());
  r.col_ub.resize(r.num_cols());
  for (int s = 0; s < e.num_slots(); ++s) {
    const Slot& slot = e.slots()[s];
    const int col = e.column_of_slot(s);
    const double li = x_lb[slot.i];
    const double ui = x_ub[slot.i];
    double lo;
    double hi;
    if (slot.diagonal()) {
      hi = std::max(li * li, ui * ui);
      lo = (li <= 0.0 && ui >= 0.0) ? 0.0 : std::min(li * li, ui * ui);
      auto rows = square_rows(slot.i, col, li, ui);
      r.rows.insert(r.rows.end(), rows.begin(), rows.end());
    } else {
      const double lj = x_lb[slot.j];
      const double uj = x_ub[slot.j];
      std::tie(lo, hi) = product_range(li, ui, lj, uj);
      auto rows = mccormick_rows(slot.i, slot.j, col, li, ui, lj, uj);
      r.rows.insert(r.rows.end(), rows.begin(), rows.end());
    }
    if (slot_lb != nullptr) lo = std::max(lo, (*slot_lb)[s]);
    if (slot_ub != nullptr) hi = std::min(hi, (*slot_ub)[s]);
    r.col_lb[col] = lo;
    r.col_ub[col] = hi;
  }
  return r;
}

}  // namespace bilin
