#pragma once

#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "bilin/lp.hpp"
#include "bilin/model.hpp"

namespace bilin {

enum class BoundSide : unsigned char { lower, upper };

// Box vertices (per bilinear term) witnessed feasible by some relaxation
// point. A witnessed vertex cannot be cut off by any valid inequality, so the
// diagonal LP toward it can be skipped.
class FilterSet {
 public:
  struct Entry {
    int i;
    int j;
    BoundSide side_i;
    BoundSide side_j;
    double value_i;
    double value_j;

    auto key() const { return std::tuple(i, j, side_i, side_j); }
    friend bool operator<(const Entry& a, const Entry& b) {
      return a.key() < b.key();
    }
  };

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::set<Entry>& entries() const { return entries_; }

  void insert(const Entry& e);
  // True when (vertex_i, vertex_j) matches a recorded vertex within tol.
  bool contains(int i, int j, double vertex_i, double vertex_j,
                double tol = 1e-7) const;
  void merge(const FilterSet& other);

 private:
  std::set<Entry> entries_;
};

struct ObbtResult {
  bool infeasible = false;
  double new_lb = 0.0;
  double new_ub = 0.0;
  std::vector<double> min_point;  // relaxation point attaining new_lb
  std::vector<double> max_point;  // relaxation point attaining new_ub
  std::int64_t iterations = 0;
};

// Minimizes and maximizes column i over the relaxation and tightens its
// column bounds in place; bounds are never loosened.
ObbtResult obbt_variable(LinRelax& r, int i, LpEngine& engine);

// Records every term whose two coordinates sit (within feas_tol) at bounds of
// the given box; coordinates are snapped to the bound values.
void update_filter(FilterSet& f, const std::vector<double>& sol,
                   const std::vector<BilinearTerm>& terms,
                   const std::vector<double>& lb, const std::vector<double>& ub,
                   double feas_tol = 1e-7);

bool is_filtered(const FilterSet& f, int i, int j, double vertex_i,
                 double vertex_j);

}  // namespace bilin
