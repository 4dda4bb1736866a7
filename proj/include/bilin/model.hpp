#pragma once

// Problem representation: the mixed-integer quadratically constrained program
// in normal form (linear objective, finite boxes) and its extended
// reformulation with one product column per occurring quadratic monomial.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace bilin {

// Thrown for malformed instance documents. what() names the offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A single monomial of x^T Q x. The triplet (i, j, v) with i <= j contributes
// v * x_i * x_j, so (0, 1, 1.0) encodes the product x_0 * x_1 exactly once.
struct QuadTerm {
  int i = 0;
  int j = 0;
  double value = 0.0;

  friend bool operator==(const QuadTerm&, const QuadTerm&) = default;
};

// x^T Q x + q^T x <= rhs.
struct QuadConstraint {
  std::vector<QuadTerm> quad;
  std::vector<double> lin;  // dense, length n
  double rhs = 0.0;

  bool is_linear() const { return quad.empty(); }
  double evaluate(const std::vector<double>& x) const;

  friend bool operator==(const QuadConstraint&, const QuadConstraint&) = default;
};

struct Miqcp {
  int n = 0;
  std::vector<double> c;
  std::vector<QuadConstraint> constraints;
  std::vector<double> lb;
  std::vector<double> ub;
  std::vector<int> int_set;  // sorted, unique

  int m() const { return static_cast<int>(constraints.size()); }
  bool is_integer(int i) const;
  bool is_binary(int i) const;
  double objective(const std::vector<double>& x) const;

  // Largest violation of a constraint, bound or integrality requirement.
  double max_violation(const std::vector<double>& x) const;

  friend bool operator==(const Miqcp&, const Miqcp&) = default;
};

// Throws ParseError on any schema violation or invariant breach.
Miqcp parse_problem(std::string_view text);
Miqcp parse_problem(const nlohmann::json& doc);
inline Miqcp parse_problem(const std::string& text) { return parse_problem(std::string_view(text)); }
inline Miqcp parse_problem(const char* text) { return parse_problem(std::string_view(text)); }
void validate(const Miqcp& p);

// Emits the normal form (all rows as "le", no quadratic objective), which
// parses back to an identical Miqcp.
nlohmann::json to_json(const Miqcp& p);

// Product column X_ij standing for x_i * x_j (i <= j).
struct Slot {
  int i = 0;
  int j = 0;
  int occurrences = 0;  // number of constraints whose Q has a nonzero at (i,j)

  bool diagonal() const { return i == j; }
};

// <X, Q_k> + q_k^T x <= b_k over slot columns.
struct LinearizedConstraint {
  std::vector<std::pair<int, double>> slot_coeffs;
  std::vector<double> lin;
  double rhs = 0.0;
};

struct BilinearTerm {
  int i = 0;
  int j = 0;
  int occurrences = 0;
  int slot = 0;
};

class ExtendedForm {
 public:
  explicit ExtendedForm(Miqcp base);

  const Miqcp& base() const { return base_; }
  int num_vars() const { return base_.n; }
  int num_slots() const { return static_cast<int>(slots_.size()); }
  const std::vector<Slot>& slots() const { return slots_; }
  const std::vector<LinearizedConstraint>& linearized() const {
    return linearized_;
  }

  // -1 when no slot exists. Arguments may come in either order.
  int slot_of(int i, int j) const;
  int diag_slot(int i) const { return slot_of(i, i); }

  // Column index of a slot in the combined (x, X) column space.
  int column_of_slot(int slot) const { return base_.n + slot; }

  // Evaluates the linearized rows at (x, X) with X given per slot.
  double linearized_value(int k, const std::vector<double>& x,
                          const std::vector<double>& slot_values) const;

  // slot_values[s] = x_i * x_j for every slot.
  std::vector<double> lift(const std::vector<double>& x) const;

 private:
  Miqcp base_;
  std::vector<Slot> slots_;
  std::map<std::pair<int, int>, int> index_;
  std::vector<LinearizedConstraint> linearized_;
};

ExtendedForm build_extended(Miqcp p);

// Off-diagonal terms sorted by descending occurrence count, then descending
// box volume, then (i, j). Terms over two binary variables are dropped.
std::vector<BilinearTerm> collect_terms(const ExtendedForm& e);

}  // namespace bilin
