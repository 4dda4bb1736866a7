#include "bilin/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace bilin {

using nlohmann::json;

double QuadConstraint::evaluate(const std::vector<double>& x) const {
  double v = 0.0;
  for (const QuadTerm& t : quad) v += t.value * x[t.i] * x[t.j];
  for (std::size_t k = 0; k < lin.size(); ++k) v += lin[k] * x[k];
  return v;
}

bool Miqcp::is_integer(int i) const {
  return std::binary_search(int_set.begin(), int_set.end(), i);
}

bool Miqcp::is_binary(int i) const {
  return is_integer(i) && lb[i] >= 0.0 && ub[i] <= 1.0;
}

double Miqcp::objective(const std::vector<double>& x) const {
  double v = 0.0;
  for (int k = 0; k < n; ++k) v += c[k] * x[k];
  return v;
}

double Miqcp::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    worst = std::max({worst, lb[k] - x[k], x[k] - ub[k]});
  }
  for (int k : int_set) worst = std::max(worst, std::abs(x[k] - std::round(x[k])));
  for (const QuadConstraint& con : constraints) {
    worst = std::max(worst, con.evaluate(x) - con.rhs);
  }
  return worst;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError(field + ": " + what);
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

std::vector<double> as_vector(const json& v, const std::string& field,
                              std::size_t expected) {
  if (!v.is_array()) fail(field, "expected an array");
  if (v.size() != expected) {
    fail(field, "expected " + std::to_string(expected) + " entries, got " +
                    std::to_string(v.size()));
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(as_number(v[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

int as_index(const json& v, const std::string& field, int n) {
  if (!v.is_number_integer()) fail(field, "expected an integer index");
  const auto idx = v.get<long long>();
  if (idx < 0 || idx >= n) fail(field, "index out of range");
  return static_cast<int>(idx);
}

std::vector<QuadTerm> parse_triplets(const json& v, const std::string& field,
                                     int n) {
  if (!v.is_array()) fail(field, "expected an array of [i,j,v] triplets");
  std::vector<QuadTerm> out;
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string f = field + "[" + std::to_string(k) + "]";
    const json& t = v[k];
    if (!t.is_array() || t.size() != 3) fail(f, "expected [i,j,v]");
    int i = as_index(t[0], f, n);
    int j = as_index(t[1], f, n);
    const double val = as_number(t[2], f);
    if (!std::isfinite(val)) fail(f, "non-finite coefficient");
    if (i > j) std::swap(i, j);
    if (!seen.insert({i, j}).second) fail(f, "duplicate entry");
    if (val != 0.0) out.push_back({i, j, val});
  }
  std::sort(out.begin(), out.end(), [](const QuadTerm& a, const QuadTerm& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
  return out;
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) fail(where + key, "unknown field");
  }
}

// Interval enclosure of x^T Q x + c^T x over the box.
std::pair<double, double> quadratic_range(const std::vector<QuadTerm>& quad,
                                          const std::vector<double>& c,
                                          const std::vector<double>& lb,
                                          const std::vector<double>& ub) {
  double lo = 0.0;
  double hi = 0.0;
  for (const QuadTerm& t : quad) {
    double a;
    double b;
    if (t.i == t.j) {
      const double l = lb[t.i];
      const double u = ub[t.i];
      b = std::max(l * l, u * u);
      a = (l <= 0.0 && u >= 0.0) ? 0.0 : std::min(l * l, u * u);
    } else {
      const double p[4] = {lb[t.i] * lb[t.j], lb[t.i] * ub[t.j],
                           ub[t.i] * lb[t.j], ub[t.i] * ub[t.j]};
      a = *std::min_element(p, p + 4);
      b = *std::max_element(p, p + 4);
    }
    lo += std::min(t.value * a, t.value * b);
    hi += std::max(t.value * a, t.value * b);
  }
  for (std::size_t k = 0; k < c.size(); ++k) {
    lo += std::min(c[k] * lb[k], c[k] * ub[k]);
    hi += std::max(c[k] * lb[k], c[k] * ub[k]);
  }
  return {lo, hi};
}

}  // namespace

void validate(const Miqcp& p) {
  const auto n = static_cast<std::size_t>(p.n);
  if (p.n < 0) fail("n", "must be nonnegative");
  if (p.c.size() != n || p.lb.size() != n || p.ub.size() != n) {
    fail("n", "vector lengths disagree with n");
  }
  for (int i = 0; i < p.n; ++i) {
    if (!std::isfinite(p.lb[i]) || !std::isfinite(p.ub[i])) {
      fail("lb/ub[" + std::to_string(i) + "]", "non-finite bound");
    }
    if (p.lb[i] > p.ub[i]) {
      fail("lb/ub[" + std::to_string(i) + "]", "inconsistent bounds");
    }
  }
  for (int i : p.int_set) {
    if (i < 0 || i >= p.n) fail("int", "index out of range");
  }
  for (std::size_t k = 0; k < p.constraints.size(); ++k) {
    const auto& con = p.constraints[k];
    const std::string f = "cons[" + std::to_string(k) + "]";
    if (con.lin.size() != n) fail(f + ".q", "length disagrees with n");
    if (!std::isfinite(con.rhs)) fail(f + ".b", "non-finite right-hand side");
    std::set<std::pair<int, int>> seen;
    for (const QuadTerm& t : con.quad) {
      if (t.i < 0 || t.j >= p.n || t.i > t.j) fail(f + ".Q", "bad index");
      if (!seen.insert({t.i, t.j}).second) fail(f + ".Q", "duplicate entry");
    }
  }
}

Miqcp parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("document: ") + e.what());
  }
  return parse_problem(doc);
}

Miqcp parse_problem(const json& doc) {
  if (!doc.is_object()) fail("document", "expected an object");
  reject_unknown(doc, "", {"n", "c", "lb", "ub", "int", "cons", "objQ"});
  for (const char* key : {"n", "c", "lb", "ub"}) {
    if (!doc.contains(key)) fail(key, "missing");
  }
  if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 0) {
    fail("n", "expected a nonnegative integer");
  }
  Miqcp p;
  p.n = doc["n"].get<int>();
  const auto n = static_cast<std::size_t>(p.n);
  p.c = as_vector(doc["c"], "c", n);
  p.lb = as_vector(doc["lb"], "lb", n);
  p.ub = as_vector(doc["ub"], "ub", n);
  for (int i = 0; i < p.n; ++i) {
    const std::string f = "lb/ub[" + std::to_string(i) + "]";
    if (!std::isfinite(p.lb[i]) || !std::isfinite(p.ub[i])) {
      fail(f, "non-finite bound");
    }
    if (p.lb[i] > p.ub[i]) fail(f, "inconsistent bounds");
  }
  if (doc.contains("int")) {
    if (!doc["int"].is_array()) fail("int", "expected an array");
    for (std::size_t k = 0; k < doc["int"].size(); ++k) {
      p.int_set.push_back(
          as_index(doc["int"][k], "int[" + std::to_string(k) + "]", p.n));
    }
    std::sort(p.int_set.begin(), p.int_set.end());
    p.int_set.erase(std::unique(p.int_set.begin(), p.int_set.end()),
                    p.int_set.end());
  }
  if (doc.contains("cons")) {
    const json& cons = doc["cons"];
    if (!cons.is_array()) fail("cons", "expected an array");
    for (std::size_t k = 0; k < cons.size(); ++k) {
      const std::string f = "cons[" + std::to_string(k) + "]";
      const json& row = cons[k];
      if (!row.is_object()) fail(f, "expected an object");
      reject_unknown(row, f + ".", {"Q", "q", "b", "sense"});
      if (!row.contains("q")) fail(f + ".q", "missing");
      if (!row.contains("b")) fail(f + ".b", "missing");
      QuadConstraint con;
      if (row.contains("Q")) con.quad = parse_triplets(row["Q"], f + ".Q", p.n);
      con.lin = as_vector(row["q"], f + ".q", n);
      con.rhs = as_number(row["b"], f + ".b");
      if (!std::isfinite(con.rhs)) fail(f + ".b", "non-finite right-hand side");
      std::string sense = "le";
      if (row.contains("sense")) {
        if (!row["sense"].is_string()) fail(f + ".sense", "expected a string");
        sense = row["sense"].get<std::string>();
      }
      auto negated = [](QuadConstraint c) {
        for (auto& t : c.quad) t.value = -t.value;
        for (auto& v : c.lin) v = -v;
        c.rhs = -c.rhs;
        return c;
      };
      if (sense == "le") {
        p.constraints.push_back(std::move(con));
      } else if (sense == "ge") {
        p.constraints.push_back(negated(std::move(con)));
      } else if (sense == "eq") {
        p.constraints.push_back(con);
        p.constraints.push_back(negated(std::move(con)));
      } else {
        fail(f + ".sense", "expected \"le\", \"ge\" or \"eq\"");
      }
    }
  }
  if (doc.contains("objQ")) {
    // Epigraph: minimize t subject to x^T Q x + c^T x - t <= 0.
    auto quad = parse_triplets(doc["objQ"], "objQ", p.n);
    if (!quad.empty()) {
      const auto [lo, hi] = quadratic_range(quad, p.c, p.lb, p.ub);
      QuadConstraint epi;
      epi.quad = std::move(quad);
      epi.lin = p.c;
      epi.lin.push_back(-1.0);
      epi.rhs = 0.0;
      for (auto& con : p.constraints) con.lin.push_back(0.0);
      p.constraints.push_back(std::move(epi));
      p.c.assign(n + 1, 0.0);
      p.c[n] = 1.0;
      p.lb.push_back(lo);
      p.ub.push_back(hi);
      p.n += 1;
    }
  }
  validate(p);
  return p;
}

json to_json(const Miqcp& p) {
  json doc;
  doc["n"] = p.n;
  doc["c"] = p.c;
  doc["lb"] = p.lb;
  doc["ub"] = p.ub;
  doc["int"] = p.int_set;
  json cons = json::array();
  for (const auto& con : p.constraints) {
    json row;
    json q = json::array();
    for (const auto& t : con.quad) q.push_back({t.i, t.j, t.value});
    row["Q"] = std::move(q);
    row["q"] = con.lin;
    row["b"] = con.rhs;
    row["sense"] = "le";
    cons.push_back(std::move(row));
  }
  doc["cons"] = std::move(cons);
  return doc;
}

ExtendedForm::ExtendedForm(Miqcp base) : base_(std::move(base)) {
  std::map<std::pair<int, int>, int> counts;
  for (const auto& con : base_.constraints) {
    for (const auto& t : con.quad) ++counts[{t.i, t.j}];
  }
  // std::map iterates lexicographically, which fixes slot numbering.
  for (const auto& [key, count] : counts) {
    index_[key] = static_cast<int>(slots_.size());
    slots_.push_back({key.first, key.second, count});
  }
  linearized_.reserve(base_.constraints.size());
  for (const auto& con : base_.constraints) {
    LinearizedConstraint lc;
    for (const auto& t : con.quad) {
      lc.slot_coeffs.emplace_back(index_.at({t.i, t.j}), t.value);
    }
    lc.lin = con.lin;
    lc.rhs = con.rhs;
    linearized_.push_back(std::move(lc));
  }
}

int ExtendedForm::slot_of(int i, int j) const {
  if (i > j) std::swap(i, j);
  const auto it = index_.find({i, j});
  return it == index_.end() ? -1 : it->second;
}

double ExtendedForm::linearized_value(
    int k, const std::vector<double>& x,
    const std::vector<double>& slot_values) const {
  const auto& lc = linearized_[k];
  double v = 0.0;
  for (const auto& [s, coef] : lc.slot_coeffs) v += coef * slot_values[s];
  for (std::size_t i = 0; i < lc.lin.size(); ++i) v += lc.lin[i] * x[i];
  return v;
}

std::vector<double> ExtendedForm::lift(const std::vector<double>& x) const {
  std::vector<double> out(slots_.size());
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    out[s] = x[slots_[s].i] * x[slots_[s].j];
  }
  return out;
}

ExtendedForm build_extended(Miqcp p) { return ExtendedForm(std::move(p)); }

std::vector<BilinearTerm> collect_terms(const ExtendedForm& e) {
  const Miqcp& p = e.base();
  std::vector<BilinearTerm> terms;
  for (int s = 0; s < e.num_slots(); ++s) {
    const Slot& slot = e.slots()[s];
    if (slot.diagonal()) continue;
    if (p.is_binary(slot.i) && p.is_binary(slot.j)) continue;
    terms.push_back({slot.i, slot.j, slot.occurrences, s});
  }
  auto volume = [&](const BilinearTerm& t) {
    return (p.ub[t.i] - p.lb[t.i]) * (p.ub[t.j] - p.lb[t.j]);
  };
  std::stable_sort(terms.begin(), terms.end(),
                   [&](const BilinearTerm& a, const BilinearTerm& b) {
                     if (a.occurrences != b.occurrences) {
                       return a.occurrences > b.occurrences;
                     }
                     const double va = volume(a);
                     const double vb = volume(b);
                     if (va != vb) return va > vb;
                     return std::pair(a.i, a.j) < std::pair(b.i, b.j);
                   });
  return terms;
}

}  // namespace bilin
