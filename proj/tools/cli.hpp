#pragma once

// Command-line front end. Records are written as one JSON object per line;
// the same configuration and seed always produce the same bytes.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bilin/solver.hpp"

namespace bilin::cli {

enum ExitCode : int {
  kOk = 0,
  kParse = 2,
  kIo = 3,
  kNumerical = 4,
  kLimit = 5,
};

struct RunConfig {
  std::string subcommand;
  std::string instance;  // file, or directory of *.json files
  bool enable_projection = true;
  bool enable_separation = true;
  bool enable_propagation = true;
  double time_limit = std::numeric_limits<double>::infinity();
  std::int64_t node_limit = 100000;
  double lp_budget_factor = 3.0;
  std::uint64_t seed = 1;
  std::string out;  // file for solve/project/root-analyze, directory for corpus
  bool oracle = false;
  std::string csv;  // histogram output
  std::optional<double> primal;  // reference primal bound for root-analyze
  bool timings = false;

  // corpus
  std::string kind = "all";
  int count = 10;
  int points = 3;
  int vars = 4;
  int rows = 2;
  double density = 0.5;
  int integers = 0;

  SolverOptions solver_options() const;
};

// Parses argv and runs the subcommand. Records go to out (or cfg.out);
// diagnostics to err. Returns one of ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Per-subcommand workers on an already parsed instance.
nlohmann::json solve_record(const Miqcp& p, const RunConfig& cfg,
                            SolveResult* result = nullptr);
nlohmann::json root_analyze_record(const Miqcp& p, const RunConfig& cfg);
std::vector<nlohmann::json> project_records(const Miqcp& p, const RunConfig& cfg);

// Histogram over [lo, hi] with the given bin width as CSV text.
std::string histogram_csv(const std::vector<double>& values, double lo,
                          double hi, double width, const std::string& label);

}  // namespace bilin::cli
