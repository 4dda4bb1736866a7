#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bilin/corpus.hpp"
#include "bilin/oracle.hpp"
#include "bilin/propagation.hpp"

namespace bilin::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

std::vector<fs::path> instance_files(const std::string& where) {
  if (where.empty()) throw IoError("no instance given");
  const fs::path p(where);
  std::error_code ec;
  if (fs::is_directory(p, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(p, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    if (ec) throw IoError("cannot list " + where);
    std::sort(files.begin(), files.end());
    return files;
  }
  if (!fs::is_regular_file(p, ec)) throw IoError("no such file: " + where);
  return {p};
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--instance", cfg.instance, "instance file or directory");
  sub->add_flag("--no-projection", [&cfg](std::int64_t) { cfg.enable_projection = false; },
                "disable two-dimensional projections");
  sub->add_flag("--no-separation", [&cfg](std::int64_t) { cfg.enable_separation = false; },
                "disable tangent-cut separation");
  sub->add_flag("--no-propagation", [&cfg](std::int64_t) { cfg.enable_propagation = false; },
                "disable polygon propagation");
  sub->add_option("--time-limit", cfg.time_limit, "seconds");
  sub->add_option("--node-limit", cfg.node_limit, "maximum nodes")->check(CLI::NonNegativeNumber);
  sub->add_option("--lp-budget-factor", cfg.lp_budget_factor,
                  "projection LP iterations as a multiple of root iterations")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--out", cfg.out, "output file (directory for corpus)");
  sub->add_flag("--oracle", cfg.oracle, "add exact-projection and grid oracle data");
  sub->add_option("--csv", cfg.csv, "histogram CSV output");
  sub->add_flag("--timings", cfg.timings, "include wall-clock times");
}

}  // namespace

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.enable_projection = enable_projection;
  o.enable_separation = enable_separation;
  o.enable_propagation = enable_propagation;
  o.time_limit = time_limit;
  o.node_limit = node_limit;
  o.lp_budget_factor = lp_budget_factor;
  return o;
}

json solve_record(const Miqcp& p, const RunConfig& cfg, SolveResult* result) {
  SolveResult res = solve(p, cfg.solver_options());
  json r;
  r["record"] = "solve";
  r["status"] = to_string(res.status);
  r["primal"] = finite_or_null(res.primal);
  r["dual"] = finite_or_null(res.dual);
  r["nodes"] = res.nodes;
  r["root_dual"] = finite_or_null(res.root.dual_bound);
  r["psi"] = res.psi;
  r["terms"] = res.terms.size();
  r["lp_iterations"] = res.lp_iterations;
  r["projection_lp_iterations"] = res.root.projection_iterations;
  r["budget_exhausted"] = res.root.budget_exhausted;
  r["lp_failures"] = res.lp_failures;
  r["cut_counts"] = res.cut_counts;
  r["incumbent"] = res.incumbent;
  r["config"] = {{"projection", cfg.enable_projection},
                 {"separation", cfg.enable_separation},
                 {"propagation", cfg.enable_propagation}};
  if (cfg.timings) r["seconds"] = res.seconds;
  if (result != nullptr) *result = std::move(res);
  return r;
}

json root_analyze_record(const Miqcp& p, const RunConfig& cfg) {
  json r;
  r["record"] = "root-analyze";
  double primal = 0.0;
  if (cfg.primal) {
    primal = *cfg.primal;
  } else {
    RunConfig full = cfg;
    full.enable_projection = full.enable_separation = full.enable_propagation = true;
    const SolveResult ref = solve(p, full.solver_options());
    if (!std::isfinite(ref.primal)) {
      r["excluded"] = true;
      r["reason"] = "no primal bound";
      return r;
    }
    primal = ref.primal;
  }
  SolverOptions on = cfg.solver_options();
  on.enable_projection = on.enable_separation = on.enable_propagation = true;
  on.root_only = true;
  SolverOptions off = on;
  off.enable_projection = off.enable_separation = off.enable_propagation = false;
  Solver with(p, on);
  Solver without(p, off);
  const RootInfo r1 = with.solve_root();
  const RootInfo r2 = without.solve_root();
  if (r1.infeasible || r2.infeasible || !std::isfinite(r1.dual_bound) ||
      !std::isfinite(r2.dual_bound)) {
    r["excluded"] = true;
    r["reason"] = "no finite dual bound";
    return r;
  }
  // LP tolerances can put a dual bound a hair above an optimal primal.
  const double slack = 1e-6 * (1.0 + std::abs(primal));
  double d1 = r1.dual_bound;
  double d2 = r2.dual_bound;
  if (d1 > primal + slack || d2 > primal + slack) {
    throw NumericalError("dual bound above the reference primal bound");
  }
  d1 = std::min(d1, primal);
  d2 = std::min(d2, primal);
  std::vector<int> phi;
  for (const Projection& pr : r1.projections) phi.push_back(pr.effective() ? 1 : 0);
  r["excluded"] = false;
  r["primal"] = primal;
  r["d1"] = d1;
  r["d2"] = d2;
  r["gc"] = gap_closed(primal, d1, d2);
  r["psi"] = effectiveness(with.terms(), phi);
  r["root_lp_iterations"] = r1.lp_iterations;
  r["projection_lp_iterations"] = r1.projection_iterations;
  r["budget_exhausted"] = r1.budget_exhausted;
  return r;
}

std::vector<json> project_records(const Miqcp& p, const RunConfig& cfg) {
  SolverOptions o = cfg.solver_options();
  o.enable_projection = true;
  o.root_only = true;
  Solver s(p, o);
  const RootInfo root = s.solve_root();
  std::vector<json> out;
  if (root.infeasible) {
    out.push_back({{"record", "project-summary"}, {"infeasible", true}});
    return out;
  }
  std::vector<int> phi;
  for (std::size_t k = 0; k < root.projections.size(); ++k) {
    const Projection& pr = root.projections[k];
    const BilinearTerm& t = s.terms()[k];
    const Polytope2D& P = pr.poly;
    const Box2& b = P.box();
    json r;
    r["record"] = "term";
    r["i"] = t.i;
    r["j"] = t.j;
    r["occurrences"] = t.occurrences;
    r["box"] = {b.xl, b.xu, b.yl, b.yu};
    json cuts = json::array();
    for (const Halfplane& h : P.cuts()) cuts.push_back({h.gx, h.gy, h.g0});
    r["cuts"] = cuts;
    json verts = json::array();
    for (const Point2& v : P.vertices()) verts.push_back({v.x, v.y});
    r["vertices"] = verts;
    const double area = P.empty() ? 0.0 : volume2d(P);
    r["area"] = area;
    r["box_area"] = b.width_x() * b.width_y();
    r["phi"] = pr.effective() ? 1 : 0;
    r["lp_solves"] = pr.lp_solves;
    r["filtered"] = pr.filtered;
    r["degenerate"] = pr.degenerate;
    phi.push_back(pr.effective() ? 1 : 0);
    if (cfg.oracle && !P.empty()) {
      const Polytope2D exact = exact_projection_oracle(root.projected, t.i, t.j);
      if (!exact.empty()) {
        r["oracle_area"] = volume2d(exact);
        r["quotient"] = volume_quotient(exact, P);
      }
      const Interval fwd = forward_bounds(P);
      r["forward"] = {fwd.lo, fwd.hi};
      if (const auto grid = grid_product_range(P)) {
        r["grid"] = {grid->lo, grid->hi};
      }
    }
    out.push_back(std::move(r));
  }
  json summary;
  summary["record"] = "project-summary";
  summary["terms"] = root.projections.size();
  summary["psi"] = effectiveness(s.terms(), phi);
  summary["projection_lp_iterations"] = root.projection_iterations;
  summary["budget_exhausted"] = root.budget_exhausted;
  out.push_back(std::move(summary));
  return out;
}

std::string histogram_csv(const std::vector<double>& values, double lo,
                          double hi, double width, const std::string& label) {
  const int bins = static_cast<int>(std::lround((hi - lo) / width));
  std::vector<int> counts(bins, 0);
  for (double v : values) {
    int k = static_cast<int>(std::floor((v - lo) / width + 1e-9));
    counts[std::clamp(k, 0, bins - 1)] += 1;
  }
  std::ostringstream ss;
  ss << label << "_lo," << label << "_hi,count\n";
  ss.setf(std::ios::fixed);
  ss.precision(2);
  for (int k = 0; k < bins; ++k) {
    ss << lo + k * width << ',' << lo + (k + 1) * width << ',' << counts[k] << '\n';
  }
  return ss.str();
}

namespace {

int run_corpus(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::pair<std::string, Miqcp>> items;
  const bool all = cfg.kind == "all";
  if (!all && cfg.kind != "pointpack" && cfg.kind != "ordering" && cfg.kind != "random") {
    throw CLI::ValidationError("--kind", "unknown corpus kind " + cfg.kind);
  }
  auto name = [](const std::string& kind, int k) {
    std::ostringstream ss;
    ss << kind << '_';
    ss.width(3);
    ss.fill('0');
    ss << k;
    return ss.str();
  };
  for (int k = 0; k < cfg.count; ++k) {
    const std::uint64_t seed = cfg.seed * 1000003ULL + static_cast<std::uint64_t>(k);
    if (all || cfg.kind == "pointpack") {
      items.emplace_back(name("pointpack", k), pointpack(cfg.points, seed));
    }
    if (all || cfg.kind == "ordering") {
      items.emplace_back(name("ordering", k), ordering_instance(seed));
    }
    if (all || cfg.kind == "random") {
      RandomParams rp;
      rp.n = cfg.vars;
      rp.m = cfg.rows;
      rp.density = cfg.density;
      rp.integers = cfg.integers;
      rp.seed = seed;
      items.emplace_back(name("random", k), random_miqcp(rp));
    }
  }
  if (!cfg.out.empty()) {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) throw IoError("cannot create " + cfg.out);
  }
  for (const auto& [stem, p] : items) {
    const json doc = to_json(p);
    json rec{{"record", "corpus"}, {"name", stem}, {"n", p.n}, {"m", p.m()}};
    if (cfg.out.empty()) {
      rec["instance"] = doc;
    } else {
      const fs::path file = fs::path(cfg.out) / (stem + ".json");
      write_file(file, doc.dump() + "\n");
      rec["file"] = file.filename().string();
    }
    out << rec.dump() << '\n';
  }
  return kOk;
}

int run_instances(const RunConfig& cfg, std::ostream& out) {
  const std::vector<fs::path> files = instance_files(cfg.instance);
  std::vector<double> hist_values;
  bool limit_hit = false;
  for (const fs::path& file : files) {
    const Miqcp p = parse_problem(read_file(file));
    const std::string stem = file.filename().string();
    if (cfg.subcommand == "solve") {
      SolveResult res;
      json r = solve_record(p, cfg, &res);
      r["instance"] = stem;
      out << r.dump() << '\n';
      limit_hit |= res.status == SolveStatus::limit;
    } else if (cfg.subcommand == "root-analyze") {
      json r = root_analyze_record(p, cfg);
      r["instance"] = stem;
      if (!r.value("excluded", true)) hist_values.push_back(r["gc"].get<double>());
      out << r.dump() << '\n';
    } else {
      for (json& r : project_records(p, cfg)) {
        r["instance"] = stem;
        if (r["record"] == "project-summary" && r.contains("psi")) {
          hist_values.push_back(r["psi"].get<double>());
        }
        out << r.dump() << '\n';
      }
    }
  }
  if (!cfg.csv.empty()) {
    if (cfg.subcommand == "root-analyze") {
      write_file(cfg.csv, histogram_csv(hist_values, -1.0, 1.0, 0.05, "gc"));
    } else if (cfg.subcommand == "project") {
      write_file(cfg.csv, histogram_csv(hist_values, 0.0, 1.0, 0.05, "psi"));
    }
  }
  return limit_hit ? kLimit : kOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.subcommand == "corpus") {
      return run_corpus(cfg, out);
    }
    if (!cfg.out.empty()) {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw IoError("cannot write " + cfg.out);
      const int code = run_instances(cfg, file);
      file.flush();
      if (!file) throw IoError("cannot write " + cfg.out);
      return code;
    }
    return run_instances(cfg, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return kParse;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Projected relaxations for bilinear terms", "bilinproj"};
  app.require_subcommand(1);
  RunConfig cfg;
  CLI::App* solve_cmd = app.add_subcommand("solve", "branch-and-bound solve");
  CLI::App* root_cmd = app.add_subcommand("root-analyze", "root bounds with and without projections");
  CLI::App* project_cmd = app.add_subcommand("project", "per-term projection report");
  CLI::App* corpus_cmd = app.add_subcommand("corpus", "generate instances");
  for (CLI::App* sub : {solve_cmd, root_cmd, project_cmd, corpus_cmd}) add_common(sub, cfg);
  root_cmd->add_option("--primal", cfg.primal, "reference primal bound");
  corpus_cmd->add_option("--kind", cfg.kind, "pointpack, ordering, random or all");
  corpus_cmd->add_option("--count", cfg.count, "instances per kind")->check(CLI::NonNegativeNumber);
  corpus_cmd->add_option("--points", cfg.points, "points per pointpack instance")->check(CLI::Range(2, 50));
  corpus_cmd->add_option("--vars", cfg.vars, "variables per random instance")->check(CLI::Range(1, 200));
  corpus_cmd->add_option("--rows", cfg.rows, "rows per random instance")->check(CLI::NonNegativeNumber);
  corpus_cmd->add_option("--density", cfg.density, "product density")->check(CLI::Range(0.0, 1.0));
  corpus_cmd->add_option("--integers", cfg.integers, "integer variables")->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kParse;
  }
  for (CLI::App* sub : {solve_cmd, root_cmd, project_cmd, corpus_cmd}) {
    if (sub->parsed()) cfg.subcommand = sub->get_name();
  }
  return run(cfg, out, err);
}

}  // namespace bilin::cli
