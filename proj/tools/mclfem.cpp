// Command-line driver: single runs, multi-level studies and operator checks.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "mclfem/config.hpp"
#include "mclfem/errors.hpp"
#include "mclfem/fe_operators.hpp"
#include "mclfem/mesh.hpp"
#include "mclfem/runner.hpp"

namespace {

using namespace mclfem;

struct Options {
  std::string config_path;
  std::string levels;
  std::string output_dir;
  int threads = 0;
  long long seed = -1;
  int dim = 1;
  int cells = 64;
};

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 4) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("--levels: '" + item + "' is not an integer >= 4");
    }
  }
  return out;
}

RunConfig load(const Options& opt) {
  if (opt.config_path.empty()) throw ConfigError("--config is required for this subcommand");
  RunConfig cfg = load_config(opt.config_path);
  if (opt.threads > 0) cfg.threads = cfg.limiter.threads = opt.threads;
  if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
  if (!opt.output_dir.empty()) cfg.output.directory = opt.output_dir;
  return cfg;
}

std::vector<int> study_levels(const Options& opt, const RunConfig& cfg) {
  std::vector<int> levels = opt.levels.empty() ? cfg.study.levels : parse_levels(opt.levels);
  if (levels.size() < 2) throw ConfigError("study needs at least two levels (--levels or study.levels)");
  return levels;
}

int report(const std::vector<AssertionResult>& results) {
  for (const auto& r : results)
    std::cout << (r.passed ? "ok   " : "FAIL ") << r.name << ": " << r.detail << '\n';
  return all_passed(results) ? 0 : 1;
}

int cmd_run(const Options& opt) {
  RunConfig cfg = load(opt);
  if (!opt.levels.empty()) {
    const auto levels = parse_levels(opt.levels);
    if (levels.size() != 1) throw ConfigError("run: --levels takes a single cell count");
    cfg.mesh.cells = levels.front();
  }
  const RunOutcome o = run_simulation(cfg);
  write_run_outputs(cfg, o, cfg.output.directory);
  std::cout << "steps " << o.result.trajectory.steps.size() << ", snapshots "
            << o.result.trajectory.snapshots.size() << ", output " << cfg.output.directory << '\n';
  return report(evaluate_run_assertions(cfg, o));
}

int cmd_convergence(const Options& opt) {
  const RunConfig cfg = load(opt);
  const ConvergenceStudy s = run_convergence(cfg, study_levels(opt, cfg));
  write_convergence_outputs(s, cfg.output.directory);
  for (std::size_t k = 0; k < s.table.rows.size(); ++k) {
    const auto& r = s.table.rows[k];
    std::cout << "cells " << s.levels[k] << "  L1 " << r.l1 << "  EOC " << r.eoc_l1 << '\n';
  }
  return report(s.assertions);
}

int cmd_consistency(const Options& opt) {
  const RunConfig cfg = load(opt);
  const ConsistencyStudy s = run_consistency(cfg, study_levels(opt, cfg));
  write_consistency_outputs(s, cfg.output.directory);
  for (std::size_t k = 0; k < s.report.levels.size(); ++k) {
    const auto& e = s.report.levels[k];
    std::cout << "cells " << s.levels[k] << "  R1 " << e.R1 << "  R2 " << e.R2 << "  R3 " << e.R3
              << '\n';
  }
  std::cout << "slopes " << s.report.slope_r1 << ' ' << s.report.slope_r2 << ' '
            << s.report.slope_r3 << '\n';
  return report(s.assertions);
}

int cmd_cesaro(const Options& opt) {
  const RunConfig cfg = load(opt);
  const CesaroStudy s = run_cesaro(cfg, study_levels(opt, cfg));
  write_cesaro_outputs(s, cfg.output.directory);
  for (std::size_t k = 0; k < s.differences.size(); ++k)
    std::cout << "N " << k + 2 << "  |Avg_N - Avg_N-1|_L1 " << s.differences[k] << '\n';
  return report(s.assertions);
}

int cmd_check_operators(const Options& opt) {
  int dim = opt.dim, cells = opt.cells;
  Point extent{1.0, 1.0};
  if (!opt.config_path.empty()) {
    const RunConfig cfg = load(opt);
    dim = cfg.mesh.dim;
    cells = cfg.mesh.cells;
    extent = cfg.mesh.extent;
  }
  const Mesh mesh = build_uniform_periodic_mesh(dim, cells, extent);
  validate_mesh(mesh);
  const FeOperators ops = assemble_fe_operators(mesh);
  const IdentityReport r = verify_operator_identities(ops);
  std::cout << "nodes " << ops.n_nodes << ", edges " << ops.num_edges() << ", h_max "
            << mesh.h_max << '\n';
  const std::vector<AssertionResult> checks{
      {"c_ii = 0", r.grad_diagonal_ok(), std::to_string(r.grad_diagonal)},
      {"c_ij + c_ji = 0", r.grad_antisymmetry_ok(), std::to_string(r.grad_antisymmetry)},
      {"sum_j c_ij = 0", r.grad_row_sum_ok(), std::to_string(r.grad_row_sum)},
      {"m_i = sum_j m_ij", r.mass_row_sum_ok(), std::to_string(r.mass_row_sum)},
      {"m_i > 0", r.positivity_ok(), std::to_string(r.min_lumped_mass)}};
  return report(checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone convex limiting finite element solver"};
  app.require_subcommand(1);
  Options opt;
  auto common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", opt.config_path, "YAML run configuration");
    if (config_required) c->required();
    sub->add_option("--levels", opt.levels, "comma-separated cells per axis, e.g. 64,128,256");
    sub->add_option("--output-dir", opt.output_dir, "directory for CSV/VTK output");
    sub->add_option("--threads", opt.threads, "worker threads for the edge loops")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "seed for randomized initial data")->check(CLI::NonNegativeNumber);
  };
  auto* run = app.add_subcommand("run", "single simulation");
  auto* conv = app.add_subcommand("convergence", "EOC table against the exact solution");
  auto* cons = app.add_subcommand("consistency", "R1/R2/R3 consistency terms across levels");
  auto* ces = app.add_subcommand("cesaro", "Cesaro averages across levels");
  auto* chk = app.add_subcommand("check-operators", "assemble a mesh and verify identities");
  for (auto* s : {run, conv, cons, ces}) common(s, true);
  common(chk, false);
  chk->add_option("--dim", opt.dim, "mesh dimension (without --config)")->check(CLI::Range(1, 2));
  chk->add_option("--cells", opt.cells, "cells per axis (without --config)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return cmd_run(opt);
    if (conv->parsed()) return cmd_convergence(opt);
    if (cons->parsed()) return cmd_consistency(opt);
    if (ces->parsed()) return cmd_cesaro(opt);
    return cmd_check_operators(opt);
  } catch (const mclfem::Error& e) {
    std::cerr << nlohmann::json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
}
