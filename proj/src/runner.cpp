#include "mclfem/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "format.hpp"
#include "mclfem/errors.hpp"
#include "mclfem/initial_conditions.hpp"
#include "mclfem/io.hpp"

namespace mclfem {

namespace fs = std::filesystem;
using detail::fmt17;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

std::string indexed(const char* stem, int k, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d.%s", stem, k, ext);
  return buf;
}

void prefix_all(std::vector<AssertionResult>& out, std::vector<AssertionResult> in,
                const std::string& prefix) {
  for (auto& a : in) {
    a.name = prefix + a.name;
    out.push_back(std::move(a));
  }
}

}  // namespace

bool all_passed(std::span<const AssertionResult> results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

RunOutcome run_simulation(const RunConfig& config, std::optional<int> cells,
                          const StageObserver& observer) {
  RunOutcome o;
  o.mesh = build_uniform_periodic_mesh(config.mesh.dim, cells.value_or(config.mesh.cells),
                                       config.mesh.extent);
  o.ops = assemble_fe_operators(o.mesh);
  o.initial = interpolate_initial_condition(o.mesh, config.model, config.initial_condition,
                                            config.admissibility, config.seed);
  LimiterConfig limiter = config.limiter;
  limiter.threads = config.threads;
  o.result = integrate(o.ops, config.model, o.initial, limiter, config.admissibility,
                       config.integrator, observer);
  return o;
}

std::vector<AssertionResult> evaluate_run_assertions(const RunConfig& config,
                                                     const RunOutcome& outcome) {
  std::vector<AssertionResult> out;
  const auto& a = config.assertions;
  const auto& rec = outcome.result.diagnostics;
  const ModelSpec& model = config.model;
  if (a.conservation) {
    double worst = 0.0;
    for (int k = 0; k < model.components(); ++k) worst = std::max(worst, rec.max_relative_drift(k));
    out.push_back({"conservation", worst <= *a.conservation,
                   "max relative drift " + fmt17(worst) + " (limit " + fmt17(*a.conservation) + ")"});
  }
  if (a.bounds) {
    const double lo = (*a.bounds)[0], hi = (*a.bounds)[1];
    double violation = 0.0;
    for (std::size_t n = 0; n < rec.size(); ++n)
      for (int k = 0; k < model.components(); ++k)
        violation = std::max({violation, lo - rec.min[n][k], rec.max[n][k] - hi});
    out.push_back({"bounds", violation <= 1e-12,
                   "worst violation " + fmt17(violation) + " of [" + fmt17(lo) + ", " + fmt17(hi) + "]"});
  }
  if (a.entropy_decay) {
    const double scale = std::abs(rec.total_entropy.front());
    const double inc = rec.max_entropy_increase();
    out.push_back({"entropy_decay", inc <= *a.entropy_decay * scale,
                   "max per-step increase " + fmt17(inc) + " vs " + fmt17(*a.entropy_decay * scale)});
  }
  if (a.entropy_residual) {
    double worst = -std::numeric_limits<double>::infinity();
    for (double r : rec.max_entropy_residual) worst = std::max(worst, r);
    out.push_back({"entropy_residual", worst <= *a.entropy_residual,
                   "max edge residual " + fmt17(worst)});
  }
  if (a.positivity) {
    if (model.kind != ModelKind::euler) throw ConfigError("assertions.positivity: needs Euler");
    double min_rho = std::numeric_limits<double>::infinity();
    double min_p = std::numeric_limits<double>::infinity();
    auto scan = [&](const StateField& u) {
      for (const auto& s : u.values) {
        min_rho = std::min(min_rho, s[0]);
        if (s[0] > 0.0) min_p = std::min(min_p, pressure(model, s));
      }
    };
    scan(outcome.initial);
    for (const auto& s : outcome.result.trajectory.snapshots) scan(s);
    for (const auto& m : rec.min) min_rho = std::min(min_rho, m[0]);
    out.push_back({"positivity", min_rho > 0.0 && min_p > 0.0,
                   "min density " + fmt17(min_rho) + ", min pressure (snapshots) " + fmt17(min_p)});
  }
  return out;
}

void write_run_outputs(const RunConfig& config, const RunOutcome& outcome,
                       const std::string& directory) {
  ensure_dir(directory);
  const fs::path dir(directory);
  const auto& traj = outcome.result.trajectory;
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    if (config.output.csv)
      write_field_snapshot(outcome.mesh, config.model, traj.snapshots[k],
                           (dir / indexed("snapshot", static_cast<int>(k), "csv")).string(),
                           SnapshotFormat::csv);
    if (config.output.vtk)
      write_field_snapshot(outcome.mesh, config.model, traj.snapshots[k],
                           (dir / indexed("snapshot", static_cast<int>(k), "vtk")).string(),
                           SnapshotFormat::vtk_legacy_ascii);
  }
  {
    auto out = open_out(dir / "diagnostics.csv");
    write_diagnostics_csv(outcome.result.diagnostics, config.model, out);
  }
  {
    auto out = open_out(dir / "steps.csv");
    write_step_log_csv(traj, out);
  }
  if (config.output.edges) {
    LimiterConfig limiter = config.limiter;
    limiter.threads = config.threads;
    const StateField& last = traj.snapshots.back();
    const RhsEvaluation eval =
        semidiscrete_rhs(outcome.ops, config.model, last, limiter, config.admissibility);
    auto out = open_out(dir / "edges.csv");
    write_edge_csv(outcome.ops, config.model, eval, out);
  }
}

ConvergenceStudy run_convergence(const RunConfig& config, std::span<const int> levels) {
  const double t_end = config.integrator.t_end;
  const auto reference =
      exact_solution(config.model, config.initial_condition, config.mesh.extent, t_end);
  if (!reference)
    throw ConfigError("convergence: no exact solution for '" + config.initial_condition.name +
                      "' with this model at t_end = " + fmt17(t_end));
  ConvergenceStudy study;
  std::vector<double> h;
  std::vector<ErrorNorms> errors;
  for (int cells : levels) {
    const RunOutcome o = run_simulation(config, cells);
    study.levels.push_back(cells);
    h.push_back(o.mesh.h_max);
    errors.push_back(error_norms(o.mesh, o.result.trajectory.snapshots.back(), *reference));
    prefix_all(study.assertions, evaluate_run_assertions(config, o),
               "[cells=" + std::to_string(cells) + "] ");
  }
  study.table = make_eoc_table(h, errors);
  const auto& a = config.assertions;
  if (a.min_eoc_l1 || a.max_eoc_l1) {
    for (std::size_t k = 1; k < study.table.rows.size(); ++k) {
      const double eoc = study.table.rows[k].eoc_l1;
      const bool ok = (!a.min_eoc_l1 || eoc >= *a.min_eoc_l1) && (!a.max_eoc_l1 || eoc <= *a.max_eoc_l1);
      study.assertions.push_back({"eoc_l1[" + std::to_string(study.levels[k - 1]) + "->" +
                                      std::to_string(study.levels[k]) + "]",
                                  ok, "EOC " + fmt17(eoc)});
    }
  }
  return study;
}

ConsistencyStudy run_consistency(const RunConfig& config, std::span<const int> levels) {
  RunConfig cfg = config;
  cfg.integrator.record_step_samples = true;
  const TestFunction phi =
      cosine_bump_test_function(cfg.mesh.dim, cfg.mesh.extent, cfg.integrator.t_end);
  ConsistencyStudy study;
  study.report.test_function = phi.name;
  for (int cells : levels) {
    const RunOutcome o = run_simulation(cfg, cells);
    study.levels.push_back(cells);
    study.report.levels.push_back(
        consistency_errors(o.mesh, o.ops, cfg.model, o.result.trajectory.samples, phi));
    prefix_all(study.assertions, evaluate_run_assertions(cfg, o),
               "[cells=" + std::to_string(cells) + "] ");
  }
  study.report.fit_slopes();
  const auto& a = config.assertions;
  auto slope = [&](const char* name, const std::optional<double>& limit, double value) {
    if (limit) study.assertions.push_back({name, value >= *limit, "slope " + fmt17(value)});
  };
  slope("slope_r1", a.min_slope_r1, study.report.slope_r1);
  slope("slope_r2", a.min_slope_r2, study.report.slope_r2);
  slope("slope_r3", a.min_slope_r3, study.report.slope_r3);
  return study;
}

CesaroStudy run_cesaro(const RunConfig& config, std::span<const int> levels) {
  CesaroStudy study;
  study.grid = make_probe_grid(config.mesh.dim, config.study.probe_points, config.mesh.extent);
  for (int cells : levels) {
    const RunOutcome o = run_simulation(config, cells);
    study.levels.push_back(cells);
    study.fields.push_back(probe_field(o.mesh, o.result.trajectory.snapshots.back(), study.grid));
    prefix_all(study.assertions, evaluate_run_assertions(config, o),
               "[cells=" + std::to_string(cells) + "] ");
  }
  study.differences = cesaro_differences(study.fields);
  if (config.assertions.cesaro_decreasing) {
    bool ok = true;
    for (std::size_t k = 1; k < study.differences.size(); ++k)
      ok = ok && study.differences[k] < study.differences[k - 1];
    std::string detail;
    for (double d : study.differences) detail += (detail.empty() ? "" : ", ") + fmt17(d);
    study.assertions.push_back({"cesaro_decreasing", ok, "differences " + detail});
  }
  return study;
}

void write_convergence_outputs(const ConvergenceStudy& study, const std::string& directory) {
  ensure_dir(directory);
  auto out = open_out(fs::path(directory) / "eoc.csv");
  write_eoc_csv(study.table, out);
}

void write_consistency_outputs(const ConsistencyStudy& study, const std::string& directory) {
  ensure_dir(directory);
  auto out = open_out(fs::path(directory) / "consistency.csv");
  write_consistency_csv(study.report, out);
}

void write_cesaro_outputs(const CesaroStudy& study, const std::string& directory) {
  ensure_dir(directory);
  auto out = open_out(fs::path(directory) / "cesaro.csv");
  out << "N,cells,l1_difference\n";
  for (std::size_t k = 0; k < study.differences.size(); ++k)
    out << k + 2 << ',' << study.levels[k + 1] << ',' << fmt17(study.differences[k]) << '\n';
}

}  // namespace mclfem
