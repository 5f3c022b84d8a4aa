#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mclfem/config.hpp"
#include "mclfem/diagnostics.hpp"
#include "mclfem/fe_operators.hpp"
#include "mclfem/mesh.hpp"
#include "mclfem/time_integrator.hpp"

namespace mclfem {

struct AssertionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

bool all_passed(std::span<const AssertionResult> results);

struct RunOutcome {
  Mesh mesh;
  FeOperators ops;
  StateField initial;
  IntegrationResult result;
};

/// Builds the mesh (cells per axis from the config unless overridden),
/// interpolates the initial condition and integrates to t_end.
RunOutcome run_simulation(const RunConfig& config, std::optional<int> cells = std::nullopt,
                          const StageObserver& observer = {});

/// Run-level checks enabled in config.assertions (conservation, bounds,
/// entropy decay and residual, positivity).
std::vector<AssertionResult> evaluate_run_assertions(const RunConfig& config,
                                                     const RunOutcome& outcome);

/// snapshot_NNNN.{csv,vtk}, diagnostics.csv, steps.csv and optionally edges.csv.
void write_run_outputs(const RunConfig& config, const RunOutcome& outcome,
                       const std::string& directory);

struct ConvergenceStudy {
  std::vector<int> levels;
  EocTable table;
  std::vector<AssertionResult> assertions;
};

/// Errors at t_end against the exact solution of the configured problem.
/// Throws ConfigError when no exact solution is available.
ConvergenceStudy run_convergence(const RunConfig& config, std::span<const int> levels);

struct ConsistencyStudy {
  std::vector<int> levels;
  ConsistencyReport report;
  std::vector<AssertionResult> assertions;
};

/// R1, R2, R3 with the built-in cosine test function supported on [0, t_end].
ConsistencyStudy run_consistency(const RunConfig& config, std::span<const int> levels);

struct CesaroStudy {
  std::vector<int> levels;
  ProbeGrid grid;
  std::vector<ProbedField> fields;  // final states probed onto the shared grid
  std::vector<double> differences;  // ||Avg_N - Avg_{N-1}||_L1, N = 2..
  std::vector<AssertionResult> assertions;
};

CesaroStudy run_cesaro(const RunConfig& config, std::span<const int> levels);

void write_convergence_outputs(const ConvergenceStudy& study, const std::string& directory);
void write_consistency_outputs(const ConsistencyStudy& study, const std::string& directory);
void write_cesaro_outputs(const CesaroStudy& study, const std::string& directory);

}  // namespace mclfem
