#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mclfem/model.hpp"
#include "mclfem/scheme.hpp"
#include "mclfem/time_integrator.hpp"

namespace mclfem {

struct MeshConfig {
  int dim = 1;
  int cells = 64;  // per axis
  Point extent{1.0, 1.0};

  bool operator==(const MeshConfig&) const = default;
};

/// Named initial condition with numeric parameters. Parameters not given
/// take the documented per-condition defaults; unknown names are errors.
struct InitialConditionConfig {
  std::string name = "sine_wave";
  std::map<std::string, double> params;

  bool operator==(const InitialConditionConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "output";
  bool csv = true;
  bool vtk = false;
  bool edges = false;  // per-edge dump of the final state's limiter data

  bool operator==(const OutputConfig&) const = default;
};

/// Checks evaluated after a run or study. Unset entries are disabled.
struct AssertionConfig {
  std::optional<double> conservation;       // max relative drift of every total
  std::optional<std::vector<double>> bounds;  // [lo, hi], scalar models, tolerance 1e-12
  std::optional<double> entropy_decay;      // per-step increase / |eta(0)|
  std::optional<double> entropy_residual;   // max per-edge residual
  bool positivity = false;                  // rho > 0 and p > 0 at every snapshot
  std::optional<double> min_eoc_l1;         // convergence studies, every consecutive pair
  std::optional<double> max_eoc_l1;
  std::optional<double> min_slope_r1;       // consistency studies
  std::optional<double> min_slope_r2;
  std::optional<double> min_slope_r3;
  bool cesaro_decreasing = false;           // cesaro studies

  bool operator==(const AssertionConfig&) const = default;
};

struct StudyConfig {
  std::vector<int> levels;  // cells per axis
  int probe_points = 1024;  // per axis, cesaro studies

  bool operator==(const StudyConfig&) const = default;
};

struct RunConfig {
  ModelSpec model = ModelSpec::advection(1, {1.0, 0.0});
  MeshConfig mesh;
  LimiterConfig limiter;
  TimeIntegratorConfig integrator;
  InitialConditionConfig initial_condition;
  AdmissibilityParams admissibility;
  OutputConfig output;
  AssertionConfig assertions;
  StudyConfig study;
  std::uint64_t seed = 0;
  int threads = 1;

  bool operator==(const RunConfig&) const = default;
};

/// YAML subset described in the README. Throws ConfigError: syntax errors carry
/// the line number, semantic errors the dotted key path.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Emits every field, so parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace mclfem
