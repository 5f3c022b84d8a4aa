#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mclfem/diagnostics.hpp"
#include "mclfem/scheme.hpp"
#include "mclfem/trajectory.hpp"

namespace mclfem {

enum class TimeMethod { forward_euler, ssp_rk2, ssp_rk3 };

std::string to_string(TimeMethod method);

struct TimeIntegratorConfig {
  TimeMethod method = TimeMethod::ssp_rk3;
  double cfl = 0.5;  // nu in (0, 1]
  double t_end = 1.0;
  std::vector<double> snapshot_times;  // t_end is always appended
  int max_steps = 1000000;
  bool stage_admissibility_check = true;
  double max_dt = std::numeric_limits<double>::infinity();  // used when all d_ij vanish
  bool record_step_samples = false;  // keep (u, d, alpha) at every accepted step
  double entropy_offset = 0.0;

  void validate() const;
  bool operator==(const TimeIntegratorConfig&) const = default;
};

/// a_i = sum_{j != i} 2 d_ij
std::vector<double> viscosity_row_sums(const FeOperators& ops, std::span<const double> d);

/// nu * min_i m_i / a_i; max_dt when every a_i vanishes.
double compute_cfl_dt(const FeOperators& ops, std::span<const double> d, double cfl,
                      double max_dt = std::numeric_limits<double>::infinity());

/// True when dt a_i <= m_i at every node (up to round-off).
bool satisfies_cfl(const FeOperators& ops, std::span<const double> d, double dt);

/// u_i + dt du_i / m_i. With `check` set, throws StageError naming the node, its
/// state and the violated bound.
StateField ssp_stage(const FeOperators& ops, const ModelSpec& model, const StateField& u,
                     double dt, const RhsEvaluation& rhs, bool check,
                     const AdmissibilityParams& params);

struct IntegrationResult {
  Trajectory trajectory;
  DiagnosticsRecord diagnostics;
};

/// Called with every stage state that enters a convex combination, including
/// the accepted end-of-step state.
using StageObserver = std::function<void(const StateField&)>;

IntegrationResult integrate(const FeOperators& ops, const ModelSpec& model, const StateField& u0,
                            const LimiterConfig& limiter, const AdmissibilityParams& params,
                            const TimeIntegratorConfig& config,
                            const StageObserver& observer = {});

}  // namespace mclfem
