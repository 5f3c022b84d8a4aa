#pragma once

#include <vector>

#include "mclfem/state.hpp"

namespace mclfem {

struct StepRecord {
  int step = 0;
  double t = 0.0;       // time at the end of the step
  double dt = 0.0;
  double cfl_dt = 0.0;  // unclipped step-start CFL bound
  int retries = 0;
  double max_entropy_residual = 0.0;  // over all stage evaluations of the step
};

/// State plus the edge quantities needed to time-integrate consistency terms.
struct StepSample {
  double t = 0.0;
  StateField u;
  std::vector<double> d;
  std::vector<double> alpha;
};

struct Trajectory {
  std::vector<StateField> snapshots;  // strictly increasing times
  std::vector<StepRecord> steps;
  std::vector<StepSample> samples;    // filled only when requested
};

}  // namespace mclfem
