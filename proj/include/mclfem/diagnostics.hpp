#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mclfem/fe_operators.hpp"
#include "mclfem/mesh.hpp"
#include "mclfem/model.hpp"
#include "mclfem/riemann.hpp"
#include "mclfem/trajectory.hpp"

namespace mclfem {

// ---- instantaneous reductions ----

/// sum_i m_i (eta(u_i) + offset)
double total_entropy(const FeOperators& ops, const ModelSpec& model, const StateField& u,
                     double offset = 0.0);

/// sum_i m_i u_i per component
StateVector conserved_totals(const FeOperators& ops, const StateField& u);

/// sum_i sum_{j in N_i, j != i} |c_ij| |u_j - u_i|^2
double bv_integrand(const FeOperators& ops, const StateField& u);

StateVector field_min(const StateField& u);
StateVector field_max(const StateField& u);

// ---- per-step record ----

struct DiagnosticsRecord {
  std::vector<double> times;
  std::vector<double> dts;  // step that led to times[k]; 0 for the initial sample
  std::vector<double> total_entropy;
  std::vector<StateVector> conserved_totals;
  std::vector<StateVector> absolute_totals;  // sum_i m_i |u_i| per component
  std::vector<double> bv_integrand;
  double bv_time_integral = 0.0;  // trapezoid over the accepted steps
  std::vector<StateVector> min;
  std::vector<StateVector> max;
  std::vector<int> density_ok;  // rho >= floor (always 1 for scalar models)
  std::vector<int> energy_ok;   // E <= cap (always 1 for scalar models)
  std::vector<double> max_entropy_residual;  // worst edge residual of the step's evaluations

  std::size_t size() const { return times.size(); }

  /// max_t |total(t) - total(0)| / scale with scale = max(|total(0)|, max_t sum_i m_i |u_i|),
  /// so components whose total vanishes are measured against their size.
  double max_relative_drift(int component) const;

  /// max over steps of eta(t_{n+1}) - eta(t_n)
  double max_entropy_increase() const;
};

/// Samples the reductions at the initial state and after every accepted step.
class DiagnosticsAccumulator {
 public:
  DiagnosticsAccumulator(const FeOperators& ops, const ModelSpec& model,
                         const AdmissibilityParams& params, double entropy_offset = 0.0);

  void observe(const StateField& u, double dt, double max_entropy_residual = 0.0);

  const DiagnosticsRecord& record() const { return record_; }
  DiagnosticsRecord take() { return std::move(record_); }

 private:
  const FeOperators* ops_;
  ModelSpec model_;
  AdmissibilityParams params_;
  double offset_;
  DiagnosticsRecord record_;
};

void write_diagnostics_csv(const DiagnosticsRecord& record, const ModelSpec& model,
                           std::ostream& out);

struct WeakBv {
  std::vector<double> snapshot_times;
  std::vector<double> snapshot_integrand;
  double time_integral = 0.0;  // trapezoid over every accepted step
};

WeakBv weak_bv_functional(const FeOperators& ops, const Trajectory& trajectory,
                          const DiagnosticsRecord& record);

// ---- Lax-Wendroff consistency ----

/// Space-periodic test function with compact support in time.
struct TestFunction {
  std::string name;
  double t_end = 1.0;
  std::function<double(const Point&, double)> value;
  std::function<double(const Point&, double)> time_derivative;
};

/// cos(2 pi x_1 / L_1) [cos(2 pi x_2 / L_2)] sin^4(pi t / T): C^2 in time, vanishing
/// with its first two derivatives at t = 0 and t = T.
TestFunction cosine_bump_test_function(int dim, const Point& extent, double t_end);
TestFunction zero_test_function(double t_end);

struct ConsistencyEntry {
  double h = 0.0;
  StateVector r1, r2, r3;  // signed, per component
  double R1 = 0.0, R2 = 0.0, R3 = 0.0;  // max over components of |r|
};

struct ConsistencyReport {
  std::string test_function;
  std::vector<ConsistencyEntry> levels;
  // Least-squares slopes of log R vs log h; NaN when a level has R == 0.
  double slope_r1 = 0.0, slope_r2 = 0.0, slope_r3 = 0.0;

  void fit_slopes();
};

/// R1: lumping defect, R2: group interpolation defect of the flux (degree-5
/// quadrature), R3: limiter term from the recorded alpha and d. Time integrals
/// use the trapezoid rule over the samples. Throws ConfigError when phi does
/// not vanish at the first and last sample.
ConsistencyEntry consistency_errors(const Mesh& mesh, const FeOperators& ops,
                                    const ModelSpec& model,
                                    std::span<const StepSample> samples,
                                    const TestFunction& phi);

void write_consistency_csv(const ConsistencyReport& report, std::ostream& out);

/// Least-squares slope of log|y| against log x.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

// ---- errors against references ----

using ReferenceSolution = std::function<StateVector(const Point&)>;

struct ErrorNorms {
  StateVector l1, l2, linf;
  double l1_total = 0.0;    // sum over components
  double l2_total = 0.0;    // sqrt of summed squares
  double linf_total = 0.0;  // max over components
};

/// Degree-5 quadrature of u_h - reference over every element. The reference
/// is called with coordinates wrapped into the periodic box.
ErrorNorms error_norms(const Mesh& mesh, const StateField& u, const ReferenceSolution& reference);

/// Conserved state of the exact Riemann solution at x / t = xi.
StateVector exact_riemann_reference(const ModelSpec& model, const ExactRiemannSolver& solver,
                                    double xi);

struct EocRow {
  double h = 0.0;
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
  double eoc_l1 = 0.0, eoc_l2 = 0.0, eoc_linf = 0.0;  // NaN on the first row
};

struct EocTable {
  std::vector<EocRow> rows;
};

/// Throws ConfigError unless h is strictly decreasing.
EocTable make_eoc_table(std::span<const double> h, std::span<const ErrorNorms> errors);

void write_eoc_csv(const EocTable& table, std::ostream& out);

// ---- Cesaro averages ----

struct ProbeGrid {
  int dim = 1;
  std::array<int, 2> counts{1, 1};
  Point extent{};
  std::vector<Point> points;  // cell centres, x fastest
  double cell_volume = 0.0;
};

ProbeGrid make_probe_grid(int dim, int per_axis, const Point& extent);

struct ProbedField {
  std::array<int, 2> counts{0, 0};
  double cell_volume = 0.0;
  std::vector<StateVector> values;
};

/// P1 evaluation of u_h at the probe points.
ProbedField probe_field(const Mesh& mesh, const StateField& u, const ProbeGrid& grid);

/// Pointwise mean. Throws ConfigError on an empty list or grid mismatch.
ProbedField cesaro_average(std::span<const ProbedField> fields);

/// Entry k (k = 0..n-2) is || Avg_{k+2} - Avg_{k+1} ||_{L1}.
std::vector<double> cesaro_differences(std::span<const ProbedField> fields);

double l1_distance(const ProbedField& a, const ProbedField& b);

// ---- Euler non-degeneracy ----

struct NondegeneracySample {
  double t = 0.0;
  double min_density = 0.0;
  double max_energy = 0.0;
  double min_pressure = 0.0;
  double max_velocity_sq = 0.0;
  bool density_ok = false;
  bool energy_ok = false;
  bool velocity_ok = false;
};

struct NondegeneracyReport {
  double velocity_bound_sq = 0.0;  // 2 E_cap / rho_floor
  std::vector<NondegeneracySample> samples;

  bool satisfied() const;
};

/// Throws ConfigError for scalar models.
NondegeneracyReport nondegeneracy_monitor(const ModelSpec& model,
                                          std::span<const StateField> snapshots,
                                          const AdmissibilityParams& params);

/// d_h(v, v) / (h_max |v|^2_{H1}). Throws DimensionError for a constant field.
double seminorm_ratio(const Mesh& mesh, const FeOperators& ops, std::span<const double> v,
                      int components);

}  // namespace mclfem
