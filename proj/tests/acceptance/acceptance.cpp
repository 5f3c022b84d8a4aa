// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
// Exit status is the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mclfem/config.hpp"
#include "mclfem/diagnostics.hpp"
#include "mclfem/fe_operators.hpp"
#include "mclfem/initial_conditions.hpp"
#include "mclfem/mesh.hpp"
#include "mclfem/runner.hpp"
#include "mclfem/time_integrator.hpp"

using namespace mclfem;

namespace {

constexpr double kIdentityTol = 1e-13;
constexpr double kConservationTol = 1e-11;
constexpr double kBoundTol = 1e-12;
constexpr double kEntropyResidualTol = 1e-12;
constexpr double kEntropyIncreaseTol = 1e-10;  // relative to |eta(0)|
constexpr double kBvGrowthFactor = 2.0;
constexpr double kSeminormSpread = 10.0;
constexpr double kMinSlopeR1 = 1.3, kMinSlopeR2 = 0.4, kMinSlopeR3 = 0.4;
constexpr double kMinSlopeR3Synthetic = 1.3;
constexpr double kMinEocMcl = 1.8;
constexpr double kLowOrderEocLo = 0.6, kLowOrderEocHi = 1.1;
constexpr int kCflSteps = 50;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + num(x);
  return "[" + s + "]";
}

// ---- 1 ----
Outcome operator_identities() {
  double worst = 0.0;
  bool ok = true;
  auto check = [&](int dim, int n) {
    const FeOperators ops = assemble_fe_operators(build_uniform_periodic_mesh(dim, n, {1.0, 1.0}));
    const IdentityReport r = verify_operator_identities(ops, kIdentityTol);
    ok = ok && r.all_pass();
    worst = std::max({worst, r.grad_diagonal, r.grad_antisymmetry, r.grad_row_sum, r.mass_row_sum});
  };
  for (int n = 16; n <= 1024; n *= 2) check(1, n);
  for (int n = 8; n <= 64; n *= 2) check(2, n);
  return {ok, "worst relative violation " + num(worst) + " (tol " + num(kIdentityTol) + ")"};
}

// ---- 2 ----
Outcome sod_conservation() {
  const RunConfig cfg = parse_config(R"(
mesh: {dim: 1, cells: 400}
model: {kind: euler}
limiter: {mode: mcl}
integrator: {method: ssp_rk3, t_end: 0.2}
initial_condition: {name: sod}
)");
  const RunOutcome o = run_simulation(cfg);
  double worst = 0.0;
  std::vector<double> drifts;
  for (int k = 0; k < 3; ++k) {
    drifts.push_back(o.result.diagnostics.max_relative_drift(k));
    worst = std::max(worst, drifts.back());
  }
  return {worst <= kConservationTol, "relative drift rho/m/E " + join(drifts)};
}

// ---- 3 ----
Outcome invariant_domain() {
  std::string detail;
  bool ok = true;
  {
    RunConfig cfg = parse_config(R"(
mesh: {dim: 1, cells: 256}
model: {kind: advection, velocity: [1.0]}
limiter: {mode: mcl}
integrator: {cfl: 0.9, t_end: 1.0}
initial_condition: {name: step, low: 0, high: 1, left: 0.25, right: 0.75}
)");
    double violation = 0.0;
    auto observer = [&](const StateField& u) {
      for (const auto& s : u.values) violation = std::max({violation, -s[0], s[0] - 1.0});
    };
    const RunOutcome o = run_simulation(cfg, std::nullopt, observer);
    for (std::size_t n = 0; n < o.result.diagnostics.size(); ++n)
      violation = std::max({violation, -o.result.diagnostics.min[n][0],
                            o.result.diagnostics.max[n][0] - 1.0});
    ok = ok && violation <= kBoundTol;
    detail += "step [0,1] violation " + num(std::max(violation, 0.0));
  }
  auto positivity = [&](const std::string& text, const std::string& label) {
    const RunConfig cfg = parse_config(text);
    double min_rho = std::numeric_limits<double>::infinity();
    double min_p = min_rho;
    auto observer = [&](const StateField& u) {
      for (const auto& s : u.values) {
        min_rho = std::min(min_rho, s[0]);
        if (s[0] > 0.0) min_p = std::min(min_p, pressure(cfg.model, s));
      }
    };
    run_simulation(cfg, std::nullopt, observer);
    ok = ok && min_rho > 0.0 && min_p > 0.0;
    detail += "; " + label + " min rho " + num(min_rho) + ", min p " + num(min_p);
  };
  positivity(R"(
mesh: {dim: 1, cells: 400}
model: {kind: euler}
limiter: {mode: mcl}
integrator: {t_end: 0.2}
initial_condition: {name: sod}
)",
             "Sod");
  positivity(R"(
mesh: {dim: 2, cells: 64}
model: {kind: euler}
limiter: {mode: mcl}
integrator: {t_end: 0.05}
initial_condition: {name: euler_blast}
)",
             "blast 64^2");
  return {ok, detail};
}

const char* kBurgersSine = R"(
mesh: {dim: 1, cells: 256}
model: {kind: burgers}
limiter: {mode: bv_entropy}
integrator: {cfl: 0.5, t_end: 0.3}
initial_condition: {name: sine_wave, amplitude: 1.0, offset: 0.0}
)";

// ---- 4 ----
Outcome entropy_stability() {
  const RunConfig cfg = parse_config(kBurgersSine);
  const RunOutcome o = run_simulation(cfg);
  const auto& rec = o.result.diagnostics;
  double residual = -std::numeric_limits<double>::infinity();
  for (double r : rec.max_entropy_residual) residual = std::max(residual, r);
  const double increase = rec.max_entropy_increase();
  const double scale = std::abs(rec.total_entropy.front());
  const bool ok = residual <= kEntropyResidualTol && increase <= kEntropyIncreaseTol * scale;
  return {ok, "max edge residual " + num(residual) + ", max step increase of eta " +
                  num(increase) + " (limit " + num(kEntropyIncreaseTol * scale) + "), eta " +
                  num(rec.total_entropy.front()) + " -> " + num(rec.total_entropy.back())};
}

// ---- 5 ----
Outcome weak_bv() {
  RunConfig cfg = parse_config(kBurgersSine);
  std::vector<double> integrals;
  for (int cells : {64, 128, 256, 512})
    integrals.push_back(run_simulation(cfg, cells).result.diagnostics.bv_time_integral);
  const double worst = *std::max_element(integrals.begin(), integrals.end());
  return {worst <= kBvGrowthFactor * integrals.front(),
          "BV time integrals h=1/64..1/512 " + join(integrals)};
}

// ---- 6 ----
Outcome seminorm_equivalence() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int dim : {1, 2}) {
    for (int n : dim == 1 ? std::vector<int>{16, 64, 256, 1024} : std::vector<int>{8, 16, 32, 64}) {
      const Mesh m = build_uniform_periodic_mesh(dim, n, {1.0, 1.0});
      const FeOperators ops = assemble_fe_operators(m);
      for (int s = 0; s < 10; ++s) {
        std::vector<double> v(ops.n_nodes);
        for (double& x : v) x = U(rng);
        const double r = seminorm_ratio(m, ops, v, 1);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
  }
  return {hi / lo <= kSeminormSpread,
          "ratio in [" + num(lo) + ", " + num(hi) + "], spread " + num(hi / lo)};
}

// ---- 7 ----
Outcome consistency_rates() {
  const char* base = R"(
mesh: {dim: 1}
model: {kind: burgers}
limiter: {mode: bv_entropy}
integrator: {cfl: 0.5, t_end: 0.1}
initial_condition: {name: sine_wave, amplitude: 1.0, offset: 0.0}
)";
  const std::vector<int> levels{32, 64, 128, 256};
  const RunConfig cfg = parse_config(base);
  const ConsistencyStudy s = run_consistency(cfg, levels);
  const auto& r = s.report;
  bool ok = r.slope_r1 >= kMinSlopeR1 && r.slope_r2 >= kMinSlopeR2 && r.slope_r3 >= kMinSlopeR3;
  std::string detail = "slopes R1 " + num(r.slope_r1) + ", R2 " + num(r.slope_r2) + ", R3 " +
                       num(r.slope_r3);

  RunConfig unlimited = cfg;
  unlimited.limiter.mode = LimiterMode::target;
  double r3_max = 0.0;
  for (const auto& e : run_consistency(unlimited, levels).report.levels) r3_max = std::max(r3_max, e.R3);
  ok = ok && r3_max == 0.0;
  detail += "; alpha=1: max R3 " + num(r3_max);

  // alpha = 1 - h, one configuration per level.
  ConsistencyReport synthetic;
  for (int cells : levels) {
    RunConfig c = cfg;
    c.limiter.mode = LimiterMode::fixed_alpha;
    c.limiter.fixed_alpha = 1.0 - 1.0 / cells;
    const std::vector<int> one{cells};
    synthetic.levels.push_back(run_consistency(c, one).report.levels.front());
  }
  synthetic.fit_slopes();
  ok = ok && synthetic.slope_r3 >= kMinSlopeR3Synthetic;
  detail += "; alpha=1-h: R3 slope " + num(synthetic.slope_r3);
  return {ok, detail};
}

// ---- 8 ----
Outcome convergence() {
  const char* adv = R"(
mesh: {dim: 1}
model: {kind: advection, velocity: [1.0]}
integrator: {t_end: 1.0}
initial_condition: {name: sine_wave, amplitude: 1.0, offset: 0.0}
)";
  const std::vector<int> levels{64, 128, 256, 512};
  RunConfig cfg = parse_config(adv);
  bool ok = true;
  std::string detail;
  auto eocs = [](const ConvergenceStudy& s) {
    std::vector<double> out;
    for (std::size_t k = 1; k < s.table.rows.size(); ++k) out.push_back(s.table.rows[k].eoc_l1);
    return out;
  };
  cfg.limiter.mode = LimiterMode::mcl;
  const auto mcl = eocs(run_convergence(cfg, levels));
  for (double e : mcl) ok = ok && e >= kMinEocMcl;
  cfg.limiter.mode = LimiterMode::low_order;
  const auto low = eocs(run_convergence(cfg, levels));
  for (double e : low) ok = ok && e >= kLowOrderEocLo && e <= kLowOrderEocHi;
  detail = "mcl EOC " + join(mcl) + ", low_order EOC " + join(low);

  const RunConfig sod = parse_config(R"(
mesh: {dim: 1}
model: {kind: euler}
limiter: {mode: mcl}
integrator: {t_end: 0.1}
initial_condition: {name: sod}
)");
  const std::vector<int> sod_levels{100, 200, 400, 800};
  // Density component only.
  std::vector<double> density;
  const auto ref = exact_solution(sod.model, sod.initial_condition, sod.mesh.extent, 0.1);
  for (int cells : sod_levels) {
    const RunOutcome o = run_simulation(sod, cells);
    density.push_back(error_norms(o.mesh, o.result.trajectory.snapshots.back(), *ref).l1[0]);
  }
  for (std::size_t k = 1; k < density.size(); ++k) ok = ok && density[k] < density[k - 1];
  detail += "; Sod density L1 " + join(density);
  return {ok, detail};
}

// ---- 9 ----
Outcome cesaro() {
  RunConfig cfg = parse_config(kBurgersSine);
  cfg.study.probe_points = 2048;
  const std::vector<int> levels{64, 128, 256, 512};
  const CesaroStudy s = run_cesaro(cfg, levels);
  bool ok = s.differences.size() == 3;
  for (std::size_t k = 1; k < s.differences.size(); ++k)
    ok = ok && s.differences[k] < s.differences[k - 1];
  return {ok, "|Avg_N - Avg_N-1|_L1 for N = 2..4: " + join(s.differences)};
}

// ---- 10 ----
// Largest excursion outside [0, 1] within `steps` forward-Euler low-order
// steps of size factor * (CFL bound with nu = 1).
double cfl_overshoot(const Mesh& mesh, const ModelSpec& model, const StateField& u0,
                     double factor, int steps) {
  const FeOperators ops = assemble_fe_operators(mesh);
  LimiterConfig low;
  low.mode = LimiterMode::low_order;
  StateField u = u0;
  double worst = 0.0;
  for (int n = 0; n < steps; ++n) {
    const RhsEvaluation rhs = semidiscrete_rhs(ops, model, u, low, {});
    const double dt = factor * compute_cfl_dt(ops, rhs.edges.d, 1.0);
    u = ssp_stage(ops, model, u, dt, rhs, false, {});
    for (const auto& s : u.values) worst = std::max({worst, -s[0], s[0] - 1.0});
  }
  return worst;
}

Outcome cfl_sharpness() {
  const Mesh mesh = build_uniform_periodic_mesh(1, 256, {1.0, 1.0});
  const ModelSpec model = ModelSpec::advection(1, {1.0, 0.0});
  InitialConditionConfig ic;
  ic.name = "step";
  const StateField u0 = interpolate_initial_condition(mesh, model, ic, {});
  const double at_bound = cfl_overshoot(mesh, model, u0, 1.0, kCflSteps);
  const double doubled = cfl_overshoot(mesh, model, u0, 2.0, kCflSteps);
  const double beyond = cfl_overshoot(mesh, model, u0, 2.1, kCflSteps);
  return {doubled > kBoundTol,
          "overshoot within " + std::to_string(kCflSteps) + " steps: 1x bound " + num(at_bound) +
              ", 2x bound " + num(doubled) + ", 2.1x bound " + num(beyond)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"operator identities", operator_identities},
      {"conservation (Sod, 400 nodes)", sod_conservation},
      {"invariant domain (step advection, Sod, 2D blast)", invariant_domain},
      {"entropy stability (Burgers, bv_entropy)", entropy_stability},
      {"weak BV bound", weak_bv},
      {"seminorm equivalence", seminorm_equivalence},
      {"consistency rates", consistency_rates},
      {"convergence (advection EOC, Sod)", convergence},
      {"Cesaro averages", cesaro},
      {"CFL sharpness", cfl_sharpness},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.passed;
    std::printf("%s [%zu] %s: %s (%.1fs)\n", o.passed ? "PASS" : "FAIL", k + 1,
                criteria[k].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed;
}
