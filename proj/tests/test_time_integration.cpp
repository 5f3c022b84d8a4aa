#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mclfem/errors.hpp"
#include "mclfem/fe_operators.hpp"
#include "mclfem/mesh.hpp"
#include "mclfem/time_integrator.hpp"

using namespace mclfem;

namespace {

const double kPi = std::numbers::pi;

StateField sine_field(const Mesh& m) {
  StateField u;
  for (const Point& x : m.node_coords) u.values.push_back(StateVector{std::sin(2 * kPi * x[0])});
  return u;
}

StateField step_field(const Mesh& m) {
  StateField u;
  for (const Point& x : m.node_coords)
    u.values.push_back(StateVector{x[0] >= 0.25 && x[0] < 0.5 ? 1.0 : 0.0});
  return u;
}

LimiterConfig mode(LimiterMode m) {
  LimiterConfig c;
  c.mode = m;
  return c;
}

}  // namespace

TEST_CASE("CFL step for 1D advection is nu h / 2") {
  for (int n : {16, 100}) {
    const FeOperators ops = assemble_fe_operators(build_uniform_periodic_mesh(1, n, {1.0, 0.0}));
    const std::vector<double> d(ops.num_edges(), 0.5);
    const double h = 1.0 / n;
    CHECK(compute_cfl_dt(ops, d, 1.0) == doctest::Approx(h / 2).epsilon(1e-14));
    CHECK(compute_cfl_dt(ops, d, 0.3) == doctest::Approx(0.3 * h / 2).epsilon(1e-14));
    CHECK(compute_cfl_dt(ops, d, 1.0) / compute_cfl_dt(ops, d, 0.5) == 2.0);
    for (double a : viscosity_row_sums(ops, d)) CHECK(a == doctest::Approx(2.0));
    CHECK(satisfies_cfl(ops, d, h / 2));
    CHECK_FALSE(satisfies_cfl(ops, d, h / 2 * (1 + 1e-9)));
  }
  const FeOperators ops = assemble_fe_operators(build_uniform_periodic_mesh(1, 8, {1.0, 0.0}));
  CHECK(compute_cfl_dt(ops, std::vector<double>(8, 0.0), 0.5, 0.01) == 0.01);
}

TEST_CASE("config validation") {
  TimeIntegratorConfig c;
  c.cfl = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.cfl = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.cfl = 1.0;
  c.t_end = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.t_end = 1.0;
  c.snapshot_times = {0.5, 0.2};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("ssp_stage: constant state unchanged, overshoot detected") {
  const FeOperators ops = assemble_fe_operators(build_uniform_periodic_mesh(1, 8, {1.0, 0.0}));
  const ModelSpec model = ModelSpec::advection(1, {1.0, 0.0});
  StateField c;
  c.values.assign(8, StateVector{0.4});
  const auto rhs = semidiscrete_rhs(ops, model, c, mode(LimiterMode::low_order), {});
  const StateField next = ssp_stage(ops, model, c, 0.1, rhs, true, {});
  for (const auto& s : next.values) CHECK(s[0] == 0.4);

  AdmissibilityParams bounds;
  bounds.scalar_min = 0.0;
  bounds.scalar_max = 1.0;
  StateField u;
  for (double v : {0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0}) u.values.push_back(StateVector{v});
  const auto r = semidiscrete_rhs(ops, model, u, mode(LimiterMode::low_order), {});
  CHECK_NOTHROW(ssp_stage(ops, model, u, compute_cfl_dt(ops, r.edges.d, 1.0), r, true, bounds));
  // Far beyond the CFL bound the update leaves [0, 1].
  try {
    ssp_stage(ops, model, u, 3.0 / 8.0, r, true, bounds);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("low-order steps stay within the initial bounds") {
  const Mesh m = build_uniform_periodic_mesh(1, 64, {1.0, 0.0});
  const FeOperators ops = assemble_fe_operators(m);
  for (LimiterMode lm : {LimiterMode::low_order, LimiterMode::mcl}) {
    for (TimeMethod tm : {TimeMethod::forward_euler, TimeMethod::ssp_rk2, TimeMethod::ssp_rk3}) {
      TimeIntegratorConfig cfg;
      cfg.method = tm;
      cfg.cfl = 1.0;
      cfg.t_end = 0.3;
      AdmissibilityParams p;
      p.scalar_min = 0.0;
      p.scalar_max = 1.0;
      const auto res =
          integrate(ops, ModelSpec::burgers(1), step_field(m), mode(lm), p, cfg);
      for (std::size_t k = 0; k < res.diagnostics.size(); ++k) {
        CHECK(res.diagnostics.min[k][0] >= -1e-12);
        CHECK(res.diagnostics.max[k][0] <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("mass is conserved to round-off") {
  const Mesh m = build_uniform_periodic_mesh(2, 16, {1.0, 1.0});
  const FeOperators ops = assemble_fe_operators(m);
  StateField u;
  for (const Point& x : m.node_coords)
    u.values.push_back(StateVector{std::sin(2 * kPi * x[0]) * std::cos(2 * kPi * x[1]) + 0.1});
  TimeIntegratorConfig cfg;
  cfg.t_end = 0.2;
  const auto res = integrate(ops, ModelSpec::burgers(2), u, mode(LimiterMode::mcl), {}, cfg);
  CHECK(res.diagnostics.max_relative_drift(0) < 1e-12);
}

TEST_CASE("uniform Euler flow is stationary to round-off") {
  const Mesh m = build_uniform_periodic_mesh(2, 8, {1.0, 1.0});
  const FeOperators ops = assemble_fe_operators(m);
  const ModelSpec model = ModelSpec::euler(2);
  StateField u;
  u.values.assign(ops.n_nodes, conserved_from_primitive(model, {1.0, {0.0, 0.0}, 1.0}));
  TimeIntegratorConfig cfg;
  cfg.t_end = 0.1;
  for (LimiterMode lm : {LimiterMode::mcl, LimiterMode::bv_entropy, LimiterMode::low_order}) {
    const auto res = integrate(ops, model, u, mode(lm), {}, cfg);
    for (const auto& snap : res.trajectory.snapshots)
      for (int i = 0; i < ops.n_nodes; ++i)
        for (int k = 0; k < u.values[i].size(); ++k)
          CHECK(std::abs(snap.values[i][k] - u.values[i][k]) <=
                1e-14 * std::max(1.0, std::abs(u.values[i][k])));
  }
}

TEST_CASE("snapshot times are hit exactly and steps are logged") {
  const Mesh m = build_uniform_periodic_mesh(1, 32, {1.0, 0.0});
  const FeOperators ops = assemble_fe_operators(m);
  TimeIntegratorConfig cfg;
  cfg.t_end = 0.5;
  cfg.snapshot_times = {0.0, 0.1, 1.0 / 3.0};
  const auto res = integrate(ops, ModelSpec::advection(1, {1.0, 0.0}), sine_field(m),
                             mode(LimiterMode::mcl), {}, cfg);
  const auto& snaps = res.trajectory.snapshots;
  REQUIRE(snaps.size() == 4);
  CHECK(snaps[0].time == 0.0);
  CHECK(snaps[1].time == 0.1);
  CHECK(snaps[2].time == 1.0 / 3.0);
  CHECK(snaps[3].time == 0.5);
  double t = 0.0;
  for (const auto& s : res.trajectory.steps) {
    CHECK(s.dt > 0.0);
    CHECK(s.dt <= s.cfl_dt + 1e-12);
    t += s.dt;
  }
  CHECK(t == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(res.diagnostics.size() == res.trajectory.steps.size() + 1);
}

TEST_CASE("max_steps is enforced") {
  const Mesh m = build_uniform_periodic_mesh(1, 32, {1.0, 0.0});
  const FeOperators ops = assemble_fe_operators(m);
  TimeIntegratorConfig cfg;
  cfg.max_steps = 3;
  CHECK_THROWS_AS(integrate(ops, ModelSpec::advection(1, {1.0, 0.0}), sine_field(m),
                            mode(LimiterMode::mcl), {}, cfg),
                  IntegrationError);
}

TEST_CASE("inadmissible initial data is rejected") {
  const Mesh m = build_uniform_periodic_mesh(1, 8, {1.0, 0.0});
  const FeOperators ops = assemble_fe_operators(m);
  StateField u;
  u.values.assign(8, StateVector{-1.0, 0.0, 1.0});
  CHECK_THROWS(integrate(ops, ModelSpec::euler(1), u, mode(LimiterMode::mcl), {}, {}));
}

TEST_CASE("advection of a sine over one period converges") {
  // Exact solution after one period is the initial profile itself.
  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    const Mesh m = build_uniform_periodic_mesh(1, n, {1.0, 0.0});
    const FeOperators ops = assemble_fe_operators(m);
    const StateField u0 = sine_field(m);
    TimeIntegratorConfig cfg;
    cfg.t_end = 1.0;
    const auto res = integrate(ops, ModelSpec::advection(1, {1.0, 0.0}), u0,
                               mode(LimiterMode::mcl), {}, cfg);
    double e = 0.0;
    for (int i = 0; i < n; ++i)
      e += ops.lumped_mass[i] *
           std::abs(res.trajectory.snapshots.back().values[i][0] - u0.values[i][0]);
    err.push_back(e);
  }
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
  CHECK(err[2] < 0.02);
}

TEST_CASE("stage observer sees every convex-combination state") {
  const Mesh m = build_uniform_periodic_mesh(1, 16, {1.0, 0.0});
  const FeOperators ops = assemble_fe_operators(m);
  TimeIntegratorConfig cfg;
  cfg.t_end = 0.05;
  int calls = 0;
  const auto res = integrate(ops, ModelSpec::advection(1, {1.0, 0.0}), sine_field(m),
                             mode(LimiterMode::mcl), {}, cfg,
                             [&](const StateField&) { ++calls; });
  // ssp_rk3: three stage results plus two intermediate combinations per step.
  CHECK(calls == 5 * static_cast<int>(res.trajectory.steps.size()));
}
