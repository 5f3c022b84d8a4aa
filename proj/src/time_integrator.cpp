#include "mclfem/time_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "format.hpp"
#include "mclfem/errors.hpp"

namespace mclfem {

namespace {

constexpr int kMaxRetries = 10;
constexpr double kScalarSlack = 1e-12;

double max_residual(const RhsEvaluation& r) {
  double s = -std::numeric_limits<double>::infinity();
  for (double v : r.edges.entropy_residual) s = std::max(s, v);
  return r.edges.entropy_residual.empty() ? 0.0 : s;
}

StateField combine(double a, const StateField& x, double b, const StateField& y) {
  StateField out;
  out.values.resize(x.values.size());
  for (std::size_t i = 0; i < x.values.size(); ++i) out.values[i] = a * x.values[i] + b * y.values[i];
  return out;
}

std::string describe_state(const StateVector& s) {
  std::ostringstream os;
  os << '(';
  for (int k = 0; k < s.size(); ++k) os << (k ? ", " : "") << detail::fmt17(s[k]);
  os << ')';
  return os.str();
}

void check_field(const ModelSpec& model, const StateField& u, const AdmissibilityParams& params,
                 const char* what) {
  for (int i = 0; i < u.size(); ++i) {
    for (const Violation& v : check_admissible(model, u.values[i], params)) {
      // Scalar bounds tolerate rounding; floors and caps do not.
      if (v.kind == ViolationKind::scalar_lower &&
          v.amount <= kScalarSlack * std::max(1.0, std::abs(params.scalar_min)))
        continue;
      if (v.kind == ViolationKind::scalar_upper &&
          v.amount <= kScalarSlack * std::max(1.0, std::abs(params.scalar_max)))
        continue;
      throw StageError(std::string(what) + ": node " + std::to_string(i) + " state " +
                       describe_state(u.values[i]) + " violates " + to_string(v.kind) +
                       " bound by " + detail::fmt17(v.amount));
    }
  }
}

struct StepAttempt {
  StateField u;
  double max_residual = 0.0;
};

}  // namespace

std::string to_string(TimeMethod method) {
  switch (method) {
    case TimeMethod::forward_euler: return "forward_euler";
    case TimeMethod::ssp_rk2: return "ssp_rk2";
    case TimeMethod::ssp_rk3: return "ssp_rk3";
  }
  return "?";
}

void TimeIntegratorConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("integrator.cfl must lie in (0, 1]");
  if (!(t_end > 0.0)) throw ConfigError("integrator.t_end must be positive");
  if (max_steps <= 0) throw ConfigError("integrator.max_steps must be positive");
  if (!(max_dt > 0.0)) throw ConfigError("integrator.max_dt must be positive");
  for (double t : snapshot_times)
    if (!(t >= 0.0 && t <= t_end))
      throw ConfigError("integrator.snapshots: time " + detail::fmt17(t) + " outside [0, t_end]");
  for (std::size_t k = 1; k < snapshot_times.size(); ++k)
    if (!(snapshot_times[k] > snapshot_times[k - 1]))
      throw ConfigError("integrator.snapshots must be strictly increasing");
}

std::vector<double> viscosity_row_sums(const FeOperators& ops, std::span<const double> d) {
  std::vector<double> a(ops.n_nodes, 0.0);
  for (int e = 0; e < ops.num_edges(); ++e) {
    a[ops.edges[e].i] += 2.0 * d[e];
    a[ops.edges[e].j] += 2.0 * d[e];
  }
  return a;
}

double compute_cfl_dt(const FeOperators& ops, std::span<const double> d, double cfl,
                      double max_dt) {
  const auto a = viscosity_row_sums(ops, d);
  double dt = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ops.n_nodes; ++i)
    if (a[i] > 0.0) dt = std::min(dt, ops.lumped_mass[i] / a[i]);
  if (!std::isfinite(dt)) return max_dt;
  return std::min(cfl * dt, max_dt);
}

bool satisfies_cfl(const FeOperators& ops, std::span<const double> d, double dt) {
  const auto a = viscosity_row_sums(ops, d);
  for (int i = 0; i < ops.n_nodes; ++i)
    if (dt * a[i] > ops.lumped_mass[i] * (1.0 + 1e-12)) return false;
  return true;
}

StateField ssp_stage(const FeOperators& ops, const ModelSpec& model, const StateField& u,
                     double dt, const RhsEvaluation& rhs, bool check,
                     const AdmissibilityParams& params) {
  StateField out;
  out.time = u.time + dt;
  out.values.resize(u.values.size());
  for (int i = 0; i < ops.n_nodes; ++i) out.values[i] = u.values[i] + dt * rhs.du[i];
  if (check) check_field(model, out, params, "stage");
  return out;
}

IntegrationResult integrate(const FeOperators& ops, const ModelSpec& model, const StateField& u0,
                            const LimiterConfig& limiter, const AdmissibilityParams& params,
                            const TimeIntegratorConfig& config, const StageObserver& observer) {
  model.validate();
  limiter.validate();
  params.validate();
  config.validate();
  if (u0.size() != ops.n_nodes || u0.components() != model.components())
    throw DimensionError("initial field does not match mesh and model");
  for (int i = 0; i < u0.size(); ++i) {
    const auto v = check_admissible(model, u0.values[i], params);
    if (!v.empty())
      throw InadmissibleStateError("initial state at node " + std::to_string(i) + " " +
                                   describe_state(u0.values[i]) + " violates " +
                                   to_string(v.front().kind));
  }

  std::vector<double> snaps = config.snapshot_times;
  snaps.push_back(config.t_end);
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());

  IntegrationResult result;
  auto& traj = result.trajectory;
  DiagnosticsAccumulator acc(ops, model, params, config.entropy_offset);

  StateField u = u0;
  u.time = 0.0;
  RhsEvaluation eval = semidiscrete_rhs(ops, model, u, limiter, params);
  acc.observe(u, 0.0, max_residual(eval));
  auto record_sample = [&](const StateField& state, const RhsEvaluation& ev) {
    if (!config.record_step_samples) return;
    traj.samples.push_back({state.time, state, ev.edges.d, ev.edges.alpha});
  };
  record_sample(u, eval);

  std::size_t next = 0;
  if (snaps.front() <= 0.0) {
    traj.snapshots.push_back(u);
    ++next;
  }

  const bool check = config.stage_admissibility_check;
  auto stage_ok = [&](const RhsEvaluation& ev, double dt) { return satisfies_cfl(ops, ev.edges.d, dt); };

  // One SSP step from (u, eval); nullopt when a later stage violates the CFL bound.
  auto attempt = [&](double dt) -> std::optional<StepAttempt> {
    StepAttempt out;
    out.max_residual = max_residual(eval);
    StateField u1 = ssp_stage(ops, model, u, dt, eval, check, params);
    if (observer) observer(u1);
    if (config.method == TimeMethod::forward_euler) {
      out.u = std::move(u1);
      return out;
    }
    RhsEvaluation e1 = semidiscrete_rhs(ops, model, u1, limiter, params);
    if (!stage_ok(e1, dt)) return std::nullopt;
    out.max_residual = std::max(out.max_residual, max_residual(e1));
    StateField w1 = ssp_stage(ops, model, u1, dt, e1, check, params);
    if (observer) observer(w1);
    if (config.method == TimeMethod::ssp_rk2) {
      out.u = combine(0.5, u, 0.5, w1);
      return out;
    }
    StateField u2 = combine(0.75, u, 0.25, w1);
    if (check) check_field(model, u2, params, "stage");
    if (observer) observer(u2);
    RhsEvaluation e2 = semidiscrete_rhs(ops, model, u2, limiter, params);
    if (!stage_ok(e2, dt)) return std::nullopt;
    out.max_residual = std::max(out.max_residual, max_residual(e2));
    StateField w2 = ssp_stage(ops, model, u2, dt, e2, check, params);
    if (observer) observer(w2);
    out.u = combine(1.0 / 3.0, u, 2.0 / 3.0, w2);
    return out;
  };

  int step = 0;
  while (next < snaps.size()) {
    if (step >= config.max_steps)
      throw IntegrationError("max_steps (" + std::to_string(config.max_steps) +
                             ") exceeded at t = " + detail::fmt17(u.time));
    const double target = snaps[next];
    const double cfl_dt = compute_cfl_dt(ops, eval.edges.d, config.cfl, config.max_dt);
    double dt = cfl_dt;
    bool clipped = false;
    if (u.time + dt >= target - 1e-12 * std::max(1.0, target)) {
      dt = target - u.time;
      clipped = true;
    }
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw IntegrationError("no finite positive step at t = " + detail::fmt17(u.time));

    std::optional<StepAttempt> done;
    int retries = 0;
    for (;; ++retries) {
      done = attempt(dt);
      if (done) break;
      if (retries == kMaxRetries)
        throw IntegrationError("stage CFL violated after " + std::to_string(kMaxRetries) +
                               " step halvings at t = " + detail::fmt17(u.time));
      dt *= 0.5;
      clipped = false;
    }

    const double t_new = clipped ? target : u.time + dt;
    u = std::move(done->u);
    u.time = t_new;
    if (config.method != TimeMethod::forward_euler) {
      if (check) check_field(model, u, params, "step");
      if (observer) observer(u);
    }
    ++step;
    eval = semidiscrete_rhs(ops, model, u, limiter, params);
    acc.observe(u, dt, done->max_residual);
    record_sample(u, eval);
    traj.steps.push_back({step, t_new, dt, cfl_dt, retries, done->max_residual});
    if (clipped) {
      traj.snapshots.push_back(u);
      ++next;
    }
  }
  result.diagnostics = acc.take();
  return result;
}

}  // namespace mclfem
