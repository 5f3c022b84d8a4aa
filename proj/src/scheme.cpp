#include "mclfem/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "mclfem/errors.hpp"
#include "parallel.hpp"

namespace mclfem {

namespace {

Point unit(const Point& c, int dim) {
  const double n = norm(c, dim);
  if (n == 0.0) return Point{};
  Point r = c;
  for (int k = 0; k < dim; ++k) r[k] /= n;
  return r;
}

Point negate(const Point& c) { return {-c[0], -c[1]}; }

bool euler_state_ok(const ModelSpec& model, const StateVector& u,
                    const AdmissibilityParams& params) {
  if (!std::isfinite(u[0]) || u[0] < params.rho_floor) return false;
  const double p = pressure(model, u);
  return std::isfinite(p) && p >= params.pressure_floor;
}

// Largest s in [0, s_max] with feasible(s), assuming feasible(0) and a
// feasible set that is an interval (convexity of the admissible set).
template <class Feasible>
double bisect_feasible(double s_max, Feasible&& feasible) {
  if (feasible(s_max)) return s_max;
  double lo = 0.0;
  double hi = s_max;
  for (int it = 0; it < 40 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double residual_from(const EntropyPairEval& ei, const EntropyPairEval& ej, const StateVector& ui,
                     const StateVector& uj, const FluxMatrix& fi, const FluxMatrix& fj,
                     const Point& cij, int dim, double d, const StateVector& f_star) {
  const StateVector dv = ei.v - ej.v;
  StateVector bracket = d * (uj - ui) - (fj.dot(cij) + fi.dot(cij)) + f_star;
  double dpsi = 0.0;
  for (int k = 0; k < dim; ++k) dpsi += (ej.psi[k] - ei.psi[k]) * cij[k];
  return 0.5 * dot(dv, bracket) - dpsi;
}

EntropyDmin dmin_from(const EntropyPairEval& ei, const EntropyPairEval& ej, const StateVector& ui,
                      const StateVector& uj, const FluxMatrix& fi, const FluxMatrix& fj,
                      const Point& cij, int dim) {
  const StateVector dv = ei.v - ej.v;
  const double denom = dot(dv, uj - ui);
  const double scale = norm(ei.v) * norm(ui) + norm(ej.v) * norm(uj);
  if (std::abs(denom) <= 1e-14 * scale || denom == 0.0) return {0.0, true};
  double dpsi = 0.0;
  for (int k = 0; k < dim; ++k) dpsi += (ej.psi[k] - ei.psi[k]) * cij[k];
  const double b = dot(dv, fj.dot(cij) + fi.dot(cij));
  return {(2.0 * dpsi + b) / denom, false};
}

}  // namespace

std::string to_string(LimiterMode mode) {
  switch (mode) {
    case LimiterMode::target: return "target";
    case LimiterMode::low_order: return "low_order";
    case LimiterMode::mcl: return "mcl";
    case LimiterMode::mcl_entropy: return "mcl_entropy";
    case LimiterMode::bv_entropy: return "bv_entropy";
    case LimiterMode::fixed_alpha: return "fixed_alpha";
  }
  return "unknown";
}

std::string to_string(BoundStencil stencil) {
  return stencil == BoundStencil::nodal ? "nodal" : "nodal_plus_bar_states";
}

void LimiterConfig::validate() const {
  if (!(entropy_margin >= 0.0)) throw ConfigError("limiter.entropy_margin must be >= 0");
  if (uses_entropy() && !(entropy_margin > 0.0))
    throw ConfigError("limiter.entropy_margin must be > 0 in entropy modes");
  if (richardson_sweeps < 0) throw ConfigError("limiter.richardson_sweeps must be >= 0");
  if (!(fixed_alpha >= 0.0 && fixed_alpha <= 1.0))
    throw ConfigError("limiter.fixed_alpha must lie in [0, 1]");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

std::vector<double> compute_graph_viscosity(const FeOperators& ops, const ModelSpec& model,
                                            const StateField& u) {
  std::vector<double> d(ops.num_edges(), 0.0);
  for (int e = 0; e < ops.num_edges(); ++e) {
    const auto [i, j] = ops.edges[e];
    const double cn = ops.grad_norm(e);
    if (cn == 0.0) continue;
    const Point n = unit(ops.edge_grad[e], ops.dim);
    const double lij = max_wave_speed(model, u.values[i], u.values[j], n);
    const double lji = max_wave_speed(model, u.values[j], u.values[i], negate(n));
    d[e] = std::max(lij * cn, lji * cn);
  }
  return d;
}

TimeDerivativeSolve solve_nodal_time_derivatives(const FeOperators& ops, const ModelSpec& model,
                                                 const StateField& u, int sweeps) {
  const int n = ops.n_nodes;
  const int m = model.components();
  std::vector<FluxMatrix> f(n);
  for (int i = 0; i < n; ++i) f[i] = flux(model, u.values[i]);

  // b_i = -sum_{j != i} (f_j - f_i) . c_ij, zero for constant states.
  std::vector<StateVector> b(n, StateVector(m));
  for (int i = 0; i < n; ++i) {
    for (int k = ops.adjacency_offsets[i]; k < ops.adjacency_offsets[i + 1]; ++k) {
      const int e = ops.adjacency_edge[k];
      if (e < 0) continue;
      const int j = ops.adjacency[k];
      const Point c = ops.grad(e, i);
      b[i] -= f[j].dot(c) - f[i].dot(c);
    }
  }

  auto apply_consistent_mass = [&](const std::vector<StateVector>& x) {
    std::vector<StateVector> y(n, StateVector(m));
    for (int i = 0; i < n; ++i) {
      for (int k = ops.adjacency_offsets[i]; k < ops.adjacency_offsets[i + 1]; ++k) {
        const int e = ops.adjacency_edge[k];
        const int j = ops.adjacency[k];
        const double mij = e < 0 ? ops.mass_diagonal[i] : ops.edge_mass[e];
        y[i] += mij * x[j];
      }
    }
    return y;
  };

  TimeDerivativeSolve out;
  out.udot.resize(n);
  for (int i = 0; i < n; ++i) out.udot[i] = b[i] / ops.lumped_mass[i];
  auto residual = apply_consistent_mass(out.udot);
  for (int i = 0; i < n; ++i) residual[i] = b[i] - residual[i];
  for (int s = 0; s < sweeps; ++s) {
    for (int i = 0; i < n; ++i) out.udot[i] += residual[i] / ops.lumped_mass[i];
    residual = apply_consistent_mass(out.udot);
    for (int i = 0; i < n; ++i) residual[i] = b[i] - residual[i];
  }
  out.residual = 0.0;
  for (const auto& r : residual) out.residual = std::max(out.residual, max_abs(r));
  return out;
}

std::vector<StateVector> compute_target_fluxes(const FeOperators& ops, std::span<const double> d,
                                               const StateField& u,
                                               std::span<const StateVector> udot) {
  std::vector<StateVector> f(ops.num_edges());
  for (int e = 0; e < ops.num_edges(); ++e) {
    const auto [i, j] = ops.edges[e];
    f[e] = ops.edge_mass[e] * (udot[i] - udot[j]) + d[e] * (u.values[i] - u.values[j]);
  }
  return f;
}

StateVector bar_state(const ModelSpec& model, const StateVector& ui, const StateVector& uj,
                      const Point& cij, double d) {
  if (!(d > 0.0)) throw DegenerateEdgeError("bar state requested on an edge with d_ij = 0");
  const StateVector flux_diff = flux(model, uj).dot(cij) - flux(model, ui).dot(cij);
  return 0.5 * (uj + ui) - flux_diff / (2.0 * d);
}

std::vector<StateVector> compute_bar_states(const FeOperators& ops, const ModelSpec& model,
                                            std::span<const double> d, const StateField& u) {
  std::vector<StateVector> bar(ops.num_edges());
  for (int e = 0; e < ops.num_edges(); ++e) {
    const auto [i, j] = ops.edges[e];
    const Point& c = ops.edge_grad[e];
    if (d[e] > 0.0) {
      bar[e] = bar_state(model, u.values[i], u.values[j], c, d[e]);
      continue;
    }
    const StateVector flux_diff =
        flux(model, u.values[j]).dot(c) - flux(model, u.values[i]).dot(c);
    if (max_abs(flux_diff) != 0.0)
      throw DegenerateEdgeError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") has d_ij = 0 but a nonzero flux difference");
    bar[e] = 0.5 * (u.values[i] + u.values[j]);
  }
  return bar;
}

NodalBounds compute_local_bounds(const FeOperators& ops, const StateField& u,
                                 std::span<const StateVector> bar, BoundStencil stencil) {
  NodalBounds b;
  b.min = u.values;
  b.max = u.values;
  const int m = u.components();
  for (int i = 0; i < ops.n_nodes; ++i) {
    for (int k = ops.adjacency_offsets[i]; k < ops.adjacency_offsets[i + 1]; ++k) {
      const int j = ops.adjacency[k];
      const int e = ops.adjacency_edge[k];
      for (int c = 0; c < m; ++c) {
        b.min[i][c] = std::min(b.min[i][c], u.values[j][c]);
        b.max[i][c] = std::max(b.max[i][c], u.values[j][c]);
        if (e >= 0 && stencil == BoundStencil::nodal_plus_bar_states) {
          b.min[i][c] = std::min(b.min[i][c], bar[e][c]);
          b.max[i][c] = std::max(b.max[i][c], bar[e][c]);
        }
      }
    }
  }
  return b;
}

NodalBounds compute_specific_bounds(const FeOperators& ops, const ModelSpec& model,
                                    const StateField& u, std::span<const StateVector> bar) {
  const int dim = model.dim;
  auto specific = [dim](const StateVector& w) {
    StateVector s(dim + 1);
    for (int c = 1; c <= dim + 1; ++c) s[c - 1] = w[c] / w[0];
    return s;
  };
  NodalBounds b;
  b.min.reserve(ops.n_nodes);
  for (const auto& w : u.values) b.min.push_back(specific(w));
  b.max = b.min;
  auto widen = [&](int i, const StateVector& s) {
    for (int c = 0; c <= dim; ++c) {
      b.min[i][c] = std::min(b.min[i][c], s[c]);
      b.max[i][c] = std::max(b.max[i][c], s[c]);
    }
  };
  for (int i = 0; i < ops.n_nodes; ++i) {
    for (int k = ops.adjacency_offsets[i]; k < ops.adjacency_offsets[i + 1]; ++k) {
      widen(i, specific(u.values[ops.adjacency[k]]));
      const int e = ops.adjacency_edge[k];
      if (e >= 0) widen(i, specific(bar[e]));
    }
  }
  return b;
}

double clip_scalar_flux(double f, double d, double bar, double min_i, double max_i, double min_j,
                        double max_j) {
  if (f > 0.0) return std::min({f, 2.0 * d * (max_i - bar), 2.0 * d * (bar - min_j)});
  if (f < 0.0) return std::max({f, 2.0 * d * (min_i - bar), 2.0 * d * (bar - max_j)});
  return 0.0;
}

std::vector<double> mcl_limit_scalar(const FeOperators& ops, std::span<const double> d,
                                     std::span<const double> bar, std::span<const double> targets,
                                     std::span<const double> umin, std::span<const double> umax) {
  for (int i = 0; i < ops.n_nodes; ++i)
    if (umin[i] > umax[i])
      throw LimiterError("inconsistent bounds at node " + std::to_string(i) + ": min " +
                         std::to_string(umin[i]) + " > max " + std::to_string(umax[i]));
  std::vector<double> out(ops.num_edges());
  for (int e = 0; e < ops.num_edges(); ++e) {
    const auto [i, j] = ops.edges[e];
    out[e] = clip_scalar_flux(targets[e], d[e], bar[e], umin[i], umax[i], umin[j], umax[j]);
  }
  return out;
}

EulerLimitResult mcl_limit_euler(const FeOperators& ops, const ModelSpec& model,
                                 std::span<const double> d, std::span<const StateVector> bar,
                                 std::span<const StateVector> targets,
                                 const AdmissibilityParams& params,
                                 std::span<const double> rho_min,
                                 std::span<const double> rho_max, const NodalBounds* specific) {
  EulerLimitResult out;
  out.limited.resize(ops.num_edges());
  out.beta.assign(ops.num_edges(), 1.0);
  for (int i = 0; i < ops.n_nodes; ++i)
    if (rho_min[i] > rho_max[i])
      throw LimiterError("inconsistent density bounds at node " + std::to_string(i));

  for (int e = 0; e < ops.num_edges(); ++e) {
    const auto [i, j] = ops.edges[e];
    const int m = targets[e].size();
    if (!(d[e] > 0.0)) {
      out.limited[e] = StateVector(m);
      continue;
    }
    const double two_d = 2.0 * d[e];
    if (!euler_state_ok(model, bar[e], params)) {
      std::ostringstream os;
      os.precision(17);
      os << "bar state of edge (" << i << ", " << j << ") is inadmissible (rho = " << bar[e][0]
         << ")";
      throw LimiterError(os.str());
    }
    StateVector f = targets[e];
    f[0] = clip_scalar_flux(f[0], d[e], bar[e][0], rho_min[i], rho_max[i], rho_min[j], rho_max[j]);
    if (specific) {
      // Split f = f_rho * phi_bar + g; the f_rho part carries phi_bar, g alone moves phi.
      const double rho_ij = bar[e][0] + f[0] / two_d;
      const double rho_ji = bar[e][0] - f[0] / two_d;
      for (int c = 1; c < m; ++c) {
        const double phi = bar[e][c] / bar[e][0];
        const double lo_i = specific->min[i][c - 1], hi_i = specific->max[i][c - 1];
        const double lo_j = specific->min[j][c - 1], hi_j = specific->max[j][c - 1];
        const double lo = std::max(two_d * rho_ij * (lo_i - phi), two_d * rho_ji * (phi - hi_j));
        const double hi = std::min(two_d * rho_ij * (hi_i - phi), two_d * rho_ji * (phi - lo_j));
        const double g = f[c] - f[0] * phi;
        f[c] = f[0] * phi + std::clamp(g, std::min(lo, 0.0), std::max(hi, 0.0));
      }
    }

    auto candidate = [&](double beta) {
      StateVector g = f;
      for (int c = 1; c < m; ++c) g[c] *= beta;
      return g;
    };
    auto feasible = [&](const StateVector& g) {
      return euler_state_ok(model, bar[e] + g / two_d, params) &&
             euler_state_ok(model, bar[e] - g / two_d, params);
    };
    if (feasible(candidate(0.0))) {
      const double beta = bisect_feasible(1.0, [&](double b) { return feasible(candidate(b)); });
      out.beta[e] = beta;
      out.limited[e] = candidate(beta);
    } else {
      // The clipped density flux alone already breaks positivity together with
      // the unscaled bar momentum; shrink the density flux toward the bar state.
      const StateVector rho_only = candidate(0.0);
      const double s = bisect_feasible(1.0, [&](double t) { return feasible(t * rho_only); });
      out.beta[e] = 0.0;
      out.limited[e] = s * rho_only;
    }
  }
  return out;
}

EntropyDmin entropy_dmin(const ModelSpec& model, const StateVector& ui, const StateVector& uj,
                         const Point& cij) {
  return dmin_from(entropy_pair(model, ui), entropy_pair(model, uj), ui, uj, flux(model, ui),
                   flux(model, uj), cij, model.dim);
}

EntropyCap entropy_cap(double d, double d_min, double theta, double c_norm,
                       double alpha_candidate) {
  if (!(d > 0.0)) throw LimiterError("entropy_cap requires d_ij > 0");
  const double required = std::max(d_min, 0.0) + theta * c_norm;
  const double cap = 1.0 - required / d;
  EntropyCap out;
  out.insufficient = cap < 0.0;
  out.alpha = std::min(alpha_candidate, std::max(0.0, cap));
  return out;
}

double edge_entropy_residual(const ModelSpec& model, const StateVector& ui, const StateVector& uj,
                             const Point& cij, double d, const StateVector& f_star) {
  return residual_from(entropy_pair(model, ui), entropy_pair(model, uj), ui, uj, flux(model, ui),
                       flux(model, uj), cij, model.dim, d, f_star);
}

RhsEvaluation semidiscrete_rhs(const FeOperators& ops, const ModelSpec& model,
                               const StateField& u, const LimiterConfig& limiter,
                               const AdmissibilityParams& params) {
  const int n = ops.n_nodes;
  const int ne = ops.num_edges();
  const int m = model.components();
  const int threads = limiter.threads;
  if (u.size() != n) throw DimensionError("state field does not match the mesh");

  RhsEvaluation out;
  EdgeData& ed = out.edges;

  std::vector<FluxMatrix> f(n);
  std::vector<EntropyPairEval> ent(n);
  detail::parallel_for(n, threads, [&](int i) {
    f[i] = flux(model, u.values[i]);
    ent[i] = entropy_pair(model, u.values[i]);
  });

  ed.d = compute_graph_viscosity(ops, model, u);
  ed.bar = compute_bar_states(ops, model, ed.d, u);
  ed.target.assign(ne, StateVector(m));
  ed.limited.assign(ne, StateVector(m));
  ed.alpha.assign(ne, 1.0);
  ed.d_min.assign(ne, 0.0);
  ed.entropy_residual.assign(ne, 0.0);

  auto entropy_form_target = [&](int e) {
    const auto [i, j] = ops.edges[e];
    return ed.d[e] * (u.values[i] - u.values[j]);
  };

  const LimiterMode mode = limiter.mode;
  const bool needs_udot =
      mode == LimiterMode::target || mode == LimiterMode::mcl || mode == LimiterMode::mcl_entropy;
  if (needs_udot) {
    auto solve = solve_nodal_time_derivatives(ops, model, u, limiter.richardson_sweeps);
    out.richardson_residual = solve.residual;
    ed.target = compute_target_fluxes(ops, ed.d, u, solve.udot);
  } else if (mode == LimiterMode::bv_entropy || mode == LimiterMode::fixed_alpha) {
    for (int e = 0; e < ne; ++e) ed.target[e] = entropy_form_target(e);
  }

  const bool bounded = limiter.enforce_bounds &&
                       (mode == LimiterMode::mcl || mode == LimiterMode::mcl_entropy ||
                        mode == LimiterMode::bv_entropy);
  NodalBounds bounds;
  if (bounded) bounds = compute_local_bounds(ops, u, ed.bar, limiter.bound_stencil);

  switch (mode) {
    case LimiterMode::target:
      ed.limited = ed.target;
      break;
    case LimiterMode::low_order:
      std::fill(ed.alpha.begin(), ed.alpha.end(), 0.0);
      break;
    case LimiterMode::fixed_alpha:
      for (int e = 0; e < ne; ++e) {
        ed.alpha[e] = limiter.fixed_alpha;
        ed.limited[e] = limiter.fixed_alpha * ed.target[e];
      }
      break;
    case LimiterMode::mcl:
    case LimiterMode::mcl_entropy: {
      if (!bounded) {
        ed.limited = ed.target;
        break;
      }
      if (model.is_scalar()) {
        std::vector<double> bar0(ne), f0(ne), lo(n), hi(n);
        for (int e = 0; e < ne; ++e) {
          bar0[e] = ed.bar[e][0];
          f0[e] = ed.target[e][0];
        }
        for (int i = 0; i < n; ++i) {
          lo[i] = bounds.min[i][0];
          hi[i] = bounds.max[i][0];
        }
        const auto lim = mcl_limit_scalar(ops, ed.d, bar0, f0, lo, hi);
        for (int e = 0; e < ne; ++e) ed.limited[e] = StateVector{lim[e]};
      } else {
        std::vector<double> lo(n), hi(n);
        for (int i = 0; i < n; ++i) {
          lo[i] = bounds.min[i][0];
          hi[i] = bounds.max[i][0];
        }
        const NodalBounds specific = compute_specific_bounds(ops, model, u, ed.bar);
        ed.limited =
            mcl_limit_euler(ops, model, ed.d, ed.bar, ed.target, params, lo, hi, &specific).limited;
      }
      for (int e = 0; e < ne; ++e) {
        double a = 1.0;
        for (int c = 0; c < m; ++c)
          if (ed.target[e][c] != 0.0) a = std::min(a, ed.limited[e][c] / ed.target[e][c]);
        ed.alpha[e] = std::max(0.0, a);
      }
      break;
    }
    case LimiterMode::bv_entropy: {
      std::vector<int> degenerate(ne, 0), insufficient(ne, 0);
      detail::parallel_for(ne, threads, [&](int e) {
        const auto [i, j] = ops.edges[e];
        const double d = ed.d[e];
        if (!(d > 0.0)) {
          ed.alpha[e] = 0.0;
          return;
        }
        const StateVector g = ed.target[e];
        double candidate = 1.0;
        if (bounded) {
          if (model.is_scalar()) {
            const double clipped =
                clip_scalar_flux(g[0], d, ed.bar[e][0], bounds.min[i][0], bounds.max[i][0],
                                 bounds.min[j][0], bounds.max[j][0]);
            candidate = g[0] != 0.0 ? std::clamp(clipped / g[0], 0.0, 1.0) : 1.0;
          } else {
            const double clipped =
                clip_scalar_flux(g[0], d, ed.bar[e][0], bounds.min[i][0], bounds.max[i][0],
                                 bounds.min[j][0], bounds.max[j][0]);
            double a_rho = g[0] != 0.0 ? std::clamp(clipped / g[0], 0.0, 1.0) : 1.0;
            auto feasible = [&](double a) {
              const StateVector s = a * (g / (2.0 * d));
              return euler_state_ok(model, ed.bar[e] + s, params) &&
                     euler_state_ok(model, ed.bar[e] - s, params);
            };
            if (!feasible(0.0))
              throw LimiterError("bar state of edge (" + std::to_string(i) + ", " +
                                 std::to_string(j) + ") is inadmissible");
            candidate = bisect_feasible(a_rho, feasible);
          }
        }
        const EntropyDmin dm = dmin_from(ent[i], ent[j], u.values[i], u.values[j], f[i], f[j],
                                         ops.edge_grad[e], ops.dim);
        ed.d_min[e] = dm.value;
        degenerate[e] = dm.degenerate;
        const EntropyCap cap =
            entropy_cap(d, dm.value, limiter.entropy_margin, ops.grad_norm(e), candidate);
        insufficient[e] = cap.insufficient;
        ed.alpha[e] = cap.alpha;
        ed.limited[e] = cap.alpha * g;
      });
      for (int e = 0; e < ne; ++e) {
        out.degenerate_dmin_edges += degenerate[e];
        out.entropy_cap_insufficient_edges += insufficient[e];
      }
      break;
    }
  }

  if (mode == LimiterMode::mcl_entropy) {
    for (int e = 0; e < ne; ++e) {
      const auto [i, j] = ops.edges[e];
      const Point& c = ops.edge_grad[e];
      const EntropyDmin dm =
          dmin_from(ent[i], ent[j], u.values[i], u.values[j], f[i], f[j], c, ops.dim);
      ed.d_min[e] = dm.value;
      if (dm.degenerate) ++out.degenerate_dmin_edges;
      const double r1 = residual_from(ent[i], ent[j], u.values[i], u.values[j], f[i], f[j], c,
                                      ops.dim, ed.d[e], ed.limited[e]);
      if (r1 <= 0.0) continue;
      // The residual is affine in the scale of f*: r(s) = r0 + s (r1 - r0).
      const double r0 = residual_from(ent[i], ent[j], u.values[i], u.values[j], f[i], f[j], c,
                                      ops.dim, ed.d[e], StateVector(m));
      double s = 0.0;
      if (r0 > 0.0)
        ++out.entropy_unresolved_edges;
      else
        s = std::clamp(-r0 / (r1 - r0), 0.0, 1.0);
      ed.limited[e] *= s;
      ed.alpha[e] *= s;
    }
  }

  // Edge fluxes g*_ij in owner orientation; g*_ji = -g*_ij.
  std::vector<StateVector> g(ne);
  detail::parallel_for(ne, threads, [&](int e) {
    const auto [i, j] = ops.edges[e];
    const Point& c = ops.edge_grad[e];
    ed.entropy_residual[e] = residual_from(ent[i], ent[j], u.values[i], u.values[j], f[i], f[j],
                                           c, ops.dim, ed.d[e], ed.limited[e]);
    g[e] = ed.d[e] * (u.values[j] - u.values[i]) + ed.limited[e] -
           (f[j].dot(c) + f[i].dot(c));
  });

  out.du.assign(n, StateVector(m));
  for (int i = 0; i < n; ++i) {
    StateVector acc(m);
    for (int k = ops.adjacency_offsets[i]; k < ops.adjacency_offsets[i + 1]; ++k) {
      const int e = ops.adjacency_edge[k];
      if (e < 0) continue;
      if (ops.edges[e].i == i)
        acc += g[e];
      else
        acc -= g[e];
    }
    out.du[i] = acc / ops.lumped_mass[i];
  }
  return out;
}

}  // namespace mclfem
