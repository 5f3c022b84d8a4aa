#pragma once

#include <span>
#include <string>
#include <vector>

#include "mclfem/fe_operators.hpp"
#include "mclfem/model.hpp"
#include "mclfem/state.hpp"

namespace mclfem {

/// target:      f* = f (no limiting)
/// low_order:   f* = 0
/// mcl:         f clipped so that the corrected bar states respect local bounds
///              (scalar), or density bounds plus positivity (Euler)
/// mcl_entropy: mcl followed by a per-edge scaling enforcing the edge entropy
///              inequality
/// bv_entropy:  f* = alpha d (u_i - u_j) with alpha from a bound check and the
///              entropy viscosity cap
/// fixed_alpha: f* = alpha d (u_i - u_j) with a prescribed alpha (studies only)
enum class LimiterMode { target, low_order, mcl, mcl_entropy, bv_entropy, fixed_alpha };
enum class BoundStencil { nodal, nodal_plus_bar_states };

std::string to_string(LimiterMode mode);
std::string to_string(BoundStencil stencil);

struct LimiterConfig {
  LimiterMode mode = LimiterMode::mcl;
  double entropy_margin = 1e-3;  // theta, in units of wave speed
  BoundStencil bound_stencil = BoundStencil::nodal_plus_bar_states;
  bool enforce_bounds = true;    // mcl with bounds disabled reduces to target
  int richardson_sweeps = 5;
  double fixed_alpha = 1.0;
  int threads = 1;

  bool uses_entropy() const {
    return mode == LimiterMode::mcl_entropy || mode == LimiterMode::bv_entropy;
  }
  void validate() const;
  bool operator==(const LimiterConfig&) const = default;
};

/// Per undirected edge (i < j). Fluxes are stored in owner orientation; the
/// reverse orientation is the negative. Bar states satisfy u_bar_ij = u_bar_ji.
struct EdgeData {
  std::vector<double> d;
  std::vector<StateVector> bar;
  std::vector<StateVector> target;
  std::vector<StateVector> limited;
  std::vector<double> alpha;
  std::vector<double> d_min;
  std::vector<double> entropy_residual;
};

struct RhsEvaluation {
  std::vector<StateVector> du;
  EdgeData edges;
  double richardson_residual = 0.0;
  int degenerate_dmin_edges = 0;
  int entropy_cap_insufficient_edges = 0;  // (1 - alpha) d >= d_min+ + theta|c| unreachable
  int entropy_unresolved_edges = 0;        // mcl_entropy: low-order flux already violates
};

std::vector<double> compute_graph_viscosity(const FeOperators& ops, const ModelSpec& model,
                                            const StateField& u);

struct TimeDerivativeSolve {
  std::vector<StateVector> udot;
  double residual = 0.0;  // max-norm of b - M_C udot after the last sweep
};

/// Lumped-mass preconditioned Richardson iteration for M_C udot = -sum_j f_j . c_ij.
TimeDerivativeSolve solve_nodal_time_derivatives(const FeOperators& ops, const ModelSpec& model,
                                                 const StateField& u, int sweeps = 5);

/// f_ij = m_ij (udot_i - udot_j) + d_ij (u_i - u_j).
std::vector<StateVector> compute_target_fluxes(const FeOperators& ops, std::span<const double> d,
                                               const StateField& u,
                                               std::span<const StateVector> udot);

/// u_bar = (u_i + u_j)/2 - (f_j - f_i) . c_ij / (2 d). Throws DegenerateEdgeError if d == 0.
StateVector bar_state(const ModelSpec& model, const StateVector& ui, const StateVector& uj,
                      const Point& cij, double d);

/// Per-edge bar states. Edges with d == 0 fall back to the arithmetic mean when
/// the flux difference vanishes along c_ij, and throw otherwise.
std::vector<StateVector> compute_bar_states(const FeOperators& ops, const ModelSpec& model,
                                            std::span<const double> d, const StateField& u);

struct NodalBounds {
  std::vector<StateVector> min;
  std::vector<StateVector> max;
};

NodalBounds compute_local_bounds(const FeOperators& ops, const StateField& u,
                                 std::span<const StateVector> bar, BoundStencil stencil);

/// Single-edge clip of a scalar target flux. Returns f* such that
/// bar + f*/(2d) lies in [min_i, max_i] and bar - f*/(2d) in [min_j, max_j].
double clip_scalar_flux(double f, double d, double bar, double min_i, double max_i, double min_j,
                        double max_j);

/// Component-wise application of clip_scalar_flux. Throws LimiterError on
/// inconsistent bounds (min > max).
std::vector<double> mcl_limit_scalar(const FeOperators& ops, std::span<const double> d,
                                     std::span<const double> bar, std::span<const double> targets,
                                     std::span<const double> umin, std::span<const double> umax);

struct EulerLimitResult {
  std::vector<StateVector> limited;
  std::vector<double> beta;
};

/// Per-node bounds on the specific quantities (v_1, .., v_dim, E/rho) over the
/// nodal states of the stencil and the bar states of incident edges.
NodalBounds compute_specific_bounds(const FeOperators& ops, const ModelSpec& model,
                                    const StateField& u, std::span<const StateVector> bar);

/// Density clipped against local density bounds. With `specific`, the momentum
/// and energy fluxes are then limited so that velocity and E/rho of both
/// limited bar states stay in those bounds. Last, momentum and energy fluxes are
/// scaled by a common beta in [0, 1] (bisection) so that both limited bar states
/// keep rho >= rho_floor and p >= p_floor.
EulerLimitResult mcl_limit_euler(const FeOperators& ops, const ModelSpec& model,
                                 std::span<const double> d, std::span<const StateVector> bar,
                                 std::span<const StateVector> targets,
                                 const AdmissibilityParams& params,
                                 std::span<const double> rho_min,
                                 std::span<const double> rho_max,
                                 const NodalBounds* specific = nullptr);

struct EntropyDmin {
  double value = 0.0;
  bool degenerate = false;
};

/// Solves 1/2 (v_i - v_j)^T [d (u_j - u_i) - (f_j + f_i) . c_ij] = (psi_j - psi_i) . c_ij for d.
EntropyDmin entropy_dmin(const ModelSpec& model, const StateVector& ui, const StateVector& uj,
                         const Point& cij);

struct EntropyCap {
  double alpha = 1.0;
  bool insufficient = false;  // even alpha = 0 misses the required viscosity
};

/// alpha = min(candidate, max(0, 1 - (max(d_min, 0) + theta |c|) / d)).
EntropyCap entropy_cap(double d, double d_min, double theta, double c_norm,
                       double alpha_candidate);

/// Left minus right side of the edge entropy inequality; <= 0 certifies the edge.
double edge_entropy_residual(const ModelSpec& model, const StateVector& ui, const StateVector& uj,
                             const Point& cij, double d, const StateVector& f_star);

/// m_i du_i/dt = sum_{j != i} 2 d_ij (u*_ij - u_i), evaluated through the
/// antisymmetric edge fluxes g*_ij = d_ij (u_j - u_i) + f*_ij - (f_j + f_i) . c_ij.
RhsEvaluation semidiscrete_rhs(const FeOperators& ops, const ModelSpec& model,
                               const StateField& u, const LimiterConfig& limiter,
                               const AdmissibilityParams& params);

}  // namespace mclfem
