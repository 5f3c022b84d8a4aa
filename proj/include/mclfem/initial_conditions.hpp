#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mclfem/config.hpp"
#include "mclfem/diagnostics.hpp"
#include "mclfem/mesh.hpp"
#include "mclfem/model.hpp"

namespace mclfem {

const std::vector<std::string>& initial_condition_names();

/// Parameter names and default values of a named initial condition for the
/// given model. Throws ConfigError for unknown names or incompatible models.
std::map<std::string, double> initial_condition_defaults(const std::string& name,
                                                         const ModelSpec& model);

using InitialFunction = std::function<StateVector(const Point&)>;

/// Pointwise initial data on the periodic box. Parameters missing from `ic`
/// take their defaults. `seed` drives the optional random perturbation of
/// kelvin_helmholtz_2d.
InitialFunction make_initial_condition(const ModelSpec& model, const InitialConditionConfig& ic,
                                       const Point& extent, std::uint64_t seed = 0);

/// Nodal interpolation u_i = u0(x_i). Throws InadmissibleStateError naming the
/// node location when a value violates `params`.
StateField interpolate_initial_condition(const Mesh& mesh, const ModelSpec& model,
                                         const InitialConditionConfig& ic,
                                         const AdmissibilityParams& params,
                                         std::uint64_t seed = 0);

/// Exact solution at time t where one is available: translation of any data
/// under linear advection, translation of the Euler density wave (sine_wave),
/// and the 1D Sod pair of Riemann fans until they meet. nullopt otherwise.
std::optional<ReferenceSolution> exact_solution(const ModelSpec& model,
                                                const InitialConditionConfig& ic,
                                                const Point& extent, double t);

}  // namespace mclfem
