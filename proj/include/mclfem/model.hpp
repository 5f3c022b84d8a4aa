#pragma once

#include <limits>
#include <string>
#include <vector>

#include "mclfem/state.hpp"

namespace mclfem {

enum class ModelKind { advection, burgers, euler };

/// Conservation law descriptor.
///
/// Scalar models carry m = 1; Euler carries m = d + 2 with the ordering
/// (rho, m_1, ..., m_d, E). Burgers uses f_k(u) = u^2 / 2 in every direction.
struct ModelSpec {
  ModelKind kind = ModelKind::advection;
  int dim = 1;
  Point velocity{1.0, 0.0};
  double gamma = 1.4;
  double wave_speed_safety = 1.0;

  static ModelSpec advection(int dim, const Point& velocity);
  static ModelSpec burgers(int dim);
  static ModelSpec euler(int dim, double gamma = 1.4);

  int components() const { return kind == ModelKind::euler ? dim + 2 : 1; }
  bool is_scalar() const { return kind != ModelKind::euler; }

  /// Throws ConfigError on gamma <= 1, dim outside {1, 2} or a safety factor < 1.
  void validate() const;
  bool operator==(const ModelSpec&) const = default;
};

std::string to_string(ModelKind kind);
std::string component_name(const ModelSpec& model, int k);

struct EntropyPairEval {
  double eta = 0.0;
  StateVector v;  // entropy variables eta'(u)
  Point q{};      // entropy flux
  Point psi{};    // entropy potential v^T f - q
};

struct AdmissibilityParams {
  double rho_floor = 1e-12;
  double pressure_floor = 1e-12;
  double energy_cap = std::numeric_limits<double>::infinity();
  double scalar_min = -std::numeric_limits<double>::infinity();
  double scalar_max = std::numeric_limits<double>::infinity();

  void validate() const;
  bool operator==(const AdmissibilityParams&) const = default;
};

enum class ViolationKind { non_finite, density, pressure, energy, scalar_lower, scalar_upper };

struct Violation {
  ViolationKind kind;
  double amount;  // distance to the violated bound (> 0)
};

std::string to_string(ViolationKind kind);

struct Primitive {
  double rho = 0.0;
  Point velocity{};
  double pressure = 0.0;
};

FluxMatrix flux(const ModelSpec& model, const StateVector& u);

/// Upper bound for the maximal signal speed of the Riemann problem with flux
/// f(u).n and data (uL, uR). Euler uses max(|v_L.n| + c_L, |v_R.n| + c_R)
/// scaled by `wave_speed_safety`.
double max_wave_speed(const ModelSpec& model, const StateVector& uL, const StateVector& uR,
                      const Point& n);

/// Square entropy u^2/2 for scalar models, eta = -rho s / (gamma - 1) with
/// s = log(p / rho^gamma) for Euler.
EntropyPairEval entropy_pair(const ModelSpec& model, const StateVector& u);

std::vector<Violation> check_admissible(const ModelSpec& model, const StateVector& u,
                                        const AdmissibilityParams& params);

double pressure(const ModelSpec& model, const StateVector& u);
Primitive primitive_from_conserved(const ModelSpec& model, const StateVector& u);
StateVector conserved_from_primitive(const ModelSpec& model, const Primitive& w);

}  // namespace mclfem
