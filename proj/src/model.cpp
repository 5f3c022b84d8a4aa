#include "mclfem/model.hpp"

#include <cmath>
#include <sstream>

#include "mclfem/errors.hpp"

namespace mclfem {

namespace {

void require_euler(const ModelSpec& model, const char* what) {
  if (model.kind != ModelKind::euler)
    throw ConfigError(std::string(what) + " is only defined for the Euler model");
}

std::string describe(const StateVector& u) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int k = 0; k < u.size(); ++k) os << (k ? ", " : "") << u[k];
  os << ')';
  return os.str();
}

}  // namespace

ModelSpec ModelSpec::advection(int dim, const Point& velocity) {
  ModelSpec m;
  m.kind = ModelKind::advection;
  m.dim = dim;
  m.velocity = velocity;
  return m;
}

ModelSpec ModelSpec::burgers(int dim) {
  ModelSpec m;
  m.kind = ModelKind::burgers;
  m.dim = dim;
  return m;
}

ModelSpec ModelSpec::euler(int dim, double gamma) {
  ModelSpec m;
  m.kind = ModelKind::euler;
  m.dim = dim;
  m.gamma = gamma;
  return m;
}

void ModelSpec::validate() const {
  if (dim != 1 && dim != 2) throw ConfigError("model dimension must be 1 or 2");
  if (kind == ModelKind::euler && !(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (!(wave_speed_safety >= 1.0)) throw ConfigError("wave_speed_safety must be >= 1");
}

void AdmissibilityParams::validate() const {
  if (!(rho_floor > 0.0)) throw ConfigError("rho_floor must be positive");
  if (!(pressure_floor >= 0.0)) throw ConfigError("pressure_floor must be nonnegative");
  if (!(energy_cap > 0.0)) throw ConfigError("energy_cap must be positive");
  if (scalar_min > scalar_max) throw ConfigError("scalar_min exceeds scalar_max");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::advection: return "advection";
    case ModelKind::burgers: return "burgers";
    case ModelKind::euler: return "euler";
  }
  return "unknown";
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::non_finite: return "non_finite";
    case ViolationKind::density: return "density";
    case ViolationKind::pressure: return "pressure";
    case ViolationKind::energy: return "energy";
    case ViolationKind::scalar_lower: return "scalar_lower";
    case ViolationKind::scalar_upper: return "scalar_upper";
  }
  return "unknown";
}

std::string component_name(const ModelSpec& model, int k) {
  if (model.is_scalar()) return "u";
  if (k == 0) return "rho";
  if (k == model.dim + 1) return "E";
  static const char* momentum[] = {"mx", "my"};
  return momentum[k - 1];
}

double pressure(const ModelSpec& model, const StateVector& u) {
  require_euler(model, "pressure");
  double kinetic = 0.0;
  for (int k = 0; k < model.dim; ++k) kinetic += u[1 + k] * u[1 + k];
  return (model.gamma - 1.0) * (u[model.dim + 1] - 0.5 * kinetic / u[0]);
}

Primitive primitive_from_conserved(const ModelSpec& model, const StateVector& u) {
  require_euler(model, "primitive_from_conserved");
  if (!(u[0] > 0.0))
    throw InadmissibleStateError("nonpositive density in state " + describe(u));
  Primitive w;
  w.rho = u[0];
  for (int k = 0; k < model.dim; ++k) w.velocity[k] = u[1 + k] / u[0];
  w.pressure = pressure(model, u);
  return w;
}

StateVector conserved_from_primitive(const ModelSpec& model, const Primitive& w) {
  require_euler(model, "conserved_from_primitive");
  StateVector u(model.components());
  u[0] = w.rho;
  double v2 = 0.0;
  for (int k = 0; k < model.dim; ++k) {
    u[1 + k] = w.rho * w.velocity[k];
    v2 += w.velocity[k] * w.velocity[k];
  }
  u[model.dim + 1] = w.pressure / (model.gamma - 1.0) + 0.5 * w.rho * v2;
  return u;
}

FluxMatrix flux(const ModelSpec& model, const StateVector& u) {
  FluxMatrix f;
  f.dim = model.dim;
  switch (model.kind) {
    case ModelKind::advection:
      for (int k = 0; k < model.dim && k < kMaxDim; ++k) f.columns[k] = StateVector{model.velocity[k] * u[0]};
      break;
    case ModelKind::burgers:
      for (int k = 0; k < model.dim && k < kMaxDim; ++k) f.columns[k] = StateVector{0.5 * u[0] * u[0]};
      break;
    case ModelKind::euler: {
      const Primitive w = primitive_from_conserved(model, u);
      const int E = model.dim + 1;
      for (int k = 0; k < model.dim; ++k) {
        StateVector col(model.components());
        const double vk = w.velocity[k];
        col[0] = u[1 + k];
        for (int l = 0; l < model.dim; ++l) col[1 + l] = vk * u[1 + l];
        col[1 + k] += w.pressure;
        col[E] = vk * (u[E] + w.pressure);
        f.columns[k] = col;
      }
      break;
    }
  }
  return f;
}

double max_wave_speed(const ModelSpec& model, const StateVector& uL, const StateVector& uR,
                      const Point& n) {
  switch (model.kind) {
    case ModelKind::advection:
      return std::abs(dot(model.velocity, n, model.dim));
    case ModelKind::burgers: {
      // f(u).n = (sum_k n_k) u^2 / 2, f'(u).n = (sum_k n_k) u
      double s = 0.0;
      for (int k = 0; k < model.dim; ++k) s += n[k];
      return std::abs(s) * std::max(std::abs(uL[0]), std::abs(uR[0]));
    }
    case ModelKind::euler: {
      auto speed = [&](const StateVector& u) {
        const Primitive w = primitive_from_conserved(model, u);
        if (!(w.pressure > 0.0))
          throw InadmissibleStateError("nonpositive pressure in state " + describe(u));
        const double c = std::sqrt(model.gamma * w.pressure / w.rho);
        return std::abs(dot(w.velocity, n, model.dim)) + c;
      };
      return model.wave_speed_safety * std::max(speed(uL), speed(uR));
    }
  }
  return 0.0;
}

EntropyPairEval entropy_pair(const ModelSpec& model, const StateVector& u) {
  EntropyPairEval e;
  if (model.is_scalar()) {
    const double s = u[0];
    e.eta = 0.5 * s * s;
    e.v = StateVector{s};
    for (int k = 0; k < model.dim; ++k) {
      if (model.kind == ModelKind::advection) {
        e.q[k] = model.velocity[k] * 0.5 * s * s;
        e.psi[k] = model.velocity[k] * 0.5 * s * s;
      } else {
        e.q[k] = s * s * s / 3.0;
        e.psi[k] = s * s * s / 6.0;
      }
    }
    return e;
  }

  const Primitive w = primitive_from_conserved(model, u);
  if (!(w.pressure > 0.0))
    throw InadmissibleStateError("nonpositive pressure in state " + describe(u));
  const double g = model.gamma;
  const double s = std::log(w.pressure) - g * std::log(w.rho);
  e.eta = -w.rho * s / (g - 1.0);
  double v2 = 0.0;
  for (int k = 0; k < model.dim; ++k) v2 += w.velocity[k] * w.velocity[k];
  e.v = StateVector(model.components());
  e.v[0] = (g - s) / (g - 1.0) - w.rho * v2 / (2.0 * w.pressure);
  for (int k = 0; k < model.dim; ++k) e.v[1 + k] = w.rho * w.velocity[k] / w.pressure;
  e.v[model.dim + 1] = -w.rho / w.pressure;
  for (int k = 0; k < model.dim; ++k) {
    e.q[k] = e.eta * w.velocity[k];
    e.psi[k] = u[1 + k];
  }
  return e;
}

std::vector<Violation> check_admissible(const ModelSpec& model, const StateVector& u,
                                        const AdmissibilityParams& params) {
  std::vector<Violation> out;
  for (double v : u) {
    if (!std::isfinite(v)) {
      out.push_back({ViolationKind::non_finite, std::numeric_limits<double>::infinity()});
      return out;
    }
  }
  if (model.is_scalar()) {
    if (u[0] < params.scalar_min) out.push_back({ViolationKind::scalar_lower, params.scalar_min - u[0]});
    if (u[0] > params.scalar_max) out.push_back({ViolationKind::scalar_upper, u[0] - params.scalar_max});
    return out;
  }
  const double rho = u[0];
  if (rho < params.rho_floor) out.push_back({ViolationKind::density, params.rho_floor - rho});
  if (rho > 0.0) {
    const double p = pressure(model, u);
    if (p < params.pressure_floor) out.push_back({ViolationKind::pressure, params.pressure_floor - p});
  }
  const double E = u[model.dim + 1];
  if (E > params.energy_cap) out.push_back({ViolationKind::energy, E - params.energy_cap});
  return out;
}

}  // namespace mclfem
