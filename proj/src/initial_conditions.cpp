#include "mclfem/initial_conditions.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "format.hpp"
#include "mclfem/errors.hpp"
#include "mclfem/riemann.hpp"

namespace mclfem {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Params = std::map<std::string, double>;

double wrap01(double s) { return s - std::floor(s); }

StateVector euler_state(const ModelSpec& model, double rho, double vx, double vy, double p) {
  Primitive w;
  w.rho = rho;
  w.velocity = {vx, model.dim == 2 ? vy : 0.0};
  w.pressure = p;
  return conserved_from_primitive(model, w);
}

Params merged(const std::string& name, const ModelSpec& model, const Params& given) {
  Params p = initial_condition_defaults(name, model);
  for (const auto& [k, v] : given) {
    if (!p.count(k))
      throw ConfigError("initial_condition." + k + ": unknown parameter for '" + name + "'");
    p[k] = v;
  }
  return p;
}

// Scalar profiles in normalised coordinates s in [0, 1)^d.
std::function<double(const Point&)> scalar_profile(const std::string& name, int dim,
                                                   const Params& p) {
  if (name == "constant") {
    const double v = p.at("value");
    return [v](const Point&) { return v; };
  }
  if (name == "sine_wave") {
    const double a = p.at("amplitude"), o = p.at("offset"), k = p.at("wavenumber");
    return [a, o, k, dim](const Point& s) {
      const double phase = dim == 2 ? s[0] + s[1] : s[0];
      return o + a * std::sin(kTwoPi * k * phase);
    };
  }
  if (name == "step") {
    const double lo = p.at("low"), hi = p.at("high"), l = p.at("left"), r = p.at("right");
    return [lo, hi, l, r, dim](const Point& s) {
      bool in = s[0] >= l && s[0] < r;
      if (dim == 2) in = in && s[1] >= l && s[1] < r;
      return in ? hi : lo;
    };
  }
  if (name == "composite_smooth") {
    const double a = p.at("amplitude"), o = p.at("offset"), w = p.at("width");
    return [a, o, w, dim](const Point& s) {
      double wave = std::sin(kTwoPi * s[0]);
      double r2 = (s[0] - 0.5) * (s[0] - 0.5);
      if (dim == 2) {
        wave *= std::cos(kTwoPi * s[1]);
        r2 += (s[1] - 0.5) * (s[1] - 0.5);
      }
      return o + a * (0.5 * wave + 0.5 * std::exp(-r2 / (w * w)));
    };
  }
  throw ConfigError("initial_condition.name: '" + name + "' is not defined for scalar models");
}

Point normalise(const Point& x, const Point& extent, int dim) {
  Point s{};
  for (int k = 0; k < dim; ++k) s[k] = wrap01(x[k] / extent[k]);
  return s;
}

}  // namespace

const std::vector<std::string>& initial_condition_names() {
  static const std::vector<std::string> names{"constant", "sine_wave", "step", "composite_smooth",
                                              "sod", "euler_blast", "kelvin_helmholtz_2d"};
  return names;
}

std::map<std::string, double> initial_condition_defaults(const std::string& name,
                                                         const ModelSpec& model) {
  const bool euler = model.kind == ModelKind::euler;
  auto scalar_only = [&] {
    if (euler) throw ConfigError("initial_condition.name: '" + name + "' needs a scalar model");
  };
  auto euler_only = [&] {
    if (!euler) throw ConfigError("initial_condition.name: '" + name + "' needs the Euler model");
  };
  if (name == "constant") {
    if (euler) return Params{{"rho", 1.0}, {"vx", 0.0}, {"vy", 0.0}, {"p", 1.0}};
    return Params{{"value", 0.5}};
  }
  if (name == "sine_wave") {
    if (euler)
      return Params{{"amplitude", 0.2}, {"offset", 1.0}, {"wavenumber", 1.0},
                    {"vx", 1.0},        {"vy", 0.0},     {"p", 1.0}};
    return Params{{"amplitude", 1.0}, {"offset", 0.0}, {"wavenumber", 1.0}};
  }
  if (name == "step") {
    scalar_only();
    return Params{{"low", 0.0}, {"high", 1.0}, {"left", 0.25}, {"right", 0.75}};
  }
  if (name == "composite_smooth") {
    scalar_only();
    return Params{{"amplitude", 1.0}, {"offset", 0.0}, {"width", 0.1}};
  }
  if (name == "sod") {
    euler_only();
    return Params{{"rho_l", 1.0}, {"u_l", 0.0}, {"p_l", 1.0},       {"rho_r", 0.125},
                  {"u_r", 0.0},   {"p_r", 0.1}, {"interface", 0.5}};
  }
  if (name == "euler_blast") {
    euler_only();
    return Params{{"rho", 1.0}, {"p_in", 10.0}, {"p_out", 0.1}, {"radius", 0.1}};
  }
  if (name == "kelvin_helmholtz_2d") {
    euler_only();
    if (model.dim != 2) throw ConfigError("initial_condition.name: kelvin_helmholtz_2d needs dim 2");
    return Params{{"rho_in", 2.0},      {"rho_out", 1.0}, {"v_in", 0.5}, {"v_out", -0.5},
                  {"p", 2.5},           {"perturbation", 0.01}, {"noise", 0.0}};
  }
  throw ConfigError("initial_condition.name: unknown initial condition '" + name + "'");
}

InitialFunction make_initial_condition(const ModelSpec& model, const InitialConditionConfig& ic,
                                       const Point& extent, std::uint64_t seed) {
  const Params p = merged(ic.name, model, ic.params);
  const int dim = model.dim;
  if (model.is_scalar()) {
    auto f = scalar_profile(ic.name, dim, p);
    return [f, extent, dim](const Point& x) { return StateVector{f(normalise(x, extent, dim))}; };
  }
  const ModelSpec m = model;
  if (ic.name == "constant") {
    const StateVector s = euler_state(m, p.at("rho"), p.at("vx"), p.at("vy"), p.at("p"));
    return [s](const Point&) { return s; };
  }
  if (ic.name == "sine_wave") {
    const double a = p.at("amplitude"), o = p.at("offset"), k = p.at("wavenumber");
    const double vx = p.at("vx"), vy = p.at("vy"), pr = p.at("p");
    return [=](const Point& x) {
      const Point s = normalise(x, extent, dim);
      const double phase = dim == 2 ? s[0] + s[1] : s[0];
      return euler_state(m, o + a * std::sin(kTwoPi * k * phase), vx, vy, pr);
    };
  }
  if (ic.name == "sod") {
    const StateVector left = euler_state(m, p.at("rho_l"), p.at("u_l"), 0.0, p.at("p_l"));
    const StateVector right = euler_state(m, p.at("rho_r"), p.at("u_r"), 0.0, p.at("p_r"));
    const double iface = p.at("interface");
    return [=](const Point& x) { return normalise(x, extent, dim)[0] < iface ? left : right; };
  }
  if (ic.name == "euler_blast") {
    const StateVector in = euler_state(m, p.at("rho"), 0.0, 0.0, p.at("p_in"));
    const StateVector out = euler_state(m, p.at("rho"), 0.0, 0.0, p.at("p_out"));
    const double r = p.at("radius");
    return [=](const Point& x) {
      const Point s = normalise(x, extent, dim);
      double r2 = (s[0] - 0.5) * (s[0] - 0.5);
      if (dim == 2) r2 += (s[1] - 0.5) * (s[1] - 0.5);
      return r2 < r * r ? in : out;
    };
  }
  // kelvin_helmholtz_2d: dense band |y - 1/2| < 1/4 moving against the
  // surrounding gas, sinusoidal transverse velocity plus optional seeded noise.
  struct Mode {
    int kx, ky;
    double amp, phase;
  };
  std::vector<Mode> modes;
  if (p.at("noise") != 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, kTwoPi);
    for (int kx = 1; kx <= 4; ++kx)
      for (int ky = 1; ky <= 4; ++ky) {
        const double a = amp(rng);
        modes.push_back({kx, ky, a, phase(rng)});
      }
  }
  const double rho_in = p.at("rho_in"), rho_out = p.at("rho_out");
  const double v_in = p.at("v_in"), v_out = p.at("v_out"), pr = p.at("p");
  const double pert = p.at("perturbation"), noise = p.at("noise");
  return [=](const Point& x) {
    const Point s = normalise(x, extent, 2);
    const bool in = std::abs(s[1] - 0.5) < 0.25;
    double vy = pert * std::sin(2.0 * kTwoPi * s[0]);
    for (const auto& md : modes)
      vy += noise / 16.0 * md.amp * std::sin(kTwoPi * (md.kx * s[0] + md.ky * s[1]) + md.phase);
    return euler_state(m, in ? rho_in : rho_out, in ? v_in : v_out, vy, pr);
  };
}

StateField interpolate_initial_condition(const Mesh& mesh, const ModelSpec& model,
                                         const InitialConditionConfig& ic,
                                         const AdmissibilityParams& params, std::uint64_t seed) {
  if (model.dim != mesh.dim) throw ConfigError("model and mesh dimensions differ");
  const auto u0 = make_initial_condition(model, ic, mesh.extent, seed);
  StateField u;
  u.time = 0.0;
  u.values.reserve(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const Point& x = mesh.node_coords[i];
    u.values.push_back(u0(x));
    const auto v = check_admissible(model, u.values.back(), params);
    if (!v.empty()) {
      std::string where = detail::fmt17(x[0]);
      if (mesh.dim == 2) where += ", " + detail::fmt17(x[1]);
      throw InadmissibleStateError("initial condition '" + ic.name + "' at node " +
                                   std::to_string(i) + " (x = " + where + ") violates " +
                                   to_string(v.front().kind) + " bound");
    }
  }
  return u;
}

std::optional<ReferenceSolution> exact_solution(const ModelSpec& model,
                                                const InitialConditionConfig& ic,
                                                const Point& extent, double t) {
  const int dim = model.dim;
  if (model.kind == ModelKind::advection) {
    const auto u0 = make_initial_condition(model, ic, extent);
    const Point a = model.velocity;
    return ReferenceSolution([u0, a, t, dim](const Point& x) {
      Point y = x;
      for (int k = 0; k < dim; ++k) y[k] -= a[k] * t;
      return u0(y);
    });
  }
  if (model.kind != ModelKind::euler) return std::nullopt;
  const Params p = merged(ic.name, model, ic.params);
  if (ic.name == "constant") return ReferenceSolution(make_initial_condition(model, ic, extent));
  if (ic.name == "sine_wave") {
    const auto u0 = make_initial_condition(model, ic, extent);
    const Point v{p.at("vx"), p.at("vy")};
    return ReferenceSolution([u0, v, t, dim](const Point& x) {
      Point y = x;
      for (int k = 0; k < dim; ++k) y[k] -= v[k] * t;
      return u0(y);
    });
  }
  if (ic.name == "sod" && dim == 1) {
    if (t <= 0.0) return ReferenceSolution(make_initial_condition(model, ic, extent));
    const Primitive1D left{p.at("rho_l"), p.at("u_l"), p.at("p_l")};
    const Primitive1D right{p.at("rho_r"), p.at("u_r"), p.at("p_r")};
    const ExactRiemannSolver at_iface(model.gamma, left, right);
    const ExactRiemannSolver at_origin(model.gamma, right, left);
    const double L = extent[0];
    const double xi = p.at("interface") * L;
    // The two fans must not have reached the midpoints between the jumps.
    const double reach = t * std::max(at_iface.max_signal_speed(), at_origin.max_signal_speed());
    if (reach >= 0.5 * std::min(xi, L - xi)) return std::nullopt;
    return ReferenceSolution([=](const Point& x) {
      const double s = x[0] - L * std::floor(x[0] / L);
      if (s < 0.5 * xi) return exact_riemann_reference(model, at_origin, s / t);
      if (s >= 0.5 * (xi + L)) return exact_riemann_reference(model, at_origin, (s - L) / t);
      return exact_riemann_reference(model, at_iface, (s - xi) / t);
    });
  }
  return std::nullopt;
}

}  // namespace mclfem
