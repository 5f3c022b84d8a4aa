#pragma once

namespace mclfem {

/// Primitive state of the 1D Euler equations.
struct Primitive1D {
  double rho = 0.0;
  double u = 0.0;
  double p = 0.0;
};

/// Exact solution of the 1D Euler Riemann problem for an ideal gas
/// (two-shock/two-rarefaction pressure function, Newton iteration on p*).
class ExactRiemannSolver {
 public:
  /// Throws ConfigError for gamma <= 1 or nonpositive data and
  /// InadmissibleStateError when the data generate vacuum.
  ExactRiemannSolver(double gamma, const Primitive1D& left, const Primitive1D& right);

  double star_pressure() const { return p_star_; }
  double star_velocity() const { return u_star_; }

  /// Largest |speed| of any wave of the fan (shock speed or rarefaction edge).
  double max_signal_speed() const;

  /// Self-similar solution at xi = x / t.
  Primitive1D sample(double xi) const;

 private:
  double pressure_function(double p, const Primitive1D& s, double c, double& derivative) const;

  double gamma_;
  Primitive1D left_, right_;
  double c_left_, c_right_;
  double p_star_ = 0.0;
  double u_star_ = 0.0;
};

}  // namespace mclfem
