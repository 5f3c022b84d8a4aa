#include "mclfem/riemann.hpp"

#include <algorithm>
#include <cmath>

#include "mclfem/errors.hpp"

namespace mclfem {

ExactRiemannSolver::ExactRiemannSolver(double gamma, const Primitive1D& left,
                                       const Primitive1D& right)
    : gamma_(gamma), left_(left), right_(right) {
  if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (!(left.rho > 0.0 && right.rho > 0.0 && left.p > 0.0 && right.p > 0.0))
    throw ConfigError("Riemann data need positive densities and pressures");
  c_left_ = std::sqrt(gamma * left.p / left.rho);
  c_right_ = std::sqrt(gamma * right.p / right.rho);
  if (2.0 * (c_left_ + c_right_) / (gamma - 1.0) <= right.u - left.u)
    throw InadmissibleStateError("Riemann data generate vacuum (unsupported)");

  // Two-rarefaction guess, then Newton on f_L(p) + f_R(p) + du = 0.
  const double z = (gamma - 1.0) / (2.0 * gamma);
  double p = std::pow((c_left_ + c_right_ - 0.5 * (gamma - 1.0) * (right.u - left.u)) /
                          (c_left_ / std::pow(left.p, z) + c_right_ / std::pow(right.p, z)),
                      1.0 / z);
  p = std::max(p, 1e-14);
  for (int it = 0; it < 200; ++it) {
    double dl = 0.0, dr = 0.0;
    const double fl = pressure_function(p, left_, c_left_, dl);
    const double fr = pressure_function(p, right_, c_right_, dr);
    double p_new = p - (fl + fr + right.u - left.u) / (dl + dr);
    if (p_new <= 0.0) p_new = 0.5 * p;
    const double change = 2.0 * std::abs(p_new - p) / (p_new + p);
    p = p_new;
    if (change < 1e-12) break;
  }
  double dl = 0.0, dr = 0.0;
  const double fl = pressure_function(p, left_, c_left_, dl);
  const double fr = pressure_function(p, right_, c_right_, dr);
  p_star_ = p;
  u_star_ = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
}

double ExactRiemannSolver::pressure_function(double p, const Primitive1D& s, double c,
                                             double& derivative) const {
  const double g = gamma_;
  if (p > s.p) {
    const double a = 2.0 / ((g + 1.0) * s.rho);
    const double b = (g - 1.0) / (g + 1.0) * s.p;
    const double root = std::sqrt(a / (p + b));
    derivative = root * (1.0 - 0.5 * (p - s.p) / (p + b));
    return (p - s.p) * root;
  }
  const double ratio = p / s.p;
  derivative = std::pow(ratio, -(g + 1.0) / (2.0 * g)) / (s.rho * c);
  return 2.0 * c / (g - 1.0) * (std::pow(ratio, (g - 1.0) / (2.0 * g)) - 1.0);
}

double ExactRiemannSolver::max_signal_speed() const {
  const double g = gamma_;
  auto wave = [&](const Primitive1D& s, double c, double sign) {
    if (p_star_ > s.p)
      return std::abs(s.u + sign * c * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / s.p +
                                                 (g - 1.0) / (2.0 * g)));
    const double c_star = c * std::pow(p_star_ / s.p, (g - 1.0) / (2.0 * g));
    return std::max(std::abs(s.u + sign * c), std::abs(u_star_ + sign * c_star));
  };
  return std::max(wave(left_, c_left_, -1.0), wave(right_, c_right_, 1.0));
}

Primitive1D ExactRiemannSolver::sample(double xi) const {
  const double g = gamma_;
  const double gm = (g - 1.0) / (g + 1.0);
  if (xi <= u_star_) {
    const Primitive1D& s = left_;
    const double c = c_left_;
    if (p_star_ > s.p) {
      const double shock = s.u - c * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / s.p +
                                               (g - 1.0) / (2.0 * g));
      if (xi <= shock) return s;
      const double rho = s.rho * (p_star_ / s.p + gm) / (gm * p_star_ / s.p + 1.0);
      return {rho, u_star_, p_star_};
    }
    const double head = s.u - c;
    if (xi <= head) return s;
    const double c_star = c * std::pow(p_star_ / s.p, (g - 1.0) / (2.0 * g));
    const double tail = u_star_ - c_star;
    if (xi >= tail) return {s.rho * std::pow(p_star_ / s.p, 1.0 / g), u_star_, p_star_};
    const double factor = 2.0 / (g + 1.0) + gm / c * (s.u - xi);
    return {s.rho * std::pow(factor, 2.0 / (g - 1.0)),
            2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * s.u + xi),
            s.p * std::pow(factor, 2.0 * g / (g - 1.0))};
  }
  const Primitive1D& s = right_;
  const double c = c_right_;
  if (p_star_ > s.p) {
    const double shock = s.u + c * std::sqrt((g + 1.0) / (2.0 * g) * p_star_ / s.p +
                                             (g - 1.0) / (2.0 * g));
    if (xi >= shock) return s;
    const double rho = s.rho * (p_star_ / s.p + gm) / (gm * p_star_ / s.p + 1.0);
    return {rho, u_star_, p_star_};
  }
  const double head = s.u + c;
  if (xi >= head) return s;
  const double c_star = c * std::pow(p_star_ / s.p, (g - 1.0) / (2.0 * g));
  const double tail = u_star_ + c_star;
  if (xi <= tail) return {s.rho * std::pow(p_star_ / s.p, 1.0 / g), u_star_, p_star_};
  const double factor = 2.0 / (g + 1.0) - gm / c * (s.u - xi);
  return {s.rho * std::pow(factor, 2.0 / (g - 1.0)),
          2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * s.u + xi),
          s.p * std::pow(factor, 2.0 * g / (g - 1.0))};
}

}  // namespace mclfem
