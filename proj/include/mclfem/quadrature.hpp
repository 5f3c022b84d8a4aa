#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace mclfem {

/// Quadrature rule on the reference simplex in barycentric coordinates; weights sum to 1.
struct SimplexRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Degree-5 exact rules: 3-point Gauss-Legendre (segment), 7-point Dunavant (triangle).
inline SimplexRule degree5_rule(int dim) {
  SimplexRule r;
  if (dim == 1) {
    const double s = 0.5 * std::sqrt(3.0 / 5.0);
    r.points = {{0.5 - s, 0.5 + s, 0.0}, {0.5, 0.5, 0.0}, {0.5 + s, 0.5 - s, 0.0}};
    r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }
  const double sq = std::sqrt(15.0);
  const double b1 = (6.0 + sq) / 21.0, a1 = 1.0 - 2.0 * b1;
  const double b2 = (6.0 - sq) / 21.0, a2 = 1.0 - 2.0 * b2;
  const double w1 = (155.0 + sq) / 1200.0, w2 = (155.0 - sq) / 1200.0;
  r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
              {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
              {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}};
  r.weights = {0.225, w1, w1, w1, w2, w2, w2};
  return r;
}

}  // namespace mclfem
