#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <span>
#include <vector>

namespace mclfem {

inline constexpr int kMaxComponents = 4;  // Euler in 2D: rho, m_x, m_y, E
inline constexpr int kMaxDim = 2;

using Point = std::array<double, kMaxDim>;

inline double dot(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += a[k] * b[k];
  return s;
}

inline double norm(const Point& a, int dim) { return std::sqrt(dot(a, a, dim)); }

/// Conserved state at one node. Fixed capacity, runtime size (1 for scalar
/// models, d+2 for Euler).
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int size, double fill = 0.0) : size_(size) {
    assert(size >= 0 && size <= kMaxComponents);
    for (int k = 0; k < size_; ++k) data_[k] = fill;
  }
  StateVector(std::initializer_list<double> values) : size_(static_cast<int>(values.size())) {
    assert(size_ <= kMaxComponents);
    int k = 0;
    for (double v : values) data_[k++] = v;
  }

  int size() const { return size_; }
  double& operator[](int k) { return data_[k]; }
  double operator[](int k) const { return data_[k]; }
  double* begin() { return data_.data(); }
  double* end() { return data_.data() + size_; }
  const double* begin() const { return data_.data(); }
  const double* end() const { return data_.data() + size_; }

  StateVector& operator+=(const StateVector& o) {
    for (int k = 0; k < size_; ++k) data_[k] += o.data_[k];
    return *this;
  }
  StateVector& operator-=(const StateVector& o) {
    for (int k = 0; k < size_; ++k) data_[k] -= o.data_[k];
    return *this;
  }
  StateVector& operator*=(double s) {
    for (int k = 0; k < size_; ++k) data_[k] *= s;
    return *this;
  }
  // Divide directly: 1/s overflows for subnormal s.
  StateVector& operator/=(double s) {
    for (int k = 0; k < size_; ++k) data_[k] /= s;
    return *this;
  }

  friend bool operator==(const StateVector& a, const StateVector& b) {
    if (a.size_ != b.size_) return false;
    for (int k = 0; k < a.size_; ++k)
      if (a.data_[k] != b.data_[k]) return false;
    return true;
  }

 private:
  std::array<double, kMaxComponents> data_{};
  int size_ = 0;
};

inline StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
inline StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
inline StateVector operator*(double s, StateVector a) { return a *= s; }
inline StateVector operator*(StateVector a, double s) { return a *= s; }
inline StateVector operator/(StateVector a, double s) { return a /= s; }
inline StateVector operator-(StateVector a) { return a *= -1.0; }

inline double dot(const StateVector& a, const StateVector& b) {
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double norm(const StateVector& a) { return std::sqrt(dot(a, a)); }

inline double max_abs(const StateVector& a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

/// Flux array f(u): one StateVector per spatial direction.
struct FluxMatrix {
  std::array<StateVector, kMaxDim> columns;
  int dim = 1;

  /// Contraction f(u) . c for a spatial vector c.
  StateVector dot(const Point& c) const {
    StateVector r(columns[0].size());
    for (int k = 0; k < dim; ++k) r += c[k] * columns[k];
    return r;
  }
};

/// Nodal solution u_h = sum_j u_j phi_j at a given time.
struct StateField {
  std::vector<StateVector> values;
  double time = 0.0;

  int size() const { return static_cast<int>(values.size()); }
  int components() const { return values.empty() ? 0 : values.front().size(); }
};

/// Node-major flat copy, values[i * m + k].
inline std::vector<double> flatten(const StateField& u) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(u.size()) * u.components());
  for (const auto& s : u.values)
    for (double v : s) out.push_back(v);
  return out;
}

inline std::vector<double> component(const StateField& u, int k) {
  std::vector<double> out(u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i) out[i] = u.values[i][k];
  return out;
}

}  // namespace mclfem
