#include "mclfem/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "format.hpp"
#include "mclfem/errors.hpp"
#include "mclfem/quadrature.hpp"

namespace mclfem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double wrap(double x, double L) {
  double r = x - L * std::floor(x / L);
  if (r >= L) r -= L;
  return r;
}

Point wrap_point(const Point& p, const Point& extent, int dim) {
  Point r = p;
  for (int k = 0; k < dim; ++k) r[k] = wrap(p[k], extent[k]);
  return r;
}

// Barycentric coordinates of p in element e (unwrapped geometry).
std::array<double, 3> barycentric(const Mesh& mesh, int e, const Point& p) {
  const auto g = basis_gradients(mesh, e);
  const Point& p0 = mesh.vertex(e, 0);
  Point rel{p[0] - p0[0], p[1] - p0[1]};
  std::array<double, 3> lam{};
  for (int a = 0; a <= mesh.dim; ++a) lam[a] = (a == 0 ? 1.0 : 0.0) + dot(g[a], rel, mesh.dim);
  return lam;
}

Point physical_point(const Mesh& mesh, int e, const std::array<double, 3>& lam) {
  Point x{};
  for (int a = 0; a <= mesh.dim; ++a)
    for (int k = 0; k < mesh.dim; ++k) x[k] += lam[a] * mesh.vertex(e, a)[k];
  return x;
}

double trapezoid(std::span<const double> t, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t n = 1; n < t.size(); ++n) s += 0.5 * (t[n] - t[n - 1]) * (y[n] + y[n - 1]);
  return s;
}

}  // namespace

double total_entropy(const FeOperators& ops, const ModelSpec& model, const StateField& u,
                     double offset) {
  double s = 0.0;
  for (int i = 0; i < ops.n_nodes; ++i)
    s += ops.lumped_mass[i] * (entropy_pair(model, u.values[i]).eta + offset);
  return s;
}

StateVector conserved_totals(const FeOperators& ops, const StateField& u) {
  StateVector s(u.components());
  for (int i = 0; i < ops.n_nodes; ++i) s += ops.lumped_mass[i] * u.values[i];
  return s;
}

double bv_integrand(const FeOperators& ops, const StateField& u) {
  double s = 0.0;
  for (int e = 0; e < ops.num_edges(); ++e) {
    const auto [i, j] = ops.edges[e];
    const StateVector diff = u.values[j] - u.values[i];
    s += 2.0 * ops.grad_norm(e) * dot(diff, diff);
  }
  return s;
}

StateVector field_min(const StateField& u) {
  StateVector r(u.components(), std::numeric_limits<double>::infinity());
  for (const auto& s : u.values)
    for (int k = 0; k < s.size(); ++k) r[k] = std::min(r[k], s[k]);
  return r;
}

StateVector field_max(const StateField& u) {
  StateVector r(u.components(), -std::numeric_limits<double>::infinity());
  for (const auto& s : u.values)
    for (int k = 0; k < s.size(); ++k) r[k] = std::max(r[k], s[k]);
  return r;
}

double DiagnosticsRecord::max_relative_drift(int component) const {
  if (conserved_totals.empty()) return 0.0;
  const double ref = conserved_totals.front()[component];
  double scale = std::abs(ref);
  for (const auto& a : absolute_totals) scale = std::max(scale, a[component]);
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& c : conserved_totals) worst = std::max(worst, std::abs(c[component] - ref));
  return worst / scale;
}

double DiagnosticsRecord::max_entropy_increase() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < total_entropy.size(); ++n)
    worst = std::max(worst, total_entropy[n] - total_entropy[n - 1]);
  return total_entropy.size() < 2 ? 0.0 : worst;
}

DiagnosticsAccumulator::DiagnosticsAccumulator(const FeOperators& ops, const ModelSpec& model,
                                               const AdmissibilityParams& params,
                                               double entropy_offset)
    : ops_(&ops), model_(model), params_(params), offset_(entropy_offset) {}

void DiagnosticsAccumulator::observe(const StateField& u, double dt,
                                     double max_entropy_residual) {
  auto& r = record_;
  const double bv = bv_integrand(*ops_, u);
  if (!r.times.empty()) r.bv_time_integral += 0.5 * dt * (bv + r.bv_integrand.back());
  r.times.push_back(u.time);
  r.dts.push_back(dt);
  r.total_entropy.push_back(total_entropy(*ops_, model_, u, offset_));
  r.conserved_totals.push_back(conserved_totals(*ops_, u));
  StateVector abs_total(u.components());
  for (int i = 0; i < ops_->n_nodes; ++i)
    for (int k = 0; k < abs_total.size(); ++k)
      abs_total[k] += ops_->lumped_mass[i] * std::abs(u.values[i][k]);
  r.absolute_totals.push_back(abs_total);
  r.bv_integrand.push_back(bv);
  r.min.push_back(field_min(u));
  r.max.push_back(field_max(u));
  int rho_ok = 1, e_ok = 1;
  if (!model_.is_scalar()) {
    const int last = model_.components() - 1;
    rho_ok = r.min.back()[0] >= params_.rho_floor;
    e_ok = r.max.back()[last] <= params_.energy_cap;
  }
  r.density_ok.push_back(rho_ok);
  r.energy_ok.push_back(e_ok);
  r.max_entropy_residual.push_back(max_entropy_residual);
}

void write_diagnostics_csv(const DiagnosticsRecord& record, const ModelSpec& model,
                           std::ostream& out) {
  using detail::fmt17;
  const int m = model.components();
  out << "step,t,dt";
  for (int k = 0; k < m; ++k) out << ",total_" << component_name(model, k);
  out << ",eta_omega,bv_integrand";
  for (int k = 0; k < m; ++k) out << ",min_" << component_name(model, k);
  for (int k = 0; k < m; ++k) out << ",max_" << component_name(model, k);
  out << ",density_ok,energy_ok,max_entropy_residual\n";
  for (std::size_t n = 0; n < record.size(); ++n) {
    out << n << ',' << fmt17(record.times[n]) << ',' << fmt17(record.dts[n]);
    for (int k = 0; k < m; ++k) out << ',' << fmt17(record.conserved_totals[n][k]);
    out << ',' << fmt17(record.total_entropy[n]) << ',' << fmt17(record.bv_integrand[n]);
    for (int k = 0; k < m; ++k) out << ',' << fmt17(record.min[n][k]);
    for (int k = 0; k < m; ++k) out << ',' << fmt17(record.max[n][k]);
    out << ',' << record.density_ok[n] << ',' << record.energy_ok[n] << ','
        << fmt17(record.max_entropy_residual[n]) << '\n';
  }
}

WeakBv weak_bv_functional(const FeOperators& ops, const Trajectory& trajectory,
                          const DiagnosticsRecord& record) {
  WeakBv out;
  for (const auto& s : trajectory.snapshots) {
    out.snapshot_times.push_back(s.time);
    out.snapshot_integrand.push_back(bv_integrand(ops, s));
  }
  out.time_integral = trapezoid(record.times, record.bv_integrand);
  return out;
}

TestFunction cosine_bump_test_function(int dim, const Point& extent, double t_end) {
  if (!(t_end > 0.0)) throw ConfigError("test function needs t_end > 0");
  const double pi = std::numbers::pi;
  // Phase shift of 1: with a pure cosine, every residual against odd data
  // (sine waves) vanishes by symmetry.
  auto space = [dim, extent, pi](const Point& x) {
    double s = std::cos(2.0 * pi * x[0] / extent[0] + 1.0);
    if (dim == 2) s *= std::cos(2.0 * pi * x[1] / extent[1] + 1.0);
    return s;
  };
  TestFunction phi;
  phi.name = dim == 1 ? "cos(2 pi x + 1) sin^4(pi t / T)"
                      : "cos(2 pi x + 1) cos(2 pi y + 1) sin^4(pi t / T)";
  phi.t_end = t_end;
  phi.value = [space, t_end, pi](const Point& x, double t) {
    return space(x) * std::pow(std::sin(pi * t / t_end), 4);
  };
  phi.time_derivative = [space, t_end, pi](const Point& x, double t) {
    const double a = pi * t / t_end;
    return space(x) * 4.0 * std::pow(std::sin(a), 3) * std::cos(a) * pi / t_end;
  };
  return phi;
}

TestFunction zero_test_function(double t_end) {
  TestFunction phi;
  phi.name = "zero";
  phi.t_end = t_end;
  phi.value = [](const Point&, double) { return 0.0; };
  phi.time_derivative = [](const Point&, double) { return 0.0; };
  return phi;
}

void ConsistencyReport::fit_slopes() {
  std::vector<double> h, a, b, c;
  for (const auto& e : levels) {
    h.push_back(e.h);
    a.push_back(e.R1);
    b.push_back(e.R2);
    c.push_back(e.R3);
  }
  slope_r1 = fit_loglog_slope(h, a);
  slope_r2 = fit_loglog_slope(h, b);
  slope_r3 = fit_loglog_slope(h, c);
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return kNaN;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || y[k] == 0.0 || !std::isfinite(y[k])) return kNaN;
    const double lx = std::log(x[k]), ly = std::log(std::abs(y[k]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return kNaN;
  return (n * sxy - sx * sy) / den;
}

ConsistencyEntry consistency_errors(const Mesh& mesh, const FeOperators& ops,
                                    const ModelSpec& model,
                                    std::span<const StepSample> samples,
                                    const TestFunction& phi) {
  if (samples.size() < 2) throw ConfigError("consistency: need at least two time samples");
  const int n = mesh.num_nodes();
  const int m = model.components();
  const int ne = ops.num_edges();

  // Compact support check at the ends of the sampled interval.
  double phi_scale = 0.0, phi_ends = 0.0;
  for (const auto& s : samples)
    for (int i = 0; i < n; ++i) phi_scale = std::max(phi_scale, std::abs(phi.value(mesh.node_coords[i], s.t)));
  for (const double t : {samples.front().t, samples.back().t})
    for (int i = 0; i < n; ++i) phi_ends = std::max(phi_ends, std::abs(phi.value(mesh.node_coords[i], t)));
  if (phi_ends > 1e-12 * std::max(phi_scale, 1.0))
    throw ConfigError("consistency: test function '" + phi.name +
                      "' does not vanish at the ends of the sampled interval");

  const SimplexRule rule = degree5_rule(mesh.dim);
  std::vector<double> times;
  std::vector<std::vector<double>> r(3 * m);
  std::vector<double> phi_n(n), phidot_n(n);
  std::vector<FluxMatrix> nodal_flux(n);

  for (const auto& s : samples) {
    if (s.u.size() != n || static_cast<int>(s.d.size()) != ne ||
        static_cast<int>(s.alpha.size()) != ne)
      throw DimensionError("consistency: sample at t = " + detail::fmt17(s.t) +
                           " lacks edge data");
    for (int i = 0; i < n; ++i) {
      phi_n[i] = phi.value(mesh.node_coords[i], s.t);
      phidot_n[i] = phi.time_derivative(mesh.node_coords[i], s.t);
      nodal_flux[i] = flux(model, s.u.values[i]);
    }
    StateVector r1(m), r2(m), r3(m);
    for (int e = 0; e < ne; ++e) {
      const auto [i, j] = ops.edges[e];
      const StateVector du = s.u.values[j] - s.u.values[i];
      r1 -= ops.edge_mass[e] * (phidot_n[j] - phidot_n[i]) * du;
      r3 -= (1.0 - s.alpha[e]) * s.d[e] * (phi_n[i] - phi_n[j]) * du;
    }
    for (int el = 0; el < mesh.num_elements(); ++el) {
      const auto g = basis_gradients(mesh, el);
      const double vol = std::abs(element_volume(mesh, el));
      Point grad_phi{};
      for (int a = 0; a <= mesh.dim; ++a)
        for (int k = 0; k < mesh.dim; ++k) grad_phi[k] += phi_n[mesh.elements[el][a]] * g[a][k];
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& lam = rule.points[q];
        StateVector uq(m);
        StateVector interp(m);
        for (int a = 0; a <= mesh.dim; ++a) {
          const int node = mesh.elements[el][a];
          uq += lam[a] * s.u.values[node];
          interp += lam[a] * nodal_flux[node].dot(grad_phi);
        }
        const StateVector exact = flux(model, uq).dot(grad_phi);
        r2 += rule.weights[q] * vol * (exact - interp);
      }
    }
    times.push_back(s.t);
    for (int k = 0; k < m; ++k) {
      r[k].push_back(r1[k]);
      r[m + k].push_back(r2[k]);
      r[2 * m + k].push_back(r3[k]);
    }
  }

  ConsistencyEntry out;
  out.h = mesh.h_max;
  out.r1 = StateVector(m);
  out.r2 = StateVector(m);
  out.r3 = StateVector(m);
  for (int k = 0; k < m; ++k) {
    out.r1[k] = trapezoid(times, r[k]);
    out.r2[k] = trapezoid(times, r[m + k]);
    out.r3[k] = trapezoid(times, r[2 * m + k]);
  }
  out.R1 = max_abs(out.r1);
  out.R2 = max_abs(out.r2);
  out.R3 = max_abs(out.r3);
  return out;
}

void write_consistency_csv(const ConsistencyReport& report, std::ostream& out) {
  using detail::fmt17;
  out << "# test_function: " << report.test_function << '\n';
  out << "h,R1,R2,R3\n";
  for (const auto& e : report.levels)
    out << fmt17(e.h) << ',' << fmt17(e.R1) << ',' << fmt17(e.R2) << ',' << fmt17(e.R3) << '\n';
  out << "slope," << fmt17(report.slope_r1) << ',' << fmt17(report.slope_r2) << ','
      << fmt17(report.slope_r3) << '\n';
}

ErrorNorms error_norms(const Mesh& mesh, const StateField& u, const ReferenceSolution& reference) {
  const int m = u.components();
  ErrorNorms out;
  out.l1 = StateVector(m);
  out.l2 = StateVector(m);
  out.linf = StateVector(m);
  const SimplexRule rule = degree5_rule(mesh.dim);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double vol = std::abs(element_volume(mesh, e));
    auto accumulate = [&](const std::array<double, 3>& lam, double weight) {
      StateVector uh(m);
      for (int a = 0; a <= mesh.dim; ++a) uh += lam[a] * u.values[mesh.elements[e][a]];
      const Point x = wrap_point(physical_point(mesh, e, lam), mesh.extent, mesh.dim);
      const StateVector diff = uh - reference(x);
      for (int k = 0; k < m; ++k) {
        const double a = std::abs(diff[k]);
        out.l1[k] += weight * vol * a;
        out.l2[k] += weight * vol * a * a;
        out.linf[k] = std::max(out.linf[k], a);
      }
    };
    for (std::size_t q = 0; q < rule.weights.size(); ++q) accumulate(rule.points[q], rule.weights[q]);
    for (int a = 0; a <= mesh.dim; ++a) {
      std::array<double, 3> lam{};
      lam[a] = 1.0;
      accumulate(lam, 0.0);
    }
  }
  double l2sq = 0.0;
  for (int k = 0; k < m; ++k) {
    out.l1_total += out.l1[k];
    l2sq += out.l2[k];
    out.l2[k] = std::sqrt(out.l2[k]);
    out.linf_total = std::max(out.linf_total, out.linf[k]);
  }
  out.l2_total = std::sqrt(l2sq);
  return out;
}

StateVector exact_riemann_reference(const ModelSpec& model, const ExactRiemannSolver& solver,
                                    double xi) {
  if (model.kind != ModelKind::euler || model.dim != 1)
    throw ConfigError("exact Riemann reference needs the 1D Euler model");
  const Primitive1D w = solver.sample(xi);
  Primitive p;
  p.rho = w.rho;
  p.velocity = {w.u, 0.0};
  p.pressure = w.p;
  return conserved_from_primitive(model, p);
}

EocTable make_eoc_table(std::span<const double> h, std::span<const ErrorNorms> errors) {
  if (h.size() != errors.size()) throw DimensionError("EOC table: h and error counts differ");
  for (std::size_t k = 1; k < h.size(); ++k)
    if (!(h[k] < h[k - 1])) throw ConfigError("EOC table: h must be strictly decreasing");
  EocTable t;
  for (std::size_t k = 0; k < h.size(); ++k) {
    EocRow row;
    row.h = h[k];
    row.l1 = errors[k].l1_total;
    row.l2 = errors[k].l2_total;
    row.linf = errors[k].linf_total;
    row.eoc_l1 = row.eoc_l2 = row.eoc_linf = kNaN;
    if (k > 0) {
      const auto& prev = t.rows.back();
      const double lr = std::log(prev.h / row.h);
      row.eoc_l1 = std::log(prev.l1 / row.l1) / lr;
      row.eoc_l2 = std::log(prev.l2 / row.l2) / lr;
      row.eoc_linf = std::log(prev.linf / row.linf) / lr;
    }
    t.rows.push_back(row);
  }
  return t;
}

void write_eoc_csv(const EocTable& table, std::ostream& out) {
  using detail::fmt17;
  out << "h,l1,l2,linf,eoc_l1,eoc_l2,eoc_linf\n";
  for (const auto& r : table.rows)
    out << fmt17(r.h) << ',' << fmt17(r.l1) << ',' << fmt17(r.l2) << ',' << fmt17(r.linf) << ','
        << fmt17(r.eoc_l1) << ',' << fmt17(r.eoc_l2) << ',' << fmt17(r.eoc_linf) << '\n';
}

ProbeGrid make_probe_grid(int dim, int per_axis, const Point& extent) {
  if (dim < 1 || dim > 2 || per_axis < 1) throw ConfigError("probe grid: bad dimensions");
  ProbeGrid g;
  g.dim = dim;
  g.extent = extent;
  g.counts = {per_axis, dim == 2 ? per_axis : 1};
  g.cell_volume = extent[0] / per_axis;
  if (dim == 2) g.cell_volume *= extent[1] / per_axis;
  for (int b = 0; b < g.counts[1]; ++b)
    for (int a = 0; a < g.counts[0]; ++a) {
      Point p{(a + 0.5) * extent[0] / per_axis, 0.0};
      if (dim == 2) p[1] = (b + 0.5) * extent[1] / per_axis;
      g.points.push_back(p);
    }
  return g;
}

ProbedField probe_field(const Mesh& mesh, const StateField& u, const ProbeGrid& grid) {
  if (grid.dim != mesh.dim) throw DimensionError("probe grid and mesh dimensions differ");
  const int m = u.components();
  const int ne = mesh.num_elements();
  std::vector<std::array<double, 4>> box(ne);  // xmin, xmax, ymin, ymax
  for (int e = 0; e < ne; ++e) {
    box[e] = {1e300, -1e300, 1e300, -1e300};
    for (int a = 0; a <= mesh.dim; ++a) {
      const Point& p = mesh.vertex(e, a);
      box[e][0] = std::min(box[e][0], p[0]);
      box[e][1] = std::max(box[e][1], p[0]);
      box[e][2] = std::min(box[e][2], p[1]);
      box[e][3] = std::max(box[e][3], p[1]);
    }
  }
  ProbedField out;
  out.counts = grid.counts;
  out.cell_volume = grid.cell_volume;
  out.values.reserve(grid.points.size());
  const double tol = 1e-12;
  for (const Point& p0 : grid.points) {
    bool found = false;
    StateVector value(m);
    for (int sx = 0; sx < 3 && !found; ++sx)
      for (int sy = 0; sy < (mesh.dim == 2 ? 3 : 1) && !found; ++sy) {
        const Point p{p0[0] + (sx == 1 ? -1 : sx == 2 ? 1 : 0) * mesh.extent[0],
                      p0[1] + (sy == 1 ? -1 : sy == 2 ? 1 : 0) * mesh.extent[1]};
        for (int e = 0; e < ne && !found; ++e) {
          const double sx_tol = tol * mesh.extent[0];
          if (p[0] < box[e][0] - sx_tol || p[0] > box[e][1] + sx_tol) continue;
          if (mesh.dim == 2 && (p[1] < box[e][2] - tol || p[1] > box[e][3] + tol)) continue;
          const auto lam = barycentric(mesh, e, p);
          bool inside = true;
          for (int a = 0; a <= mesh.dim; ++a) inside = inside && lam[a] >= -tol;
          if (!inside) continue;
          for (int a = 0; a <= mesh.dim; ++a) value += lam[a] * u.values[mesh.elements[e][a]];
          found = true;
        }
      }
    if (!found) throw DimensionError("probe point outside the mesh");
    out.values.push_back(value);
  }
  return out;
}

ProbedField cesaro_average(std::span<const ProbedField> fields) {
  if (fields.empty()) throw ConfigError("Cesaro average of an empty list");
  ProbedField avg = fields.front();
  for (std::size_t n = 1; n < fields.size(); ++n) {
    const auto& f = fields[n];
    if (f.counts != avg.counts || f.values.size() != avg.values.size())
      throw ConfigError("Cesaro average: probe grid mismatch");
    for (std::size_t p = 0; p < f.values.size(); ++p) avg.values[p] += f.values[p];
  }
  const double inv = 1.0 / static_cast<double>(fields.size());
  for (auto& v : avg.values) v *= inv;
  return avg;
}

double l1_distance(const ProbedField& a, const ProbedField& b) {
  if (a.counts != b.counts || a.values.size() != b.values.size())
    throw ConfigError("L1 distance: probe grid mismatch");
  double s = 0.0;
  for (std::size_t p = 0; p < a.values.size(); ++p)
    for (int k = 0; k < a.values[p].size(); ++k) s += std::abs(a.values[p][k] - b.values[p][k]);
  return s * a.cell_volume;
}

std::vector<double> cesaro_differences(std::span<const ProbedField> fields) {
  std::vector<double> out;
  if (fields.empty()) throw ConfigError("Cesaro differences of an empty list");
  ProbedField prev = cesaro_average(fields.first(1));
  for (std::size_t n = 2; n <= fields.size(); ++n) {
    ProbedField cur = cesaro_average(fields.first(n));
    out.push_back(l1_distance(cur, prev));
    prev = std::move(cur);
  }
  return out;
}

bool NondegeneracyReport::satisfied() const {
  for (const auto& s : samples)
    if (!(s.density_ok && s.energy_ok && s.velocity_ok)) return false;
  return true;
}

NondegeneracyReport nondegeneracy_monitor(const ModelSpec& model,
                                          std::span<const StateField> snapshots,
                                          const AdmissibilityParams& params) {
  if (model.kind != ModelKind::euler) throw ConfigError("non-degeneracy monitor needs Euler");
  const int d = model.dim;
  NondegeneracyReport rep;
  rep.velocity_bound_sq = 2.0 * params.energy_cap / params.rho_floor;
  for (const auto& u : snapshots) {
    NondegeneracySample s;
    s.t = u.time;
    s.min_density = s.min_pressure = std::numeric_limits<double>::infinity();
    s.max_energy = -std::numeric_limits<double>::infinity();
    bool velocity_defined = true;
    for (const auto& w : u.values) {
      const double rho = w[0];
      s.min_density = std::min(s.min_density, rho);
      s.max_energy = std::max(s.max_energy, w[d + 1]);
      if (rho > 0.0) {
        double msq = 0.0;
        for (int k = 0; k < d; ++k) msq += w[1 + k] * w[1 + k];
        s.max_velocity_sq = std::max(s.max_velocity_sq, msq / (rho * rho));
        s.min_pressure = std::min(s.min_pressure, (model.gamma - 1.0) * (w[d + 1] - 0.5 * msq / rho));
      } else {
        velocity_defined = false;
        s.min_pressure = -std::numeric_limits<double>::infinity();
      }
    }
    s.density_ok = s.min_density >= params.rho_floor;
    s.energy_ok = s.max_energy <= params.energy_cap;
    s.velocity_ok = velocity_defined && s.max_velocity_sq <= rep.velocity_bound_sq;
    rep.samples.push_back(s);
  }
  return rep;
}

double seminorm_ratio(const Mesh& mesh, const FeOperators& ops, std::span<const double> v,
                      int components) {
  const double h1 = h1_seminorm_sq(mesh, v, components);
  if (!(h1 > 0.0)) throw DimensionError("seminorm ratio undefined for a constant field");
  return d_h_form(ops, v, v, components) / (mesh.h_max * h1);
}

}  // namespace mclfem
