#include "mclfem/fe_operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

#include "mclfem/errors.hpp"

namespace mclfem {

namespace {

struct EdgeAccumulator {
  double mass = 0.0;
  Point grad{};       // int phi_i grad phi_j, i < j
  Point grad_back{};  // int phi_j grad phi_i
};

}  // namespace

std::array<Point, 3> basis_gradients(const Mesh& mesh, int e) {
  std::array<Point, 3> g{};
  const Point& p0 = mesh.vertex(e, 0);
  const Point& p1 = mesh.vertex(e, 1);
  if (mesh.dim == 1) {
    const double h = p1[0] - p0[0];
    g[0] = {-1.0 / h, 0.0};
    g[1] = {1.0 / h, 0.0};
    return g;
  }
  const Point& p2 = mesh.vertex(e, 2);
  const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  g[0] = {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det};
  g[1] = {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det};
  g[2] = {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det};
  return g;
}

FeOperators assemble_fe_operators(const Mesh& mesh) {
  FeOperators ops;
  ops.dim = mesh.dim;
  ops.n_nodes = mesh.num_nodes();
  ops.lumped_mass.assign(ops.n_nodes, 0.0);
  ops.mass_diagonal.assign(ops.n_nodes, 0.0);
  ops.grad_diagonal.assign(ops.n_nodes, Point{});

  const int nv = mesh.vertices_per_element();
  const double d = mesh.dim;
  std::map<std::pair<int, int>, EdgeAccumulator> acc;

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double vol = std::abs(element_volume(mesh, e));
    if (!(vol > 0.0))
      throw AssemblyError("degenerate element " + std::to_string(e) + " (zero volume)");
    const auto grads = basis_gradients(mesh, e);
    // int_K phi_a phi_b = |K| (1 + delta_ab) / ((d + 1)(d + 2)),  int_K phi_a = |K| / (d + 1)
    const double off_diag = vol / ((d + 1.0) * (d + 2.0));
    const double weight = vol / (d + 1.0);
    for (int a = 0; a < nv; ++a) {
      const int na = mesh.elements[e][a];
      ops.lumped_mass[na] += weight;
      ops.mass_diagonal[na] += 2.0 * off_diag;
      for (int k = 0; k < mesh.dim; ++k) ops.grad_diagonal[na][k] += weight * grads[a][k];
      for (int b = 0; b < nv; ++b) {
        if (b == a) continue;
        const int nb = mesh.elements[e][b];
        if (nb == na) throw AssemblyError("element " + std::to_string(e) + " repeats a node");
        if (na > nb) continue;
        auto& entry = acc[{na, nb}];
        entry.mass += off_diag;
        for (int k = 0; k < mesh.dim; ++k) {
          entry.grad[k] += weight * grads[b][k];
          entry.grad_back[k] += weight * grads[a][k];
        }
      }
    }
  }

  ops.edges.reserve(acc.size());
  for (const auto& [key, entry] : acc) {
    ops.edges.push_back({key.first, key.second});
    ops.edge_mass.push_back(entry.mass);
    ops.edge_grad.push_back(entry.grad);
    ops.edge_grad_transpose.push_back(entry.grad_back);
  }

  std::vector<std::vector<std::pair<int, int>>> rows(ops.n_nodes);
  for (int i = 0; i < ops.n_nodes; ++i) rows[i].push_back({i, -1});
  for (int e = 0; e < ops.num_edges(); ++e) {
    rows[ops.edges[e].i].push_back({ops.edges[e].j, e});
    rows[ops.edges[e].j].push_back({ops.edges[e].i, e});
  }
  ops.adjacency_offsets.assign(ops.n_nodes + 1, 0);
  for (int i = 0; i < ops.n_nodes; ++i) {
    std::sort(rows[i].begin(), rows[i].end());
    ops.adjacency_offsets[i + 1] = ops.adjacency_offsets[i] + static_cast<int>(rows[i].size());
    for (const auto& [j, e] : rows[i]) {
      ops.adjacency.push_back(j);
      ops.adjacency_edge.push_back(e);
    }
  }
  return ops;
}

IdentityReport verify_operator_identities(const FeOperators& ops, double tolerance) {
  IdentityReport report;
  report.tolerance = tolerance;
  const int dim = ops.dim;

  double c_scale = 0.0;
  for (const auto& c : ops.edge_grad) c_scale = std::max(c_scale, norm(c, dim));
  if (c_scale == 0.0) c_scale = 1.0;
  double m_scale = 0.0;
  for (double m : ops.lumped_mass) m_scale = std::max(m_scale, std::abs(m));
  if (m_scale == 0.0) m_scale = 1.0;

  std::vector<Point> row_sum = ops.grad_diagonal;
  std::vector<double> mass_sum = ops.mass_diagonal;
  for (int e = 0; e < ops.num_edges(); ++e) {
    const auto [i, j] = ops.edges[e];
    Point anti{};
    for (int k = 0; k < dim; ++k) {
      row_sum[i][k] += ops.edge_grad[e][k];
      row_sum[j][k] += ops.edge_grad_transpose[e][k];
      anti[k] = ops.edge_grad[e][k] + ops.edge_grad_transpose[e][k];
    }
    report.grad_antisymmetry = std::max(report.grad_antisymmetry, norm(anti, dim) / c_scale);
    mass_sum[i] += ops.edge_mass[e];
    mass_sum[j] += ops.edge_mass[e];
  }
  report.min_lumped_mass = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ops.n_nodes; ++i) {
    report.grad_diagonal = std::max(report.grad_diagonal, norm(ops.grad_diagonal[i], dim) / c_scale);
    report.grad_row_sum = std::max(report.grad_row_sum, norm(row_sum[i], dim) / c_scale);
    report.mass_row_sum =
        std::max(report.mass_row_sum, std::abs(ops.lumped_mass[i] - mass_sum[i]) / m_scale);
    report.min_lumped_mass = std::min(report.min_lumped_mass, ops.lumped_mass[i]);
  }
  if (ops.n_nodes == 0) report.min_lumped_mass = 0.0;
  return report;
}

double h1_seminorm_sq(const Mesh& mesh, std::span<const double> field, int components) {
  if (components <= 0 ||
      field.size() != static_cast<std::size_t>(mesh.num_nodes()) * components)
    throw DimensionError("field length " + std::to_string(field.size()) + " does not match " +
                         std::to_string(mesh.num_nodes()) + " nodes x " +
                         std::to_string(components) + " components");
  const int nv = mesh.vertices_per_element();
  double total = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto grads = basis_gradients(mesh, e);
    const double vol = std::abs(element_volume(mesh, e));
    for (int c = 0; c < components; ++c) {
      Point g{};
      for (int a = 0; a < nv; ++a) {
        const double value = field[static_cast<std::size_t>(mesh.elements[e][a]) * components + c];
        for (int k = 0; k < mesh.dim; ++k) g[k] += value * grads[a][k];
      }
      total += vol * dot(g, g, mesh.dim);
    }
  }
  return total;
}

double d_h_form(const FeOperators& ops, std::span<const double> v, std::span<const double> w,
                int components) {
  const std::size_t expected = static_cast<std::size_t>(ops.n_nodes) * components;
  if (components <= 0 || v.size() != expected || w.size() != expected)
    throw DimensionError("d_h_form: field lengths do not match node count x components");
  double total = 0.0;
  for (int e = 0; e < ops.num_edges(); ++e) {
    const auto [i, j] = ops.edges[e];
    double s = 0.0;
    for (int c = 0; c < components; ++c) {
      const std::size_t ii = static_cast<std::size_t>(i) * components + c;
      const std::size_t jj = static_cast<std::size_t>(j) * components + c;
      s += (v[jj] - v[ii]) * (w[jj] - w[ii]);
    }
    // (i, j) and (j, i) both appear in the double sum with |c_ji| = |c_ij|.
    total += 2.0 * ops.grad_norm(e) * s;
  }
  return total;
}

}  // namespace mclfem
