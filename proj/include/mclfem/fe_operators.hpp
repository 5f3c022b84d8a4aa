#pragma once

#include <array>
#include <span>
#include <vector>

#include "mclfem/mesh.hpp"
#include "mclfem/state.hpp"

namespace mclfem {

/// Undirected edge of the sparsity graph, owner i < j.
struct Edge {
  int i = 0;
  int j = 0;
};

/// P1 finite element coefficients
///   m_i = int phi_i,  m_ij = int phi_i phi_j,  c_ij = int phi_i grad phi_j.
///
/// c_ij is stored once per undirected edge in owner orientation (i < j);
/// consumers obtain c_ji = -c_ij through `grad(e, i, j)`. The separately
/// assembled reverse orientation and the diagonal c_ii are kept only so the
/// algebraic identities can be checked against independent data.
struct FeOperators {
  int dim = 1;
  int n_nodes = 0;
  std::vector<double> lumped_mass;
  std::vector<double> mass_diagonal;
  std::vector<Edge> edges;
  std::vector<double> edge_mass;
  std::vector<Point> edge_grad;
  std::vector<Point> edge_grad_transpose;
  std::vector<Point> grad_diagonal;

  // Node adjacency N_i in CSR form, sorted, including i itself. For the self
  // entry adjacency_edge is -1.
  std::vector<int> adjacency_offsets;
  std::vector<int> adjacency;
  std::vector<int> adjacency_edge;

  int num_edges() const { return static_cast<int>(edges.size()); }

  /// c_ij for edge e seen from node `from` (either endpoint).
  Point grad(int e, int from) const {
    const Point& c = edge_grad[e];
    if (from == edges[e].i) return c;
    return {-c[0], -c[1]};
  }

  double grad_norm(int e) const { return norm(edge_grad[e], dim); }
};

/// Gradients of the barycentric coordinates of element e (dim + 1 used).
std::array<Point, 3> basis_gradients(const Mesh& mesh, int e);

/// Exact elementwise integration of affine basis products.
/// Throws AssemblyError naming the element when an element has zero volume.
FeOperators assemble_fe_operators(const Mesh& mesh);

struct IdentityReport {
  double tolerance = 1e-13;
  double grad_diagonal = 0.0;     // max |c_ii| / max |c_ij|
  double grad_antisymmetry = 0.0; // max |c_ij + c_ji| / max |c_ij|
  double grad_row_sum = 0.0;      // max |sum_j c_ij| / max |c_ij|
  double mass_row_sum = 0.0;      // max |m_i - sum_j m_ij| / max m_i
  double min_lumped_mass = 0.0;

  bool grad_diagonal_ok() const { return grad_diagonal <= tolerance; }
  bool grad_antisymmetry_ok() const { return grad_antisymmetry <= tolerance; }
  bool grad_row_sum_ok() const { return grad_row_sum <= tolerance; }
  bool mass_row_sum_ok() const { return mass_row_sum <= tolerance; }
  bool positivity_ok() const { return min_lumped_mass > 0.0; }
  bool all_pass() const {
    return grad_diagonal_ok() && grad_antisymmetry_ok() && grad_row_sum_ok() &&
           mass_row_sum_ok() && positivity_ok();
  }
};

IdentityReport verify_operator_identities(const FeOperators& ops, double tolerance = 1e-13);

/// |v_h|^2_{H^1} summed over `components`, node-major layout.
double h1_seminorm_sq(const Mesh& mesh, std::span<const double> field, int components);

/// d_h(v, w) = sum_i sum_{j != i} |c_ij| (v_j - v_i)^T (w_j - w_i).
double d_h_form(const FeOperators& ops, std::span<const double> v, std::span<const double> w,
                int components);

}  // namespace mclfem
