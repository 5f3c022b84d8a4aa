#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "mclfem/state.hpp"

namespace mclfem {

/// Periodic simplicial mesh of a box [0, L_1) x ... x [0, L_d).
///
/// Two numberings coexist. The geometric grid holds every vertex of the
/// triangulation before periodic identification; elements are defined on it
/// so that element geometry never straddles the periodic seam. The node
/// numbering (the degrees of freedom) is obtained by identifying geometric
/// vertices that coincide modulo the box extent.
struct Mesh {
  int dim = 1;
  Point extent{};
  std::vector<Point> node_coords;                 // one per degree of freedom
  std::vector<std::array<int, 3>> elements;       // node indices, dim + 1 used
  std::vector<Point> geometric_points;            // unwrapped vertex coordinates
  std::vector<std::array<int, 3>> geometric_elements;
  std::vector<int> geometric_to_node;
  double h_max = 0.0;
  double h_min = 0.0;

  int num_nodes() const { return static_cast<int>(node_coords.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int vertices_per_element() const { return dim + 1; }

  /// Unwrapped coordinate of local vertex `a` of element `e`.
  const Point& vertex(int e, int a) const { return geometric_points[geometric_elements[e][a]]; }

  double domain_volume() const;
};

/// Upper bound on circumradius / inradius accepted by validate_mesh.
inline constexpr double kDefaultMaxShapeRatio = 10.0;

/// Uniform periodic mesh: segments in 1D, squares split along one diagonal in 2D.
/// Throws ConfigError when cells_per_axis < 4 or an extent component is not positive.
Mesh build_uniform_periodic_mesh(int dim, int cells_per_axis, const Point& extent);

/// Builds a periodic mesh from an unwrapped vertex set. Vertices that agree
/// modulo `extent` (tolerance 1e-9 * extent) become one node.
Mesh make_periodic_mesh(int dim, const Point& extent, std::vector<Point> geometric_points,
                        std::vector<std::array<int, 3>> geometric_elements,
                        double max_shape_ratio = kDefaultMaxShapeRatio);

/// Signed element volume computed from unwrapped vertex coordinates.
double element_volume(const Mesh& mesh, int e);

/// Circumradius / inradius (1 for segments).
double element_shape_ratio(const Mesh& mesh, int e);

/// Checks index validity, positive volumes, exact cover of the box and shape
/// regularity. Throws AssemblyError on the first violation.
void validate_mesh(const Mesh& mesh, double max_shape_ratio = kDefaultMaxShapeRatio);

/// CSV export: `node,x[,y]` and `element,n0,n1[,n2]`.
void write_mesh_csv(const Mesh& mesh, std::ostream& nodes, std::ostream& elements);

}  // namespace mclfem
