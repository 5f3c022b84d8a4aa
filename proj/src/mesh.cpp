#include "mclfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "mclfem/errors.hpp"

namespace mclfem {

namespace {

double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

double element_diameter(const Mesh& mesh, int e) {
  double diam = 0.0;
  const int nv = mesh.vertices_per_element();
  for (int a = 0; a < nv; ++a)
    for (int b = a + 1; b < nv; ++b)
      diam = std::max(diam, distance(mesh.vertex(e, a), mesh.vertex(e, b), mesh.dim));
  return diam;
}

}  // namespace

double Mesh::domain_volume() const {
  double v = 1.0;
  for (int k = 0; k < dim; ++k) v *= extent[k];
  return v;
}

double element_volume(const Mesh& mesh, int e) {
  const Point& p0 = mesh.vertex(e, 0);
  const Point& p1 = mesh.vertex(e, 1);
  if (mesh.dim == 1) return p1[0] - p0[0];
  const Point& p2 = mesh.vertex(e, 2);
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

double element_shape_ratio(const Mesh& mesh, int e) {
  if (mesh.dim == 1) return 1.0;
  const double a = distance(mesh.vertex(e, 0), mesh.vertex(e, 1), 2);
  const double b = distance(mesh.vertex(e, 1), mesh.vertex(e, 2), 2);
  const double c = distance(mesh.vertex(e, 2), mesh.vertex(e, 0), 2);
  const double area = std::abs(element_volume(mesh, e));
  if (area <= 0.0) return std::numeric_limits<double>::infinity();
  const double circumradius = a * b * c / (4.0 * area);
  const double inradius = area / (0.5 * (a + b + c));
  return circumradius / inradius;
}

void validate_mesh(const Mesh& mesh, double max_shape_ratio) {
  if (mesh.dim != 1 && mesh.dim != 2) throw AssemblyError("mesh dimension must be 1 or 2");
  const int nv = mesh.vertices_per_element();
  double total = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int a = 0; a < nv; ++a) {
      const int n = mesh.elements[e][a];
      if (n < 0 || n >= mesh.num_nodes())
        throw AssemblyError("element " + std::to_string(e) + " references invalid node " +
                            std::to_string(n));
    }
    const double vol = element_volume(mesh, e);
    if (!(std::abs(vol) > 0.0))
      throw AssemblyError("degenerate element " + std::to_string(e) + " (zero volume)");
    total += std::abs(vol);
    const double ratio = element_shape_ratio(mesh, e);
    if (ratio > max_shape_ratio)
      throw AssemblyError("element " + std::to_string(e) + " violates shape regularity (ratio " +
                          std::to_string(ratio) + ")");
  }
  const double expected = mesh.domain_volume();
  if (std::abs(total - expected) > 1e-12 * expected)
    throw AssemblyError("elements do not cover the domain: total volume " +
                        std::to_string(total) + " vs " + std::to_string(expected));
}

Mesh make_periodic_mesh(int dim, const Point& extent, std::vector<Point> geometric_points,
                        std::vector<std::array<int, 3>> geometric_elements,
                        double max_shape_ratio) {
  if (dim != 1 && dim != 2) throw ConfigError("mesh dimension must be 1 or 2");
  for (int k = 0; k < dim; ++k)
    if (!(extent[k] > 0.0)) throw ConfigError("mesh extent components must be positive");

  Mesh mesh;
  mesh.dim = dim;
  mesh.extent = extent;
  mesh.geometric_points = std::move(geometric_points);
  mesh.geometric_elements = std::move(geometric_elements);

  // Identify vertices by their coordinates wrapped into the box, quantized at
  // the identification tolerance.
  std::map<std::array<long long, kMaxDim>, int> owner;
  mesh.geometric_to_node.resize(mesh.geometric_points.size());
  for (std::size_t g = 0; g < mesh.geometric_points.size(); ++g) {
    std::array<long long, kMaxDim> key{};
    Point wrapped{};
    for (int k = 0; k < dim; ++k) {
      const double tol = 1e-9 * extent[k];
      double x = std::fmod(mesh.geometric_points[g][k], extent[k]);
      if (x < 0.0) x += extent[k];
      if (x > extent[k] - tol) x = 0.0;
      wrapped[k] = x;
      key[k] = std::llround(x / tol);
    }
    auto [it, inserted] = owner.emplace(key, mesh.num_nodes());
    if (inserted) mesh.node_coords.push_back(wrapped);
    mesh.geometric_to_node[g] = it->second;
  }

  const int nv = dim + 1;
  mesh.elements.resize(mesh.geometric_elements.size());
  for (std::size_t e = 0; e < mesh.geometric_elements.size(); ++e) {
    for (int a = 0; a < nv; ++a) {
      const int g = mesh.geometric_elements[e][a];
      if (g < 0 || g >= static_cast<int>(mesh.geometric_points.size()))
        throw AssemblyError("element " + std::to_string(e) + " references invalid vertex");
      mesh.elements[e][a] = mesh.geometric_to_node[g];
    }
  }

  mesh.h_max = 0.0;
  mesh.h_min = std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double diam = element_diameter(mesh, e);
    mesh.h_max = std::max(mesh.h_max, diam);
    mesh.h_min = std::min(mesh.h_min, diam);
  }
  validate_mesh(mesh, max_shape_ratio);
  return mesh;
}

Mesh build_uniform_periodic_mesh(int dim, int cells_per_axis, const Point& extent) {
  if (dim != 1 && dim != 2) throw ConfigError("mesh dimension must be 1 or 2");
  if (cells_per_axis < 4)
    throw ConfigError("cells_per_axis must be at least 4 (got " + std::to_string(cells_per_axis) +
                      ")");
  for (int k = 0; k < dim; ++k)
    if (!(extent[k] > 0.0)) throw ConfigError("mesh extent components must be positive");

  const int n = cells_per_axis;
  std::vector<Point> points;
  std::vector<std::array<int, 3>> elements;
  if (dim == 1) {
    const double h = extent[0] / n;
    for (int k = 0; k <= n; ++k) points.push_back({k * h, 0.0});
    for (int k = 0; k < n; ++k) elements.push_back({k, k + 1, -1});
  } else {
    const double hx = extent[0] / n;
    const double hy = extent[1] / n;
    auto id = [n](int i, int j) { return i + (n + 1) * j; };
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) points.push_back({i * hx, j * hy});
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    }
  }
  return make_periodic_mesh(dim, extent, std::move(points), std::move(elements));
}

void write_mesh_csv(const Mesh& mesh, std::ostream& nodes, std::ostream& elements) {
  nodes << (mesh.dim == 1 ? "node,x\n" : "node,x,y\n");
  nodes << std::setprecision(17);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    nodes << i;
    for (int k = 0; k < mesh.dim; ++k) nodes << ',' << mesh.node_coords[i][k];
    nodes << '\n';
  }
  elements << (mesh.dim == 1 ? "element,n0,n1\n" : "element,n0,n1,n2\n");
  for (int e = 0; e < mesh.num_elements(); ++e) {
    elements << e;
    for (int a = 0; a < mesh.vertices_per_element(); ++a) elements << ',' << mesh.elements[e][a];
    elements << '\n';
  }
}

}  // namespace mclfem
