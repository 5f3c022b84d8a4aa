#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "mclfem/errors.hpp"
#include "mclfem/fe_operators.hpp"
#include "mclfem/mesh.hpp"

using namespace mclfem;

namespace {

// Locate the edge (a, b) regardless of orientation; returns -1 when absent.
int find_edge(const FeOperators& ops, int a, int b) {
  for (int e = 0; e < ops.num_edges(); ++e)
    if ((ops.edges[e].i == a && ops.edges[e].j == b) || (ops.edges[e].i == b && ops.edges[e].j == a))
      return e;
  return -1;
}

}  // namespace

TEST_CASE("uniform 1D mesh: counts and spacing") {
  const Mesh m = build_uniform_periodic_mesh(1, 4, {1.0, 0.0});
  CHECK(m.num_nodes() == 4);
  CHECK(m.num_elements() == 4);
  CHECK(m.h_max == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.h_min == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.domain_volume() == doctest::Approx(1.0));
}

TEST_CASE("uniform 2D mesh: periodic node count cells^2 and two triangles per cell") {
  const Mesh m = build_uniform_periodic_mesh(2, 4, {1.0, 1.0});
  CHECK(m.num_nodes() == 16);
  CHECK(m.num_elements() == 32);
  double vol = 0.0;
  for (int e = 0; e < m.num_elements(); ++e) vol += element_volume(m, e);
  CHECK(vol == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_NOTHROW(validate_mesh(m));
}

TEST_CASE("too few cells is a configuration error") {
  CHECK_THROWS_AS(build_uniform_periodic_mesh(1, 2, {1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(build_uniform_periodic_mesh(2, 3, {1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(build_uniform_periodic_mesh(1, 8, {-1.0, 0.0}), ConfigError);
}

TEST_CASE("periodic identification: every geometric vertex maps to exactly one node") {
  const Mesh m = build_uniform_periodic_mesh(2, 5, {2.0, 1.0});
  std::vector<int> hits(m.num_nodes(), 0);
  for (int g = 0; g < static_cast<int>(m.geometric_points.size()); ++g) {
    const int n = m.geometric_to_node[g];
    REQUIRE(n >= 0);
    REQUIRE(n < m.num_nodes());
    ++hits[n];
    const Point& p = m.geometric_points[g];
    const Point& q = m.node_coords[n];
    for (int k = 0; k < 2; ++k) {
      const double L = m.extent[k];
      const double diff = std::fmod(std::abs(p[k] - q[k]) + 1e-12, L);
      CHECK(diff < 1e-9);
    }
  }
  for (int h : hits) CHECK(h >= 1);
}

TEST_CASE("1D coefficients match hand integration of hat functions") {
  const double h = 0.25;
  const Mesh m = build_uniform_periodic_mesh(1, 4, {1.0, 0.0});
  const FeOperators ops = assemble_fe_operators(m);
  for (int i = 0; i < 4; ++i) {
    CHECK(ops.lumped_mass[i] == doctest::Approx(h).epsilon(1e-15));
    CHECK(ops.mass_diagonal[i] == doctest::Approx(2.0 * h / 3.0).epsilon(1e-15));
    CHECK(std::abs(ops.grad_diagonal[i][0]) < 1e-15);
  }
  CHECK(ops.num_edges() == 4);
  for (int i = 0; i < 4; ++i) {
    // Node coordinates are sorted along x, so i + 1 (mod 4) is the right neighbour.
    const int right = (i + 1) % 4;
    const int e = find_edge(ops, i, right);
    REQUIRE(e >= 0);
    CHECK(ops.edge_mass[e] == doctest::Approx(h / 6.0).epsilon(1e-15));
    CHECK(ops.grad(e, i)[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ops.grad(e, right)[0] == doctest::Approx(-0.5).epsilon(1e-15));
  }
}

TEST_CASE("identities hold on 1D and 2D refinement sequences") {
  for (int n : {16, 64, 256, 1024}) {
    const FeOperators ops = assemble_fe_operators(build_uniform_periodic_mesh(1, n, {1.0, 0.0}));
    const IdentityReport r = verify_operator_identities(ops);
    CHECK(r.all_pass());
  }
  for (int n : {8, 16, 32}) {
    const FeOperators ops = assemble_fe_operators(build_uniform_periodic_mesh(2, n, {1.0, 1.0}));
    const IdentityReport r = verify_operator_identities(ops);
    CHECK(r.all_pass());
    double total = 0.0;
    for (double mi : ops.lumped_mass) total += mi;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("2D gradient operator approximates m_i d/dx to second order") {
  // Independent oracle: sum_j c_ij u_j = int phi_i grad u_h, which for smooth u
  // on a translation-invariant mesh equals m_i grad u(x_i) + O(h^3) per node.
  const double pi = std::numbers::pi;
  std::vector<double> err;
  for (int n : {8, 16, 32}) {
    const Mesh m = build_uniform_periodic_mesh(2, n, {1.0, 1.0});
    const FeOperators ops = assemble_fe_operators(m);
    std::vector<double> u(ops.n_nodes);
    for (int i = 0; i < ops.n_nodes; ++i)
      u[i] = std::sin(2 * pi * m.node_coords[i][0]) * std::cos(2 * pi * m.node_coords[i][1]);
    double worst = 0.0;
    for (int i = 0; i < ops.n_nodes; ++i) {
      Point s{};
      for (int k = ops.adjacency_offsets[i]; k < ops.adjacency_offsets[i + 1]; ++k) {
        const int e = ops.adjacency_edge[k];
        const int j = ops.adjacency[k];
        const Point c = e < 0 ? ops.grad_diagonal[i] : ops.grad(e, i);
        s[0] += c[0] * u[j];
        s[1] += c[1] * u[j];
      }
      const Point& x = m.node_coords[i];
      const double ux = 2 * pi * std::cos(2 * pi * x[0]) * std::cos(2 * pi * x[1]);
      const double uy = -2 * pi * std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1]);
      worst = std::max({worst, std::abs(s[0] / ops.lumped_mass[i] - ux),
                        std::abs(s[1] / ops.lumped_mass[i] - uy)});
    }
    err.push_back(worst);
  }
  CHECK(std::log2(err[0] / err[1]) > 1.8);
  CHECK(std::log2(err[1] / err[2]) > 1.9);
}

TEST_CASE("|c_ij| scales like h^(d-1)") {
  double prev = 0.0;
  for (int n : {8, 16, 32, 64}) {
    const Mesh m = build_uniform_periodic_mesh(2, n, {1.0, 1.0});
    const FeOperators ops = assemble_fe_operators(m);
    double cmax = 0.0;
    for (int e = 0; e < ops.num_edges(); ++e) cmax = std::max(cmax, ops.grad_norm(e));
    const double ratio = cmax / m.h_max;
    if (prev > 0.0) CHECK(ratio == doctest::Approx(prev).epsilon(1e-12));
    prev = ratio;
  }
}

TEST_CASE("degenerate element is reported by index") {
  // Square split into two triangles; the third element is collinear.
  std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  std::vector<std::array<int, 3>> els{{0, 1, 2}, {0, 2, 3}, {0, 4, 2}};
  try {
    make_periodic_mesh(2, {1.0, 1.0}, pts, els);
    FAIL("expected an assembly error");
  } catch (const AssemblyError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("shape ratio of the structured right triangles") {
  const Mesh m = build_uniform_periodic_mesh(2, 4, {1.0, 1.0});
  // Right isosceles triangle: R / r = 1 + sqrt(2).
  CHECK(element_shape_ratio(m, 0) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("seminorm equivalence is exactly 1 in 1D") {
  // 1D: d_h(v,v) = sum (dv)^2 and h |v|^2_H1 = sum (dv)^2.
  const Mesh m = build_uniform_periodic_mesh(1, 32, {1.0, 0.0});
  const FeOperators ops = assemble_fe_operators(m);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> v(ops.n_nodes);
  for (double& x : v) x = U(rng);
  const double ratio = d_h_form(ops, v, v, 1) / (m.h_max * h1_seminorm_sq(m, v, 1));
  CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(h1_seminorm_sq(m, std::vector<double>(3), 1), DimensionError);
}

TEST_CASE("mesh CSV export") {
  const Mesh m = build_uniform_periodic_mesh(2, 4, {1.0, 1.0});
  std::ostringstream nodes, elements;
  write_mesh_csv(m, nodes, elements);
  CHECK(nodes.str().rfind("node,x,y\n", 0) == 0);
  CHECK(elements.str().rfind("element,n0,n1,n2\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : nodes.str()) lines += c == '\n';
  CHECK(lines == 17);
}
