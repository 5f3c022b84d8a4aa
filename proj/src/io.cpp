#include "mclfem/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "format.hpp"
#include "mclfem/errors.hpp"

namespace mclfem {

using detail::fmt17;

void write_field_csv(const Mesh& mesh, const ModelSpec& model, const StateField& u,
                     std::ostream& out) {
  out << "# t=" << fmt17(u.time) << '\n';
  out << "node,x";
  if (mesh.dim == 2) out << ",y";
  for (int k = 0; k < model.components(); ++k) out << ',' << component_name(model, k);
  out << '\n';
  for (int i = 0; i < u.size(); ++i) {
    out << i;
    for (int k = 0; k < mesh.dim; ++k) out << ',' << fmt17(mesh.node_coords[i][k]);
    for (double v : u.values[i]) out << ',' << fmt17(v);
    out << '\n';
  }
}

StateField read_field_csv(std::istream& in) {
  StateField u;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# t=", 0) != 0)
    throw IoError("field CSV: missing '# t=' line");
  try {
    u.time = std::stod(line.substr(4));
  } catch (const std::exception&) {
    throw IoError("field CSV: bad time '" + line.substr(4) + "'");
  }
  if (!std::getline(in, line)) throw IoError("field CSV: missing header");
  int columns = 1;
  for (char c : line) columns += c == ',';
  const int coords = line.rfind("node,x,y", 0) == 0 ? 2 : 1;
  const int m = columns - 1 - coords;
  if (m < 1 || m > kMaxComponents) throw IoError("field CSV: bad header '" + line + "'");
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(ls, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("field CSV: bad number '" + cell + "' in row " + std::to_string(row));
      }
    }
    if (static_cast<int>(values.size()) != columns)
      throw IoError("field CSV: row " + std::to_string(row) + " has wrong column count");
    if (static_cast<int>(values[0]) != row)
      throw IoError("field CSV: rows out of order at " + std::to_string(row));
    StateVector s(m);
    for (int k = 0; k < m; ++k) s[k] = values[1 + coords + k];
    u.values.push_back(s);
    ++row;
  }
  return u;
}

void write_field_vtk(const Mesh& mesh, const ModelSpec& model, const StateField& u,
                     std::ostream& out) {
  const int np = static_cast<int>(mesh.geometric_points.size());
  const int ne = mesh.num_elements();
  const int nv = mesh.vertices_per_element();
  out << "# vtk DataFile Version 3.0\n";
  out << "mclfem field t=" << fmt17(u.time) << '\n';
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << np << " double\n";
  for (const Point& p : mesh.geometric_points)
    out << fmt17(p[0]) << ' ' << fmt17(mesh.dim == 2 ? p[1] : 0.0) << " 0\n";
  out << "CELLS " << ne << ' ' << ne * (nv + 1) << '\n';
  for (const auto& el : mesh.geometric_elements) {
    out << nv;
    for (int a = 0; a < nv; ++a) out << ' ' << el[a];
    out << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (int e = 0; e < ne; ++e) out << (mesh.dim == 1 ? 3 : 5) << '\n';
  out << "POINT_DATA " << np << '\n';
  for (int k = 0; k < model.components(); ++k) {
    out << "SCALARS " << component_name(model, k) << " double 1\nLOOKUP_TABLE default\n";
    for (int g = 0; g < np; ++g) out << fmt17(u.values[mesh.geometric_to_node[g]][k]) << '\n';
  }
}

void write_field_snapshot(const Mesh& mesh, const ModelSpec& model, const StateField& u,
                          const std::string& path, SnapshotFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (format == SnapshotFormat::csv)
    write_field_csv(mesh, model, u, out);
  else
    write_field_vtk(mesh, model, u, out);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_edge_csv(const FeOperators& ops, const ModelSpec& model, const RhsEvaluation& eval,
                    std::ostream& out) {
  const int m = model.components();
  const auto& ed = eval.edges;
  out << "edge,i,j,d,alpha,d_min,entropy_residual";
  for (const char* what : {"bar", "target", "limited"})
    for (int k = 0; k < m; ++k) out << ',' << what << '_' << component_name(model, k);
  out << '\n';
  for (int e = 0; e < ops.num_edges(); ++e) {
    out << e << ',' << ops.edges[e].i << ',' << ops.edges[e].j << ',' << fmt17(ed.d[e]) << ','
        << fmt17(ed.alpha[e]) << ',' << fmt17(ed.d_min[e]) << ','
        << fmt17(ed.entropy_residual[e]);
    for (const auto* field : {&ed.bar, &ed.target, &ed.limited})
      for (int k = 0; k < m; ++k) out << ',' << fmt17((*field)[e][k]);
    out << '\n';
  }
}

void write_step_log_csv(const Trajectory& trajectory, std::ostream& out) {
  out << "step,t,dt,cfl_dt,retries,max_entropy_residual\n";
  for (const auto& s : trajectory.steps)
    out << s.step << ',' << fmt17(s.t) << ',' << fmt17(s.dt) << ',' << fmt17(s.cfl_dt) << ','
        << s.retries << ',' << fmt17(s.max_entropy_residual) << '\n';
}

}  // namespace mclfem
