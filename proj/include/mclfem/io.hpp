#pragma once

#include <iosfwd>
#include <string>

#include "mclfem/fe_operators.hpp"
#include "mclfem/mesh.hpp"
#include "mclfem/model.hpp"
#include "mclfem/scheme.hpp"
#include "mclfem/trajectory.hpp"

namespace mclfem {

enum class SnapshotFormat { csv, vtk_legacy_ascii };

/// CSV: `# t=<time>` line, header `node,x[,y],<components>`, one row per node.
void write_field_csv(const Mesh& mesh, const ModelSpec& model, const StateField& u,
                     std::ostream& out);

/// Inverse of write_field_csv. Throws IoError on malformed input.
StateField read_field_csv(std::istream& in);

/// Legacy VTK unstructured grid on the unwrapped geometric vertices (cell
/// types 3 and 5) with one scalar point-data array per component.
void write_field_vtk(const Mesh& mesh, const ModelSpec& model, const StateField& u,
                     std::ostream& out);

/// Writes to `path`, throwing IoError when the file cannot be written.
void write_field_snapshot(const Mesh& mesh, const ModelSpec& model, const StateField& u,
                          const std::string& path, SnapshotFormat format);

/// Per-edge dump: e,i,j,d,alpha,d_min,entropy_residual and bar/target/limited per component.
void write_edge_csv(const FeOperators& ops, const ModelSpec& model, const RhsEvaluation& eval,
                    std::ostream& out);

/// step,t,dt,cfl_dt,retries,max_entropy_residual
void write_step_log_csv(const Trajectory& trajectory, std::ostream& out);

}  // namespace mclfem
