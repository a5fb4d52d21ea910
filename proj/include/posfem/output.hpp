#pragma once

#include <string>
#include <vector>

#include "posfem/diagnostics.hpp"
#include "posfem/mesh.hpp"

namespace posfem {

/// Shortest text of a double with 17 significant digits ("%.17g").
std::string format_double(double v);

/// diagnostics.csv: header t,mass,rel_mass_err,energy,u_min,u_max,iters.
void write_diagnostics_csv(const std::string& path, const RunDiagnostics& diagnostics);

/// Generic CSV table. Throws std::runtime_error when the file cannot be written.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Legacy ASCII VTK unstructured grid with point scalars u and w.
void write_vtk(const std::string& path, const TriMesh& mesh, const FeField& u, const FeField& w);

}  // namespace posfem
