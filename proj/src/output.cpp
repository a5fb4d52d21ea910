#include "posfem/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace posfem {

namespace {

std::ofstream open_for_writing(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto out = open_for_writing(path);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  if (!out) throw std::runtime_error("error while writing " + path);
}

void write_diagnostics_csv(const std::string& path, const RunDiagnostics& d) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(d.records.size());
  for (const auto& r : d.records) {
    rows.push_back({format_double(r.t), format_double(r.mass), format_double(r.rel_mass_error),
                    format_double(r.energy), format_double(r.u_min), format_double(r.u_max),
                    std::to_string(r.iterations)});
  }
  write_csv(path, {"t", "mass", "rel_mass_err", "energy", "u_min", "u_max", "iters"}, rows);
}

void write_vtk(const std::string& path, const TriMesh& mesh, const FeField& u, const FeField& w) {
  if (u.size() != mesh.num_nodes() || w.size() != mesh.num_nodes()) {
    throw std::invalid_argument("fields do not match the mesh");
  }
  auto out = open_for_writing(path);
  const int n = mesh.num_nodes(), m = mesh.num_triangles();
  out << "# vtk DataFile Version 3.0\nposfem fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (int j = 0; j < n; ++j) {
    out << format_double(mesh.nodes()(j, 0)) << ' ' << format_double(mesh.nodes()(j, 1)) << " 0\n";
  }
  out << "CELLS " << m << ' ' << 4 * m << '\n';
  const auto& tri = mesh.triangles();
  for (int k = 0; k < m; ++k) out << "3 " << tri(k, 0) << ' ' << tri(k, 1) << ' ' << tri(k, 2) << '\n';
  out << "CELL_TYPES " << m << '\n';
  for (int k = 0; k < m; ++k) out << "5\n";
  out << "POINT_DATA " << n << '\n';
  for (const auto& [name, f] : {std::pair<const char*, const FeField*>{"u", &u}, {"w", &w}}) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int j = 0; j < n; ++j) out << format_double((*f)[j]) << '\n';
  }
  if (!out) throw std::runtime_error("error while writing " + path);
}

}  // namespace posfem
