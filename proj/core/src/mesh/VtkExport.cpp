#include "duet/mesh/VtkExport.hpp"

#include <fmt/format.h>
#include <fstream>
#include <ostream>

#include "duet/Error.hpp"

namespace duet::mesh {

void writeVtk(std::ostream &out, const Mesh &mesh, const std::vector<DataField> &fields)
{
  for (const auto &field : fields) {
    checkFieldOnMesh(field, mesh);
  }

  out << "# vtk DataFile Version 3.0\n";
  out << mesh.name() << '\n';
  out << "ASCII\n";
  out << "DATASET POLYDATA\n";

  out << "POINTS " << mesh.vertexCount() << " double\n";
  for (const auto &v : mesh.vertices()) {
    out << fmt::format("{:.17g} {:.17g} {:.17g}\n", v.x(), v.y(), v.z());
  }

  if (!mesh.edges().empty()) {
    out << fmt::format("LINES {} {}\n", mesh.edges().size(), 3 * mesh.edges().size());
    for (const auto &e : mesh.edges()) {
      out << fmt::format("2 {} {}\n", e.vertices[0], e.vertices[1]);
    }
  }
  if (!mesh.triangles().empty()) {
    out << fmt::format("POLYGONS {} {}\n", mesh.triangles().size(), 4 * mesh.triangles().size());
    for (const auto &t : mesh.triangles()) {
      out << fmt::format("3 {} {} {}\n", t.vertices[0], t.vertices[1], t.vertices[2]);
    }
  }

  if (fields.empty()) {
    return;
  }
  out << "POINT_DATA " << mesh.vertexCount() << '\n';
  for (const auto &field : fields) {
    const auto n = static_cast<Eigen::Index>(mesh.vertexCount());
    if (field.components == 1) {
      out << "SCALARS " << field.name << " double 1\n";
      out << "LOOKUP_TABLE default\n";
      for (Eigen::Index i = 0; i < n; ++i) {
        out << fmt::format("{:.17g}\n", field.values[i]);
      }
    } else {
      out << "VECTORS " << field.name << " double\n";
      const int c = field.components;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double z = c == 3 ? field.values[i * c + 2] : 0.0;
        out << fmt::format("{:.17g} {:.17g} {:.17g}\n", field.values[i * c], field.values[i * c + 1], z);
      }
    }
  }
}

void exportVtk(const std::filesystem::path &path, const Mesh &mesh, const std::vector<DataField> &fields)
{
  std::ofstream out(path);
  if (!out) {
    throw Error(fmt::format("cannot open {} for writing", path.string()));
  }
  writeVtk(out, mesh, fields);
  out.flush();
  if (!out) {
    throw Error(fmt::format("failed writing {}", path.string()));
  }
}

} // namespace duet::mesh
