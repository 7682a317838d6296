#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "duet/mesh/Mesh.hpp"

namespace duet::mesh {

/// Writes a legacy ASCII VTK POLYDATA file ("# vtk DataFile Version 3.0").
///
/// Edges become LINES, triangles POLYGONS; every field becomes a SCALARS or
/// VECTORS entry under POINT_DATA (2D vectors are padded with a zero z).
/// Floats are printed with 17 significant digits so output is reproducible.
void writeVtk(std::ostream &out, const Mesh &mesh, const std::vector<DataField> &fields = {});
void exportVtk(const std::filesystem::path &path, const Mesh &mesh, const std::vector<DataField> &fields = {});

} // namespace duet::mesh
