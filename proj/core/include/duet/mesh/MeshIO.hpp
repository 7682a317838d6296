#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "duet/mesh/Mesh.hpp"

namespace duet::mesh {

/// Reads the plain-text mesh format:
///
///     # comment
///     v x y [z]
///     e i j
///     t i j k
///
/// The dimension is taken from the first vertex line; all vertex lines must agree.
/// Indices are zero-based and refer to vertices in file order.
Mesh readMesh(std::istream &in, const std::string &name);
Mesh readMeshFile(const std::filesystem::path &path, const std::string &name = {});

void writeMesh(std::ostream &out, const Mesh &mesh);
void writeMeshFile(const std::filesystem::path &path, const Mesh &mesh);

} // namespace duet::mesh
