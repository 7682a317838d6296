#include "duet/mesh/Mesh.hpp"

#include <cmath>
#include <fmt/format.h>

#include "duet/Error.hpp"

namespace duet::mesh {

Mesh::Mesh(std::string name, int dimensions)
    : _name(std::move(name)), _dimensions(dimensions)
{
  if (dimensions != 2 && dimensions != 3) {
    throw Error(fmt::format("Mesh \"{}\": dimensions must be 2 or 3, got {}", _name, dimensions));
  }
}

VertexID Mesh::addVertex(std::span<const double> coords)
{
  if (static_cast<int>(coords.size()) != _dimensions) {
    throw Error(fmt::format("Mesh \"{}\": vertex has {} coordinates but the mesh is {}D",
                            _name, coords.size(), _dimensions));
  }
  Vector3 position = Vector3::Zero();
  for (int d = 0; d < _dimensions; ++d) {
    position[d] = coords[static_cast<std::size_t>(d)];
  }
  return addVertex(position);
}

VertexID Mesh::addVertex(const Vector3 &position)
{
  if (!position.allFinite()) {
    throw Error(fmt::format("Mesh \"{}\": vertex coordinates must be finite", _name));
  }
  if (_dimensions == 2 && position.z() != 0.0) {
    throw Error(fmt::format("Mesh \"{}\": 2D vertex with non-zero z coordinate", _name));
  }
  _vertices.push_back(position);
  return static_cast<VertexID>(_vertices.size() - 1);
}

void Mesh::checkIndex(VertexID id, const char *entity) const
{
  if (id < 0 || static_cast<std::size_t>(id) >= _vertices.size()) {
    throw Error(fmt::format("Mesh \"{}\": {} references vertex {} but the mesh has {} vertices",
                            _name, entity, id, _vertices.size()));
  }
}

void Mesh::addEdge(VertexID a, VertexID b)
{
  checkIndex(a, "edge");
  checkIndex(b, "edge");
  if (a == b) {
    throw Error(fmt::format("Mesh \"{}\": edge endpoints must be distinct ({} {})", _name, a, b));
  }
  _edges.push_back(Edge{{a, b}});
}

void Mesh::addTriangle(VertexID a, VertexID b, VertexID c)
{
  checkIndex(a, "triangle");
  checkIndex(b, "triangle");
  checkIndex(c, "triangle");
  if (a == b || b == c || a == c) {
    throw Error(fmt::format("Mesh \"{}\": triangle vertices must be distinct ({} {} {})", _name, a, b, c));
  }
  _triangles.push_back(Triangle{{a, b, c}});
}

std::vector<double> Mesh::coordinates() const
{
  std::vector<double> flat;
  flat.reserve(_vertices.size() * static_cast<std::size_t>(_dimensions));
  for (const auto &v : _vertices) {
    for (int d = 0; d < _dimensions; ++d) {
      flat.push_back(v[d]);
    }
  }
  return flat;
}

DataField::DataField(std::string name_, std::string mesh_, int components_, std::size_t vertexCount)
    : name(std::move(name_)), mesh(std::move(mesh_)), components(components_),
      values(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vertexCount) * components_))
{
}

std::size_t DataField::vertexCount() const
{
  return components > 0 ? static_cast<std::size_t>(values.size() / components) : 0;
}

void checkFieldOnMesh(const DataField &field, const Mesh &mesh)
{
  if (field.mesh != mesh.name()) {
    throw Error(fmt::format("Data \"{}\" lives on mesh \"{}\", not on \"{}\"", field.name, field.mesh, mesh.name()));
  }
  if (field.components != 1 && field.components != mesh.dimensions()) {
    throw Error(fmt::format("Data \"{}\" has {} components; expected 1 or {}", field.name,
                            field.components, mesh.dimensions()));
  }
  if (static_cast<std::size_t>(field.values.size()) != mesh.vertexCount() * static_cast<std::size_t>(field.components)) {
    throw Error(fmt::format("Data \"{}\" holds {} values but mesh \"{}\" needs {}", field.name,
                            field.values.size(), mesh.name(), mesh.vertexCount() * static_cast<std::size_t>(field.components)));
  }
}

} // namespace duet::mesh
