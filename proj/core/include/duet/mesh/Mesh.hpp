#pragma once

#include <Eigen/Core>
#include <array>
#include <span>
#include <string>
#include <vector>

namespace duet::mesh {

using VertexID = int;
using Vector3  = Eigen::Vector3d;

struct Edge {
  std::array<VertexID, 2> vertices;
  friend bool operator==(const Edge &, const Edge &) = default;
};

struct Triangle {
  std::array<VertexID, 3> vertices;
  friend bool operator==(const Triangle &, const Triangle &) = default;
};

/// Unstructured coupling mesh: a vertex cloud with optional edges and triangles.
///
/// Vertices are stored padded to three components; for 2D meshes the third
/// coordinate is always zero, so geometric kernels can work in 3D uniformly.
class Mesh {
public:
  Mesh(std::string name, int dimensions);

  const std::string &name() const { return _name; }
  int                dimensions() const { return _dimensions; }

  /// Appends a vertex; coords must hold exactly dimensions() finite values.
  VertexID addVertex(std::span<const double> coords);
  VertexID addVertex(const Vector3 &position);

  void addEdge(VertexID a, VertexID b);
  void addTriangle(VertexID a, VertexID b, VertexID c);

  std::size_t vertexCount() const { return _vertices.size(); }
  bool        empty() const { return _vertices.empty(); }

  const Vector3 &vertex(VertexID id) const { return _vertices[static_cast<std::size_t>(id)]; }
  const std::vector<Vector3> &vertices() const { return _vertices; }
  const std::vector<Edge> &    edges() const { return _edges; }
  const std::vector<Triangle> &triangles() const { return _triangles; }

  bool hasConnectivity() const { return !_edges.empty() || !_triangles.empty(); }

  /// Vertex coordinates flattened vertex-major with dimensions() entries per vertex.
  std::vector<double> coordinates() const;

  friend bool operator==(const Mesh &, const Mesh &) = default;

private:
  void checkIndex(VertexID id, const char *entity) const;

  std::string           _name;
  int                   _dimensions;
  std::vector<Vector3>  _vertices;
  std::vector<Edge>     _edges;
  std::vector<Triangle> _triangles;
};

/// Per-vertex values bound to a mesh, vertex-major with `components` values per vertex.
struct DataField {
  std::string     name;
  std::string     mesh;
  int             components = 1;
  Eigen::VectorXd values;

  DataField() = default;
  DataField(std::string name, std::string mesh, int components, std::size_t vertexCount);

  std::size_t vertexCount() const;
  bool        allFinite() const { return values.allFinite(); }
};

/// Throws if the field does not fit the mesh (name, component count, or size).
void checkFieldOnMesh(const DataField &field, const Mesh &mesh);

} // namespace duet::mesh
