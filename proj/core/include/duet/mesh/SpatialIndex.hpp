#pragma once

#include <array>
#include <vector>

#include "duet/mesh/Mesh.hpp"

namespace duet::mesh {

enum class EntityKind { Triangle, Edge, Vertex };

/// Result of projecting a point onto the closest entity of a mesh.
///
/// The first `count` entries of `vertices`/`weights` are used: three for a
/// triangle (barycentric), two for an edge (linear), one for a vertex.
struct Projection {
  EntityKind              kind = EntityKind::Vertex;
  int                     entity = -1;
  int                     count = 0;
  std::array<VertexID, 3> vertices{};
  std::array<double, 3>   weights{};
  double                  distance = 0.0;
};

/// Closest point on segment [a,b] to p; returns the linear weights (wa, wb).
std::array<double, 2> closestPointOnSegment(const Vector3 &p, const Vector3 &a, const Vector3 &b);

/// Closest point on triangle (a,b,c) to p by region classification; returns
/// barycentric weights, each in [0,1] and summing to 1.
std::array<double, 3> closestPointOnTriangle(const Vector3 &p, const Vector3 &a, const Vector3 &b, const Vector3 &c);

/// Bounding-volume hierarchy over one mesh's vertices, edges, and triangles.
///
/// Answers nearest-vertex and closest-entity queries with the same results as
/// a linear scan. Ties in nearestVertex go to the lowest vertex id; in project
/// distances within 1e-12 (relative) prefer triangle, then edge, then vertex,
/// then the lowest entity id. Immutable after construction.
class SpatialIndex {
public:
  explicit SpatialIndex(const Mesh &mesh);

  VertexID   nearestVertex(const Vector3 &point) const;
  Projection project(const Vector3 &point) const;

  std::size_t vertexCount() const { return _vertices.size(); }

private:
  struct Box {
    Vector3 lower;
    Vector3 upper;
    double  squaredDistance(const Vector3 &p) const;
  };

  struct Node {
    Box box;
    int first = 0; // leaf: first primitive slot; inner: left child
    int count = 0; // leaf: number of primitives; inner: 0
    int right = -1;
  };

  /// One tree per entity kind; `order` maps primitive slots to entity ids.
  struct Tree {
    std::vector<Node> nodes;
    std::vector<int>  order;
    bool              empty() const { return nodes.empty(); }
  };

  static Tree buildTree(const std::vector<Box> &boxes);
  static int  buildNode(Tree &tree, const std::vector<Box> &boxes, const std::vector<Vector3> &centers,
                        int begin, int end);

  template <typename Candidate, typename Better>
  void search(const Tree &tree, const Vector3 &point, Candidate &&candidate, Better &&better,
              double &bestSquared, double slack) const;

  Projection bestOnTriangles(const Vector3 &p) const;
  Projection bestOnEdges(const Vector3 &p) const;
  Projection bestOnVertices(const Vector3 &p) const;

  std::vector<Vector3>  _vertices;
  std::vector<Edge>     _edges;
  std::vector<Triangle> _triangles;
  Tree                  _vertexTree;
  Tree                  _edgeTree;
  Tree                  _triangleTree;
};

/// Strict ordering used by every closest-entity query (see SpatialIndex).
bool isBetterProjection(const Projection &candidate, const Projection &incumbent);

} // namespace duet::mesh
