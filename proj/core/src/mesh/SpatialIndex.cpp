#include "duet/mesh/SpatialIndex.hpp"

#include <algorithm>
#include <Eigen/Geometry>
#include <cmath>
#include <limits>
#include <numeric>

#include "duet/Error.hpp"

namespace duet::mesh {

namespace {

constexpr int    leafSize          = 4;
constexpr double tieTolerance      = 1e-12;
// Squared-distance slack wide enough that no candidate within the tie
// tolerance of the incumbent can be pruned.
constexpr double projectionSlack   = 4.0 * tieTolerance;
constexpr double degenerateTriangle = 1e-24;

int kindRank(EntityKind kind)
{
  switch (kind) {
  case EntityKind::Triangle:
    return 0;
  case EntityKind::Edge:
    return 1;
  case EntityKind::Vertex:
    return 2;
  }
  return 3;
}

} // namespace

bool isBetterProjection(const Projection &candidate, const Projection &incumbent)
{
  if (incumbent.entity < 0) {
    return true;
  }
  const double scale = std::max(candidate.distance, incumbent.distance);
  if (std::abs(candidate.distance - incumbent.distance) > tieTolerance * scale) {
    return candidate.distance < incumbent.distance;
  }
  if (kindRank(candidate.kind) != kindRank(incumbent.kind)) {
    return kindRank(candidate.kind) < kindRank(incumbent.kind);
  }
  return candidate.entity < incumbent.entity;
}

std::array<double, 2> closestPointOnSegment(const Vector3 &p, const Vector3 &a, const Vector3 &b)
{
  const Vector3 ab     = b - a;
  const double  length = ab.squaredNorm();
  if (length == 0.0) {
    return {1.0, 0.0};
  }
  const double t = std::clamp((p - a).dot(ab) / length, 0.0, 1.0);
  return {1.0 - t, t};
}

std::array<double, 3> closestPointOnTriangle(const Vector3 &p, const Vector3 &a, const Vector3 &b, const Vector3 &c)
{
  const Vector3 ab = b - a;
  const Vector3 ac = c - a;
  const Vector3 ap = p - a;
  const double  d1 = ab.dot(ap);
  const double  d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) {
    return {1.0, 0.0, 0.0};
  }

  const Vector3 bp = p - b;
  const double  d3 = ab.dot(bp);
  const double  d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) {
    return {0.0, 1.0, 0.0};
  }

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return {1.0 - v, v, 0.0};
  }

  const Vector3 cp = p - c;
  const double  d5 = ab.dot(cp);
  const double  d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) {
    return {0.0, 0.0, 1.0};
  }

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return {1.0 - w, 0.0, w};
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {0.0, 1.0 - w, w};
  }

  const double denom = 1.0 / (va + vb + vc);
  double       v     = std::clamp(vb * denom, 0.0, 1.0);
  double       w     = std::clamp(vc * denom, 0.0, 1.0);
  double       u     = std::max(0.0, 1.0 - v - w);
  const double sum   = u + v + w;
  return {u / sum, v / sum, w / sum};
}

double SpatialIndex::Box::squaredDistance(const Vector3 &p) const
{
  const Vector3 below = (lower - p).cwiseMax(0.0);
  const Vector3 above = (p - upper).cwiseMax(0.0);
  return (below + above).squaredNorm();
}

SpatialIndex::SpatialIndex(const Mesh &mesh)
    : _vertices(mesh.vertices())
{
  if (mesh.empty()) {
    throw Error("empty mesh");
  }

  std::vector<Box> boxes;
  boxes.reserve(_vertices.size());
  for (const auto &v : _vertices) {
    boxes.push_back({v, v});
  }
  _vertexTree = buildTree(boxes);

  _edges = mesh.edges();
  boxes.clear();
  for (const auto &e : _edges) {
    const auto &a = _vertices[e.vertices[0]];
    const auto &b = _vertices[e.vertices[1]];
    boxes.push_back({a.cwiseMin(b), a.cwiseMax(b)});
  }
  _edgeTree = buildTree(boxes);

  // Degenerate (zero-area) triangles are covered by their edges and vertices.
  for (const auto &t : mesh.triangles()) {
    const auto &a = _vertices[t.vertices[0]];
    const auto &b = _vertices[t.vertices[1]];
    const auto &c = _vertices[t.vertices[2]];
    const double scale = (b - a).squaredNorm() * (c - a).squaredNorm();
    if ((b - a).cross(c - a).squaredNorm() > degenerateTriangle * scale) {
      _triangles.push_back(t);
    }
  }
  boxes.clear();
  for (const auto &t : _triangles) {
    const auto &a = _vertices[t.vertices[0]];
    const auto &b = _vertices[t.vertices[1]];
    const auto &c = _vertices[t.vertices[2]];
    boxes.push_back({a.cwiseMin(b).cwiseMin(c), a.cwiseMax(b).cwiseMax(c)});
  }
  _triangleTree = buildTree(boxes);
}

SpatialIndex::Tree SpatialIndex::buildTree(const std::vector<Box> &boxes)
{
  Tree tree;
  if (boxes.empty()) {
    return tree;
  }
  std::vector<Vector3> centers;
  centers.reserve(boxes.size());
  for (const auto &box : boxes) {
    centers.push_back(0.5 * (box.lower + box.upper));
  }
  tree.order.resize(boxes.size());
  std::iota(tree.order.begin(), tree.order.end(), 0);
  tree.nodes.reserve(2 * boxes.size() / leafSize + 1);
  buildNode(tree, boxes, centers, 0, static_cast<int>(boxes.size()));
  return tree;
}

int SpatialIndex::buildNode(Tree &tree, const std::vector<Box> &boxes, const std::vector<Vector3> &centers,
                            int begin, int end)
{
  Box     bounds{boxes[tree.order[begin]].lower, boxes[tree.order[begin]].upper};
  Vector3 centerLower = centers[tree.order[begin]];
  Vector3 centerUpper = centerLower;
  for (int i = begin + 1; i < end; ++i) {
    const int id = tree.order[i];
    bounds.lower = bounds.lower.cwiseMin(boxes[id].lower);
    bounds.upper = bounds.upper.cwiseMax(boxes[id].upper);
    centerLower  = centerLower.cwiseMin(centers[id]);
    centerUpper  = centerUpper.cwiseMax(centers[id]);
  }

  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(Node{bounds, begin, end - begin, -1});
  if (end - begin <= leafSize) {
    return index;
  }

  int axis;
  (centerUpper - centerLower).maxCoeff(&axis);
  const int middle = begin + (end - begin) / 2;
  std::nth_element(tree.order.begin() + begin, tree.order.begin() + middle, tree.order.begin() + end,
                   [&](int a, int b) {
                     if (centers[a][axis] != centers[b][axis]) {
                       return centers[a][axis] < centers[b][axis];
                     }
                     return a < b;
                   });

  const int left  = buildNode(tree, boxes, centers, begin, middle);
  const int right = buildNode(tree, boxes, centers, middle, end);
  tree.nodes[index].first = left;
  tree.nodes[index].count = 0;
  tree.nodes[index].right = right;
  return index;
}

template <typename Candidate, typename Better>
void SpatialIndex::search(const Tree &tree, const Vector3 &point, Candidate &&candidate, Better &&better,
                          double &bestSquared, double slack) const
{
  if (tree.empty()) {
    return;
  }
  const auto pruned = [&](const Node &node) {
    return node.box.squaredDistance(point) > bestSquared * (1.0 + slack);
  };

  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node &node = tree.nodes[stack.back()];
    stack.pop_back();
    if (pruned(node)) {
      continue;
    }
    if (node.count > 0) {
      for (int slot = node.first; slot < node.first + node.count; ++slot) {
        better(candidate(tree.order[slot]));
      }
      continue;
    }
    const Node &left  = tree.nodes[node.first];
    const Node &right = tree.nodes[node.right];
    // Push the farther child first so the nearer one is explored next.
    if (left.box.squaredDistance(point) <= right.box.squaredDistance(point)) {
      stack.push_back(node.right);
      stack.push_back(node.first);
    } else {
      stack.push_back(node.first);
      stack.push_back(node.right);
    }
  }
}

VertexID SpatialIndex::nearestVertex(const Vector3 &point) const
{
  VertexID best        = -1;
  double   bestSquared = std::numeric_limits<double>::infinity();
  struct Hit {
    VertexID id;
    double   squared;
  };
  search(
      _vertexTree, point,
      [&](int id) {
        const double squared = (_vertices[id] - point).squaredNorm();
        return Hit{id, squared};
      },
      [&](const Hit &hit) {
        const double incumbent = best < 0 ? std::numeric_limits<double>::infinity()
                                          : (_vertices[best] - point).squaredNorm();
        if (hit.squared < incumbent || (hit.squared == incumbent && hit.id < best)) {
          best        = hit.id;
          bestSquared = hit.squared;
        }
      },
      bestSquared, 0.0);
  return best;
}

Projection SpatialIndex::bestOnTriangles(const Vector3 &p) const
{
  Projection best;
  double     bestSquared = std::numeric_limits<double>::infinity();
  search(
      _triangleTree, p,
      [&](int id) {
        const auto &t       = _triangles[id].vertices;
        const auto  weights = closestPointOnTriangle(p, _vertices[t[0]], _vertices[t[1]], _vertices[t[2]]);
        const Vector3 closest =
            weights[0] * _vertices[t[0]] + weights[1] * _vertices[t[1]] + weights[2] * _vertices[t[2]];
        Projection hit;
        hit.kind     = EntityKind::Triangle;
        hit.entity   = id;
        hit.count    = 3;
        hit.vertices = {t[0], t[1], t[2]};
        hit.weights  = weights;
        hit.distance = (p - closest).norm();
        return hit;
      },
      [&](const Projection &hit) {
        if (isBetterProjection(hit, best)) {
          best        = hit;
          bestSquared = hit.distance * hit.distance;
        }
      },
      bestSquared, projectionSlack);
  return best;
}

Projection SpatialIndex::bestOnEdges(const Vector3 &p) const
{
  Projection best;
  double     bestSquared = std::numeric_limits<double>::infinity();
  search(
      _edgeTree, p,
      [&](int id) {
        const auto   &e       = _edges[id].vertices;
        const auto    weights = closestPointOnSegment(p, _vertices[e[0]], _vertices[e[1]]);
        const Vector3 closest = weights[0] * _vertices[e[0]] + weights[1] * _vertices[e[1]];
        Projection    hit;
        hit.kind     = EntityKind::Edge;
        hit.entity   = id;
        hit.count    = 2;
        hit.vertices = {e[0], e[1], 0};
        hit.weights  = {weights[0], weights[1], 0.0};
        hit.distance = (p - closest).norm();
        return hit;
      },
      [&](const Projection &hit) {
        if (isBetterProjection(hit, best)) {
          best        = hit;
          bestSquared = hit.distance * hit.distance;
        }
      },
      bestSquared, projectionSlack);
  return best;
}

Projection SpatialIndex::bestOnVertices(const Vector3 &p) const
{
  const VertexID id = nearestVertex(p);
  Projection     hit;
  hit.kind     = EntityKind::Vertex;
  hit.entity   = id;
  hit.count    = 1;
  hit.vertices = {id, 0, 0};
  hit.weights  = {1.0, 0.0, 0.0};
  hit.distance = (p - _vertices[id]).norm();
  return hit;
}

Projection SpatialIndex::project(const Vector3 &point) const
{
  Projection best = bestOnVertices(point);
  if (!_edges.empty()) {
    if (auto onEdge = bestOnEdges(point); onEdge.entity >= 0 && isBetterProjection(onEdge, best)) {
      best = onEdge;
    }
  }
  if (!_triangles.empty()) {
    if (auto onTriangle = bestOnTriangles(point); onTriangle.entity >= 0 && isBetterProjection(onTriangle, best)) {
      best = onTriangle;
    }
  }
  return best;
}

} // namespace duet::mesh
