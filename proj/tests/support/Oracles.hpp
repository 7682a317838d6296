#pragma once

#include <Eigen/Dense>
#include <random>

#include "duet/mesh/Mesh.hpp"

namespace duet::test {

/// Linear scan; ties go to the lowest index.
mesh::VertexID scanNearestVertex(const mesh::Mesh &m, const mesh::Vector3 &p);

/// Distance from p to the closest point over all vertices, edges and triangles.
double scanClosestDistance(const mesh::Mesh &m, const mesh::Vector3 &p);

/// Closest point on triangle abc: plane projection if it falls inside, else
/// the best of the three clamped edge projections.
mesh::Vector3 closestOnTriangleOracle(const mesh::Vector3 &p, const mesh::Vector3 &a, const mesh::Vector3 &b,
                                      const mesh::Vector3 &c);
mesh::Vector3 closestOnSegmentOracle(const mesh::Vector3 &p, const mesh::Vector3 &a, const mesh::Vector3 &b);

Eigen::VectorXd randomVector(std::mt19937_64 &rng, Eigen::Index n, double lo = -1.0, double hi = 1.0);

} // namespace duet::test
