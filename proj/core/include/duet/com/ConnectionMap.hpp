#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "duet/mesh/Mesh.hpp"

namespace duet::com {

using RankPair      = std::pair<int, int>;
using ConnectionMap = std::set<RankPair>;

/// Rank pairs (i, j) whose bounding boxes, each inflated by `margin`, intersect.
/// partitions[r] lists the vertex coordinates owned by rank r.
ConnectionMap bboxCandidates(const std::vector<std::vector<mesh::Vector3>> &partitionsA,
                             const std::vector<std::vector<mesh::Vector3>> &partitionsB, double margin);

/// Rank pairs (i, j) such that some vertex of B-rank j needs a vertex owned by
/// A-rank i. stencil maps a B vertex id to the A vertex ids it reads from.
ConnectionMap connectionMap(const std::vector<std::vector<int>> &partitionsA,
                            const std::vector<std::vector<int>> &partitionsB,
                            const std::map<int, std::vector<int>> &stencil);

} // namespace duet::com
