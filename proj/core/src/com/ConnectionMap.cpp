#include "duet/com/ConnectionMap.hpp"

#include <fmt/format.h>
#include <unordered_map>

#include "duet/Error.hpp"

namespace duet::com {

namespace {

struct Box {
  mesh::Vector3 lower;
  mesh::Vector3 upper;
  bool          empty = true;
};

Box boundingBox(const std::vector<mesh::Vector3> &points, double margin)
{
  Box box;
  if (points.empty()) {
    return box;
  }
  box.empty = false;
  box.lower = box.upper = points.front();
  for (const auto &p : points) {
    box.lower = box.lower.cwiseMin(p);
    box.upper = box.upper.cwiseMax(p);
  }
  box.lower.array() -= margin;
  box.upper.array() += margin;
  return box;
}

bool intersects(const Box &a, const Box &b)
{
  if (a.empty || b.empty) {
    return false;
  }
  return (a.lower.array() <= b.upper.array()).all() && (b.lower.array() <= a.upper.array()).all();
}

std::unordered_map<int, int> owners(const std::vector<std::vector<int>> &partitions, const char *side)
{
  std::unordered_map<int, int> owner;
  for (std::size_t rank = 0; rank < partitions.size(); ++rank) {
    for (int id : partitions[rank]) {
      if (!owner.emplace(id, static_cast<int>(rank)).second) {
        throw Error(fmt::format("vertex {} of {} is owned by two ranks", id, side));
      }
    }
  }
  return owner;
}

} // namespace

ConnectionMap bboxCandidates(const std::vector<std::vector<mesh::Vector3>> &partitionsA,
                             const std::vector<std::vector<mesh::Vector3>> &partitionsB, double margin)
{
  if (!(margin >= 0.0)) {
    throw Error("bounding-box margin must be non-negative");
  }
  std::vector<Box> boxesB;
  for (const auto &part : partitionsB) {
    boxesB.push_back(boundingBox(part, margin));
  }
  ConnectionMap result;
  for (std::size_t i = 0; i < partitionsA.size(); ++i) {
    const auto boxA = boundingBox(partitionsA[i], margin);
    for (std::size_t j = 0; j < boxesB.size(); ++j) {
      if (intersects(boxA, boxesB[j])) {
        result.emplace(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return result;
}

ConnectionMap connectionMap(const std::vector<std::vector<int>> &partitionsA,
                            const std::vector<std::vector<int>> &partitionsB,
                            const std::map<int, std::vector<int>> &stencil)
{
  const auto ownerA = owners(partitionsA, "A");
  const auto ownerB = owners(partitionsB, "B");
  ConnectionMap result;
  for (const auto &[b, sources] : stencil) {
    const auto rb = ownerB.find(b);
    if (rb == ownerB.end()) {
      throw Error(fmt::format("stencil target vertex {} is not owned by any B rank", b));
    }
    for (int a : sources) {
      const auto ra = ownerA.find(a);
      if (ra == ownerA.end()) {
        throw Error(fmt::format("stencil source vertex {} is not owned by any A rank", a));
      }
      result.emplace(ra->second, rb->second);
    }
  }
  return result;
}

} // namespace duet::com
