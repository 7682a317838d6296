#include <fmt/format.h>
#include <vector>

#include "duet/Error.hpp"
#include "duet/mapping/MappingOperator.hpp"
#include "duet/mesh/SpatialIndex.hpp"

namespace duet::mapping {

namespace {

using Triplet = Eigen::Triplet<double>;

void requireCompatible(const mesh::Mesh &in, const mesh::Mesh &out)
{
  if (in.dimensions() != out.dimensions()) {
    throw Error(fmt::format("dimension mismatch: mesh \"{}\" is {}D, mesh \"{}\" is {}D", in.name(),
                            in.dimensions(), out.name(), out.dimensions()));
  }
  if (in.empty() || out.empty()) {
    throw Error(fmt::format("cannot map between \"{}\" ({} vertices) and \"{}\" ({} vertices)", in.name(),
                            in.vertexCount(), out.name(), out.vertexCount()));
  }
}

/// Row-stochastic consistent weights from `source` values to `target` vertices.
MappingOperator::SparseMatrix nearestNeighborWeights(const mesh::Mesh &source, const mesh::Mesh &target)
{
  const mesh::SpatialIndex index(source);
  std::vector<Triplet>     triplets;
  triplets.reserve(target.vertexCount());
  for (std::size_t i = 0; i < target.vertexCount(); ++i) {
    const auto j = index.nearestVertex(target.vertex(static_cast<mesh::VertexID>(i)));
    triplets.emplace_back(static_cast<int>(i), j, 1.0);
  }
  MappingOperator::SparseMatrix weights(static_cast<Eigen::Index>(target.vertexCount()),
                                        static_cast<Eigen::Index>(source.vertexCount()));
  weights.setFromTriplets(triplets.begin(), triplets.end());
  return weights;
}

MappingOperator::SparseMatrix projectionWeights(const mesh::Mesh &source, const mesh::Mesh &target)
{
  if (!source.hasConnectivity()) {
    return nearestNeighborWeights(source, target);
  }
  const mesh::SpatialIndex index(source);
  std::vector<Triplet>     triplets;
  triplets.reserve(3 * target.vertexCount());
  for (std::size_t i = 0; i < target.vertexCount(); ++i) {
    const auto projection = index.project(target.vertex(static_cast<mesh::VertexID>(i)));
    for (int k = 0; k < projection.count; ++k) {
      if (projection.weights[k] != 0.0) {
        triplets.emplace_back(static_cast<int>(i), projection.vertices[k], projection.weights[k]);
      }
    }
  }
  MappingOperator::SparseMatrix weights(static_cast<Eigen::Index>(target.vertexCount()),
                                        static_cast<Eigen::Index>(source.vertexCount()));
  weights.setFromTriplets(triplets.begin(), triplets.end());
  return weights;
}

} // namespace

MappingOperator buildNearestNeighbor(const mesh::Mesh &in, const mesh::Mesh &out, Constraint constraint)
{
  requireCompatible(in, out);
  auto core = constraint == Constraint::Consistent ? nearestNeighborWeights(in, out)
                                                   : nearestNeighborWeights(out, in);
  return MappingOperator::fromSparse(MappingKind::NearestNeighbor, constraint, in.name(), out.name(),
                                     std::move(core));
}

MappingOperator buildNearestProjection(const mesh::Mesh &in, const mesh::Mesh &out, Constraint constraint)
{
  requireCompatible(in, out);
  auto core = constraint == Constraint::Consistent ? projectionWeights(in, out) : projectionWeights(out, in);
  return MappingOperator::fromSparse(MappingKind::NearestProjection, constraint, in.name(), out.name(),
                                     std::move(core));
}

MappingOperator buildRadialBasis(const mesh::Mesh &in, const mesh::Mesh &out, Constraint constraint,
                                 const RadialBasis &basis, Polynomial polynomial)
{
  requireCompatible(in, out);
  auto core = constraint == Constraint::Consistent
                  ? std::make_shared<const RbfSystem>(in, out, basis, polynomial)
                  : std::make_shared<const RbfSystem>(out, in, basis, polynomial);
  return MappingOperator::fromRbf(constraint, in.name(), out.name(), std::move(core));
}

} // namespace duet::mapping
