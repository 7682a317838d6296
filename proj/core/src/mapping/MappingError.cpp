#include <fmt/format.h>

#include "duet/Error.hpp"
#include "duet/mapping/MappingOperator.hpp"

namespace duet::mapping {

double mappingError(const mesh::Mesh &in, const mesh::Mesh &out, const MappingOperator &op, const TestFunction &f)
{
  if (op.inputSize() != static_cast<Eigen::Index>(in.vertexCount()) ||
      op.outputSize() != static_cast<Eigen::Index>(out.vertexCount())) {
    throw Error(fmt::format("mapping {} -> {} does not match meshes \"{}\" and \"{}\"", op.inputMesh(),
                            op.outputMesh(), in.name(), out.name()));
  }
  Eigen::VectorXd inputValues(op.inputSize());
  for (Eigen::Index i = 0; i < inputValues.size(); ++i) {
    inputValues[i] = f(in.vertex(static_cast<mesh::VertexID>(i)));
  }
  const Eigen::VectorXd mapped = op.apply(inputValues);

  Eigen::VectorXd errors(mapped.size());
  for (Eigen::Index i = 0; i < errors.size(); ++i) {
    errors[i] = std::abs(mapped[i] - f(out.vertex(static_cast<mesh::VertexID>(i))));
  }
  return relativeL2(errors);
}

} // namespace duet::mapping
