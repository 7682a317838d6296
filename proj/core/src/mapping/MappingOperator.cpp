#include "duet/mapping/MappingOperator.hpp"

#include <fmt/format.h>

#include "duet/Error.hpp"

namespace duet::mapping {

std::string_view toString(Constraint constraint)
{
  return constraint == Constraint::Consistent ? "consistent" : "conservative";
}

std::string_view toString(MappingKind kind)
{
  switch (kind) {
  case MappingKind::NearestNeighbor:
    return "nearest-neighbor";
  case MappingKind::NearestProjection:
    return "nearest-projection";
  case MappingKind::RadialBasisFunction:
    return "rbf";
  }
  return "unknown";
}

MappingOperator MappingOperator::fromSparse(MappingKind kind, Constraint constraint, std::string inputMesh,
                                            std::string outputMesh, SparseMatrix consistentCore)
{
  MappingOperator op;
  op._kind       = kind;
  op._constraint = constraint;
  op._inputMesh  = std::move(inputMesh);
  op._outputMesh = std::move(outputMesh);
  op._sparse     = std::move(consistentCore);
  op._sparse.makeCompressed();
  if (constraint == Constraint::Consistent) {
    op._inputSize  = op._sparse.cols();
    op._outputSize = op._sparse.rows();
  } else {
    op._inputSize  = op._sparse.rows();
    op._outputSize = op._sparse.cols();
  }
  return op;
}

MappingOperator MappingOperator::fromRbf(Constraint constraint, std::string inputMesh, std::string outputMesh,
                                         std::shared_ptr<const RbfSystem> consistentCore)
{
  MappingOperator op;
  op._kind       = MappingKind::RadialBasisFunction;
  op._constraint = constraint;
  op._inputMesh  = std::move(inputMesh);
  op._outputMesh = std::move(outputMesh);
  op._rbf        = std::move(consistentCore);
  if (constraint == Constraint::Consistent) {
    op._inputSize  = op._rbf->centerCount();
    op._outputSize = op._rbf->targetCount();
  } else {
    op._inputSize  = op._rbf->targetCount();
    op._outputSize = op._rbf->centerCount();
  }
  return op;
}

Eigen::VectorXd MappingOperator::apply(const Eigen::VectorXd &input) const
{
  if (input.size() != _inputSize) {
    throw Error(fmt::format("mapping {} -> {} expects {} input values, got {}", _inputMesh, _outputMesh,
                            _inputSize, input.size()));
  }
  const bool transposed = _constraint == Constraint::Conservative;
  if (_rbf) {
    return transposed ? _rbf->evaluateTransposed(input) : _rbf->evaluate(input);
  }
  if (transposed) {
    return _sparse.transpose() * input;
  }
  return _sparse * input;
}

mesh::DataField MappingOperator::apply(const mesh::DataField &input) const
{
  if (input.mesh != _inputMesh) {
    throw Error(fmt::format("data \"{}\" lives on mesh \"{}\" but the mapping reads from \"{}\"", input.name,
                            input.mesh, _inputMesh));
  }
  const int c = input.components;
  if (c < 1 || input.values.size() != _inputSize * c) {
    throw Error(fmt::format("data \"{}\" has {} values, expected {} x {}", input.name, input.values.size(),
                            _inputSize, c));
  }
  mesh::DataField output(input.name, _outputMesh, c, static_cast<std::size_t>(_outputSize));
  for (int k = 0; k < c; ++k) {
    const Eigen::VectorXd component = Eigen::Map<const Eigen::VectorXd, 0, Eigen::InnerStride<>>(
        input.values.data() + k, _inputSize, Eigen::InnerStride<>(c));
    Eigen::Map<Eigen::VectorXd, 0, Eigen::InnerStride<>>(output.values.data() + k, _outputSize,
                                                          Eigen::InnerStride<>(c)) = apply(component);
  }
  return output;
}

Eigen::MatrixXd MappingOperator::toDense() const
{
  Eigen::MatrixXd dense(_outputSize, _inputSize);
  for (Eigen::Index j = 0; j < _inputSize; ++j) {
    dense.col(j) = apply(Eigen::VectorXd::Unit(_inputSize, j));
  }
  return dense;
}

double relativeL2(const Eigen::VectorXd &pointwiseErrors)
{
  if (pointwiseErrors.size() == 0) {
    return 0.0;
  }
  return pointwiseErrors.norm() / static_cast<double>(pointwiseErrors.size());
}

} // namespace duet::mapping
