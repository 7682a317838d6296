#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "duet/mapping/RadialBasis.hpp"
#include "duet/mapping/RbfSystem.hpp"
#include "duet/mesh/Mesh.hpp"

namespace duet::mapping {

enum class Constraint { Consistent, Conservative };
enum class MappingKind { NearestNeighbor, NearestProjection, RadialBasisFunction };

std::string_view toString(Constraint constraint);
std::string_view toString(MappingKind kind);

/// Linear map M from values on the input mesh to values on the output mesh.
///
/// Consistent operators have unit row sums (constants are reproduced);
/// conservative operators are the exact transpose of the consistent operator
/// built in the opposite direction, hence unit column sums (sums are preserved).
/// Vector data is mapped component by component.
class MappingOperator {
public:
  using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  Constraint         constraint() const { return _constraint; }
  MappingKind        kind() const { return _kind; }
  const std::string &inputMesh() const { return _inputMesh; }
  const std::string &outputMesh() const { return _outputMesh; }
  Eigen::Index       inputSize() const { return _inputSize; }
  Eigen::Index       outputSize() const { return _outputSize; }

  Eigen::VectorXd  apply(const Eigen::VectorXd &input) const;
  mesh::DataField  apply(const mesh::DataField &input) const;

  /// Assembles M column by column from unit vectors; meant for small meshes.
  Eigen::MatrixXd toDense() const;

  /// nn/np operators only: the row-stochastic core (before any transpose).
  const SparseMatrix *sparseCore() const { return _rbf ? nullptr : &_sparse; }
  const RbfSystem    *rbfCore() const { return _rbf.get(); }

  static MappingOperator fromSparse(MappingKind kind, Constraint constraint, std::string inputMesh,
                                    std::string outputMesh, SparseMatrix consistentCore);
  static MappingOperator fromRbf(Constraint constraint, std::string inputMesh, std::string outputMesh,
                                 std::shared_ptr<const RbfSystem> consistentCore);

private:
  MappingOperator() = default;

  MappingKind                      _kind       = MappingKind::NearestNeighbor;
  Constraint                       _constraint = Constraint::Consistent;
  std::string                      _inputMesh;
  std::string                      _outputMesh;
  Eigen::Index                     _inputSize  = 0;
  Eigen::Index                     _outputSize = 0;
  SparseMatrix                     _sparse;
  std::shared_ptr<const RbfSystem> _rbf;
};

MappingOperator buildNearestNeighbor(const mesh::Mesh &in, const mesh::Mesh &out, Constraint constraint);
/// Falls back to nearest-neighbor weights when the input mesh has no connectivity.
MappingOperator buildNearestProjection(const mesh::Mesh &in, const mesh::Mesh &out, Constraint constraint);
MappingOperator buildRadialBasis(const mesh::Mesh &in, const mesh::Mesh &out, Constraint constraint,
                                 const RadialBasis &basis, Polynomial polynomial);

using TestFunction = std::function<double(const mesh::Vector3 &)>;

/// Discrete mapping error: sample f on `in`, map, compare with f on `out`,
/// and return (1/n) * sqrt(sum of squared pointwise errors) over the n output vertices.
double mappingError(const mesh::Mesh &in, const mesh::Mesh &out, const MappingOperator &op, const TestFunction &f);

/// (1/n) * ||errors||_2, the normalization used by mappingError.
double relativeL2(const Eigen::VectorXd &pointwiseErrors);

} // namespace duet::mapping
