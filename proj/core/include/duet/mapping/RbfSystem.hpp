#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <memory>
#include <vector>

#include "duet/mapping/RadialBasis.hpp"
#include "duet/mesh/Mesh.hpp"

namespace duet::mapping {

/// How the linear polynomial 1, x, y[, z] enters the interpolant.
enum class Polynomial {
  Integrated, ///< one block system [C Q; Q^T 0]
  Separated,  ///< least-squares fit via QR first, then interpolate the residual with C
  None
};

/// RBF interpolant from `centers` evaluated at `targets`.
///
/// The interpolation matrix is factorized once: dense partial-pivot LU for
/// global bases, sparse LU for compactly supported ones. Every evaluation is
/// then a pair of triangular solves and a matrix-vector product.
/// Polynomial columns that are linearly dependent on the center geometry
/// (e.g. z for a planar mesh) are dropped by a rank-revealing QR.
class RbfSystem {
public:
  RbfSystem(const mesh::Mesh &centers, const mesh::Mesh &targets, RadialBasis basis, Polynomial polynomial);

  /// s(targets) for the interpolant through `centerValues`.
  Eigen::VectorXd evaluate(const Eigen::VectorXd &centerValues) const;
  /// Transpose of evaluate(): maps target-sized vectors onto the centers.
  Eigen::VectorXd evaluateTransposed(const Eigen::VectorXd &targetValues) const;

  struct Coefficients {
    Eigen::VectorXd lambda; ///< one per center
    Eigen::VectorXd beta;   ///< dimensions+1 entries; dropped columns are zero
  };
  Coefficients solve(const Eigen::VectorXd &centerValues) const;

  Eigen::Index      centerCount() const { return _centerCount; }
  Eigen::Index      targetCount() const { return _targetCount; }
  bool              isSparse() const { return _sparse; }
  Polynomial        polynomial() const { return _polynomial; }
  const RadialBasis &basis() const { return _basis; }
  /// Indices (0 = constant, 1.. = coordinates) of polynomial columns in use.
  const std::vector<int> &polynomialColumns() const { return _columns; }

private:
  struct Factorization;

  Eigen::MatrixXd polynomialMatrix(const mesh::Mesh &mesh) const;
  Eigen::VectorXd atTargets(const Eigen::VectorXd &lambda) const;
  Eigen::VectorXd atTargetsTransposed(const Eigen::VectorXd &w) const;

  RadialBasis      _basis;
  Polynomial       _polynomial;
  int              _dimensions;
  std::vector<int> _columns;

  Eigen::Index _centerCount = 0;
  Eigen::Index _targetCount = 0;
  bool         _sparse      = false;

  Eigen::MatrixXd             _basisAtTargets;       // C~ (dense bases)
  Eigen::SparseMatrix<double> _sparseBasisAtTargets; // C~ (compact bases)
  Eigen::MatrixXd             _polynomialAtCenters;  // Q, kept columns only
  Eigen::MatrixXd             _polynomialAtTargets;  // Q~, kept columns only
  Eigen::MatrixXd             _projector;            // Q^+ (separated mode)

  std::shared_ptr<const Factorization> _factorization;
};

} // namespace duet::mapping
