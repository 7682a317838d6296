#include "duet/mapping/RbfSystem.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <unordered_map>

#include "duet/Error.hpp"

namespace duet::mapping {

namespace {

constexpr double polynomialRankThreshold = 1e-10;

using Triplets = std::vector<Eigen::Triplet<double>>;

Eigen::MatrixXd denseBasis(const RadialBasis &basis, const mesh::Mesh &rows, const mesh::Mesh &columns)
{
  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(rows.vertexCount()),
                         static_cast<Eigen::Index>(columns.vertexCount()));
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    const auto &x = rows.vertex(static_cast<mesh::VertexID>(i));
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      matrix(i, j) = basis.evaluate((x - columns.vertex(static_cast<mesh::VertexID>(j))).norm());
    }
  }
  return matrix;
}

/// Entries phi(|x_i - y_j|) with |x_i - y_j| < support, found through a
/// uniform grid of cell width `support`.
Triplets sparseBasis(const RadialBasis &basis, const mesh::Mesh &rows, const mesh::Mesh &columns,
                     Eigen::Index rowOffset = 0, Eigen::Index columnOffset = 0)
{
  const double r = basis.supportRadius();
  struct CellHash {
    std::size_t operator()(const std::array<long long, 3> &c) const
    {
      return static_cast<std::size_t>(c[0] * 73856093LL ^ c[1] * 19349663LL ^ c[2] * 83492791LL);
    }
  };
  auto cellOf = [r](const mesh::Vector3 &p) {
    return std::array<long long, 3>{static_cast<long long>(std::floor(p.x() / r)),
                                    static_cast<long long>(std::floor(p.y() / r)),
                                    static_cast<long long>(std::floor(p.z() / r))};
  };
  std::unordered_map<std::array<long long, 3>, std::vector<int>, CellHash> grid;
  for (std::size_t j = 0; j < columns.vertexCount(); ++j) {
    grid[cellOf(columns.vertex(static_cast<mesh::VertexID>(j)))].push_back(static_cast<int>(j));
  }
  Triplets triplets;
  for (std::size_t i = 0; i < rows.vertexCount(); ++i) {
    const auto &x    = rows.vertex(static_cast<mesh::VertexID>(i));
    const auto  cell = cellOf(x);
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = grid.find({cell[0] + dx, cell[1] + dy, cell[2] + dz});
          if (it == grid.end()) {
            continue;
          }
          for (int j : it->second) {
            const double value = basis.evaluate((x - columns.vertex(j)).norm());
            if (value != 0.0) {
              triplets.emplace_back(static_cast<Eigen::Index>(i) + rowOffset, j + columnOffset, value);
            }
          }
        }
      }
    }
  }
  return triplets;
}

bool hasDuplicateVertices(const mesh::Mesh &mesh)
{
  std::vector<std::array<double, 3>> sorted;
  sorted.reserve(mesh.vertexCount());
  for (const auto &v : mesh.vertices()) {
    sorted.push_back({v.x(), v.y(), v.z()});
  }
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

} // namespace

// The assembled systems are symmetric, so transposed solves reuse the factorization.
struct RbfSystem::Factorization {
  bool                                                          sparse = false;
  Eigen::PartialPivLU<Eigen::MatrixXd>                          dense;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> sparseLu;

  Eigen::VectorXd solve(const Eigen::VectorXd &rhs) const
  {
    Eigen::VectorXd x;
    if (sparse) {
      x = const_cast<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> &>(sparseLu).solve(rhs);
    } else {
      x = dense.solve(rhs);
    }
    return x;
  }
};

RbfSystem::RbfSystem(const mesh::Mesh &centers, const mesh::Mesh &targets, RadialBasis basis, Polynomial polynomial)
    : _basis(basis), _polynomial(polynomial), _dimensions(centers.dimensions())
{
  if (centers.dimensions() != targets.dimensions()) {
    throw Error(fmt::format("RBF mapping between {}D mesh \"{}\" and {}D mesh \"{}\"", centers.dimensions(),
                            centers.name(), targets.dimensions(), targets.name()));
  }
  if (centers.empty()) {
    throw Error(fmt::format("RBF mapping needs at least one vertex on mesh \"{}\"", centers.name()));
  }
  const auto n = static_cast<Eigen::Index>(centers.vertexCount());
  _centerCount = n;
  _targetCount = static_cast<Eigen::Index>(targets.vertexCount());
  _sparse      = std::isfinite(_basis.supportRadius());
  if (polynomial != Polynomial::None && n < _dimensions + 1) {
    throw Error(fmt::format("too few vertices for polynomial: mesh \"{}\" has {} vertices, needs at least {}",
                            centers.name(), n, _dimensions + 1));
  }
  if (hasDuplicateVertices(centers)) {
    throw Error(fmt::format("rbf system singular: mesh \"{}\" has duplicate vertices", centers.name()));
  }

  if (polynomial != Polynomial::None) {
    const Eigen::MatrixXd full = polynomialMatrix(centers);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(full);
    qr.setThreshold(polynomialRankThreshold);
    const auto rank = qr.rank();
    for (Eigen::Index k = 0; k < rank; ++k) {
      _columns.push_back(static_cast<int>(qr.colsPermutation().indices()[k]));
    }
    std::sort(_columns.begin(), _columns.end());

    const Eigen::MatrixXd fullTargets = polynomialMatrix(targets);
    _polynomialAtCenters.resize(n, static_cast<Eigen::Index>(_columns.size()));
    _polynomialAtTargets.resize(fullTargets.rows(), static_cast<Eigen::Index>(_columns.size()));
    for (std::size_t k = 0; k < _columns.size(); ++k) {
      _polynomialAtCenters.col(static_cast<Eigen::Index>(k)) = full.col(_columns[k]);
      _polynomialAtTargets.col(static_cast<Eigen::Index>(k)) = fullTargets.col(_columns[k]);
    }
  }

  const Eigen::Index m    = polynomial == Polynomial::Integrated ? _polynomialAtCenters.cols() : 0;
  auto               fact = std::make_shared<Factorization>();
  fact->sparse            = _sparse;
  if (_sparse) {
    _sparseBasisAtTargets.resize(_targetCount, n);
    const auto targetTriplets = sparseBasis(_basis, targets, centers);
    _sparseBasisAtTargets.setFromTriplets(targetTriplets.begin(), targetTriplets.end());

    auto triplets = sparseBasis(_basis, centers, centers);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < m; ++k) {
        triplets.emplace_back(i, n + k, _polynomialAtCenters(i, k));
        triplets.emplace_back(n + k, i, _polynomialAtCenters(i, k));
      }
    }
    Eigen::SparseMatrix<double> system(n + m, n + m);
    system.setFromTriplets(triplets.begin(), triplets.end());
    system.makeCompressed();
    fact->sparseLu.compute(system);
    if (fact->sparseLu.info() != Eigen::Success) {
      throw Error(fmt::format("rbf system singular: sparse factorization failed for mesh \"{}\"", centers.name()));
    }
  } else {
    _basisAtTargets = denseBasis(_basis, targets, centers);
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n + m, n + m);
    system.topLeftCorner(n, n) = denseBasis(_basis, centers, centers);
    if (m > 0) {
      system.topRightCorner(n, m)   = _polynomialAtCenters;
      system.bottomLeftCorner(m, n) = _polynomialAtCenters.transpose();
    }
    fact->dense.compute(system);
    if (!(fact->dense.rcond() >= std::numeric_limits<double>::epsilon())) {
      throw Error(fmt::format("rbf system singular: reciprocal condition estimate {:.3g} for mesh \"{}\"",
                              fact->dense.rcond(), centers.name()));
    }
  }
  _factorization = std::move(fact);

  if (polynomial == Polynomial::Separated) {
    // Q^+ = R^{-1} Q1^T from the thin QR of the (full column rank) kept columns.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(_polynomialAtCenters);
    const Eigen::Index                    k     = _polynomialAtCenters.cols();
    const Eigen::MatrixXd                 thinQ = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
    const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
    _projector              = r.triangularView<Eigen::Upper>().solve(thinQ.transpose());
  }
}

Eigen::MatrixXd RbfSystem::polynomialMatrix(const mesh::Mesh &mesh) const
{
  Eigen::MatrixXd q(static_cast<Eigen::Index>(mesh.vertexCount()), _dimensions + 1);
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    const auto &x = mesh.vertex(static_cast<mesh::VertexID>(i));
    q(i, 0)       = 1.0;
    for (int d = 0; d < _dimensions; ++d) {
      q(i, d + 1) = x[d];
    }
  }
  return q;
}

Eigen::VectorXd RbfSystem::atTargets(const Eigen::VectorXd &lambda) const
{
  if (_sparse) {
    return _sparseBasisAtTargets * lambda;
  }
  return _basisAtTargets * lambda;
}

Eigen::VectorXd RbfSystem::atTargetsTransposed(const Eigen::VectorXd &w) const
{
  if (_sparse) {
    return _sparseBasisAtTargets.transpose() * w;
  }
  return _basisAtTargets.transpose() * w;
}

RbfSystem::Coefficients RbfSystem::solve(const Eigen::VectorXd &centerValues) const
{
  const Eigen::Index n = centerCount();
  if (centerValues.size() != n) {
    throw Error(fmt::format("RBF interpolation expects {} values, got {}", n, centerValues.size()));
  }
  Coefficients result;
  result.beta = Eigen::VectorXd::Zero(_dimensions + 1);
  Eigen::VectorXd kept;

  switch (_polynomial) {
  case Polynomial::None:
    result.lambda = _factorization->solve(centerValues);
    break;
  case Polynomial::Integrated: {
    const Eigen::Index m   = _polynomialAtCenters.cols();
    Eigen::VectorXd    rhs = Eigen::VectorXd::Zero(n + m);
    rhs.head(n)            = centerValues;
    const Eigen::VectorXd solution = _factorization->solve(rhs);
    result.lambda                  = solution.head(n);
    kept                           = solution.tail(m);
    break;
  }
  case Polynomial::Separated:
    kept          = _projector * centerValues;
    result.lambda = _factorization->solve(centerValues - _polynomialAtCenters * kept);
    break;
  }
  for (std::size_t k = 0; k < _columns.size(); ++k) {
    result.beta[_columns[k]] = kept[static_cast<Eigen::Index>(k)];
  }
  return result;
}

Eigen::VectorXd RbfSystem::evaluate(const Eigen::VectorXd &centerValues) const
{
  const Coefficients c = solve(centerValues);
  Eigen::VectorXd    s = atTargets(c.lambda);
  if (_polynomial != Polynomial::None) {
    Eigen::VectorXd kept(static_cast<Eigen::Index>(_columns.size()));
    for (std::size_t k = 0; k < _columns.size(); ++k) {
      kept[static_cast<Eigen::Index>(k)] = c.beta[_columns[k]];
    }
    s += _polynomialAtTargets * kept;
  }
  return s;
}

Eigen::VectorXd RbfSystem::evaluateTransposed(const Eigen::VectorXd &targetValues) const
{
  const Eigen::Index n = centerCount();
  if (targetValues.size() != targetCount()) {
    throw Error(fmt::format("transposed RBF evaluation expects {} values, got {}", targetCount(),
                            targetValues.size()));
  }
  const Eigen::VectorXd basisPart = atTargetsTransposed(targetValues);

  switch (_polynomial) {
  case Polynomial::None:
    return _factorization->solve(basisPart);
  case Polynomial::Integrated: {
    const Eigen::Index m = _polynomialAtCenters.cols();
    Eigen::VectorXd    rhs(n + m);
    rhs.head(n)                = basisPart;
    rhs.tail(m)                = _polynomialAtTargets.transpose() * targetValues;
    const Eigen::VectorXd full = _factorization->solve(rhs);
    return full.head(n);
  }
  case Polynomial::Separated: {
    // M = C~ C^{-1} (I - Q P) + Q~ P, hence M^T w = t + P^T (Q~^T w - Q^T t) with t = C^{-1} C~^T w.
    const Eigen::VectorXd t = _factorization->solve(basisPart);
    return t + _projector.transpose() *
                   (_polynomialAtTargets.transpose() * targetValues - _polynomialAtCenters.transpose() * t);
  }
  }
  return {};
}

} // namespace duet::mapping
