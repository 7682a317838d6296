#include "duet/acceleration/Acceleration.hpp"

#include <fmt/format.h>
#include <numeric>

#include "duet/Error.hpp"

namespace duet::acceleration {

std::string_view toString(Method method)
{
  switch (method) {
  case Method::None:
    return "none";
  case Method::Constant:
    return "constant";
  case Method::Aitken:
    return "aitken";
  case Method::IqnIls:
    return "IQN-ILS";
  case Method::IqnImvj:
    return "IQN-IMVJ";
  }
  return "unknown";
}

AccelerationState::AccelerationState(std::vector<Eigen::Index> sizes)
    : blockSizes(std::move(sizes))
{
  _size = std::accumulate(blockSizes.begin(), blockSizes.end(), Eigen::Index{0});
  blockWeights.assign(blockSizes.size(), 1.0);
  previousJacobian = Eigen::MatrixXd::Zero(_size, _size);
}

Eigen::MatrixXd AccelerationState::residualMatrix() const
{
  Eigen::MatrixXd m(_size, columns());
  for (Eigen::Index i = 0; i < columns(); ++i) {
    m.col(i) = residualDifferences[static_cast<std::size_t>(i)];
  }
  return m;
}

Eigen::MatrixXd AccelerationState::valueMatrix() const
{
  Eigen::MatrixXd m(_size, columns());
  for (Eigen::Index i = 0; i < columns(); ++i) {
    m.col(i) = valueDifferences[static_cast<std::size_t>(i)];
  }
  return m;
}

Eigen::VectorXd AccelerationState::entryWeights() const
{
  Eigen::VectorXd w(_size);
  Eigen::Index    offset = 0;
  for (std::size_t b = 0; b < blockSizes.size(); ++b) {
    w.segment(offset, blockSizes[b]).setConstant(blockWeights[b]);
    offset += blockSizes[b];
  }
  return w;
}

namespace {

void checkInput(const AccelerationState &state, const Eigen::VectorXd &x, const Eigen::VectorXd &xTilde)
{
  if (x.size() != xTilde.size() || (state.size() > 0 && x.size() != state.size())) {
    throw Error(fmt::format("acceleration: size mismatch ({} vs {}, expected {})", x.size(), xTilde.size(),
                            state.size()));
  }
  if (!x.allFinite() || !xTilde.allFinite()) {
    throw Error("acceleration: non-finite coupling data");
  }
}

void checkRelaxation(double omega)
{
  if (!(omega > 0.0 && omega <= 1.0)) {
    throw Error(fmt::format("relaxation factor must lie in (0, 1], got {}", omega));
  }
}

} // namespace

Eigen::VectorXd constantRelax(const Eigen::VectorXd &x, const Eigen::VectorXd &xTilde, double omega)
{
  checkRelaxation(omega);
  if (x.size() != xTilde.size()) {
    throw Error("acceleration: size mismatch");
  }
  return x + omega * (xTilde - x);
}

Eigen::VectorXd aitken(AccelerationState &state, const Eigen::VectorXd &x, const Eigen::VectorXd &xTilde)
{
  checkInput(state, x, xTilde);
  const Eigen::VectorXd r = xTilde - x;
  if (r.isZero(0.0)) {
    return x;
  }
  ++state.iteration;
  if (!state.hasPrevious) {
    checkRelaxation(state.initialRelaxation);
    state.aitkenFactor     = state.initialRelaxation;
    state.previousResidual = r;
    state.hasPrevious      = true;
    return x + state.aitkenFactor * r;
  }
  const Eigen::VectorXd d  = r - state.previousResidual;
  const double          dd = d.squaredNorm();
  if (dd == 0.0) {
    throw Error("aitken: stagnated residual");
  }
  state.aitkenFactor     = -state.aitkenFactor * state.previousResidual.dot(d) / dd;
  state.previousResidual = r;
  return x + state.aitkenFactor * r;
}

std::vector<double> updatePreconditioner(AccelerationState &state, const Eigen::VectorXd &residual)
{
  if (state.weightsFrozen) {
    return state.blockWeights;
  }
  Eigen::Index offset = 0;
  for (std::size_t b = 0; b < state.blockSizes.size(); ++b) {
    const double norm     = residual.segment(offset, state.blockSizes[b]).norm();
    state.blockWeights[b] = norm > 0.0 ? 1.0 / norm : 1.0;
    offset += state.blockSizes[b];
  }
  state.weightsFrozen = true;
  return state.blockWeights;
}

std::vector<int> filterColumns(AccelerationState &state, double limit)
{
  const Eigen::VectorXd        p = state.entryWeights();
  std::vector<Eigen::VectorXd> basis;
  std::vector<int>             dropped;
  for (Eigen::Index i = 0; i < state.columns(); ++i) {
    Eigen::VectorXd v     = p.cwiseProduct(state.residualDifferences[static_cast<std::size_t>(i)]);
    const double    norm0 = v.norm();
    for (const auto &q : basis) {
      v -= q.dot(v) * q;
    }
    const double norm = v.norm();
    if (norm0 == 0.0 || norm < limit * norm0) {
      dropped.push_back(static_cast<int>(i));
    } else {
      basis.push_back(v / norm);
    }
  }
  for (auto it = dropped.rbegin(); it != dropped.rend(); ++it) {
    state.residualDifferences.erase(state.residualDifferences.begin() + *it);
    state.valueDifferences.erase(state.valueDifferences.begin() + *it);
  }
  return dropped;
}

namespace {

void capColumns(AccelerationState &state)
{
  const auto cap = static_cast<std::size_t>(std::min<Eigen::Index>(state.maxColumns, state.size()));
  while (state.residualDifferences.size() > cap) {
    state.residualDifferences.pop_back();
    state.valueDifferences.pop_back();
  }
}

} // namespace

Eigen::VectorXd iqnUpdate(AccelerationState &state, const Eigen::VectorXd &x, const Eigen::VectorXd &xTilde,
                          QuasiNewton variant, double filterLimit)
{
  checkInput(state, x, xTilde);
  const Eigen::VectorXd r = xTilde - x;
  if (r.isZero(0.0)) {
    return x;
  }
  ++state.iteration;
  if (!state.hasPrevious) {
    updatePreconditioner(state, r);
    state.previousValues   = xTilde;
    state.previousResidual = r;
    state.hasPrevious      = true;
    return constantRelax(x, xTilde, state.initialRelaxation);
  }

  state.residualDifferences.push_front(r - state.previousResidual);
  state.valueDifferences.push_front(xTilde - state.previousValues);
  state.previousValues   = xTilde;
  state.previousResidual = r;
  filterColumns(state, filterLimit);
  capColumns(state);

  const bool       imvj = variant == QuasiNewton::Imvj;
  const auto      &J    = state.previousJacobian;
  if (state.columns() == 0) {
    if (imvj) {
      return xTilde - J * r;
    }
    return constantRelax(x, xTilde, state.initialRelaxation);
  }

  const Eigen::VectorXd p  = state.entryWeights();
  const Eigen::MatrixXd V  = state.residualMatrix();
  const Eigen::MatrixXd W  = state.valueMatrix();
  const Eigen::MatrixXd PV = p.asDiagonal() * V;
  const Eigen::VectorXd alpha = PV.colPivHouseholderQr().solve(-p.cwiseProduct(r));

  if (!imvj) {
    return xTilde + W * alpha;
  }
  return xTilde + (W - J * V) * alpha - J * r;
}

Eigen::MatrixXd secantInverseJacobian(const AccelerationState &state, bool usePreviousJacobian)
{
  const Eigen::Index n = state.size();
  if (state.columns() == 0) {
    return usePreviousJacobian ? state.previousJacobian : Eigen::MatrixXd::Zero(n, n);
  }
  const Eigen::VectorXd p  = state.entryWeights();
  const Eigen::MatrixXd V  = state.residualMatrix();
  const Eigen::MatrixXd W  = state.valueMatrix();
  const Eigen::MatrixXd PV = p.asDiagonal() * V;
  // (PV)^+ P as an m x n matrix
  const Eigen::MatrixXd Z = PV.colPivHouseholderQr().solve(Eigen::MatrixXd(p.asDiagonal()));
  if (!usePreviousJacobian) {
    return W * Z;
  }
  const auto &J = state.previousJacobian;
  return (W - J * V) * Z + J;
}

void endWindow(AccelerationState &state, Method method)
{
  if (method == Method::IqnImvj) {
    state.previousJacobian = secantInverseJacobian(state, true);
    state.residualDifferences.clear();
    state.valueDifferences.clear();
  }
  state.hasPrevious   = false;
  state.weightsFrozen = false;
  state.iteration     = 0;
  ++state.window;
}

} // namespace duet::acceleration
