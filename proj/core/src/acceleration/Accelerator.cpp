#include "duet/acceleration/Accelerator.hpp"

#include "duet/Error.hpp"

namespace duet::acceleration {

Accelerator::Accelerator(AccelerationConfig config, std::vector<Eigen::Index> blockSizes)
    : _config(config), _state(std::move(blockSizes))
{
  if (_config.method != Method::None && !(_config.initialRelaxation > 0.0 && _config.initialRelaxation <= 1.0)) {
    throw Error("relaxation factor must lie in (0, 1]");
  }
  if (_config.maxColumns < 1) {
    throw Error("max-used-iterations must be positive");
  }
  _state.initialRelaxation = _config.initialRelaxation;
  _state.maxColumns        = _config.maxColumns;
  _state.aitkenFactor      = _config.initialRelaxation;
}

Eigen::VectorXd Accelerator::accelerate(const Eigen::VectorXd &x, const Eigen::VectorXd &xTilde)
{
  switch (_config.method) {
  case Method::None:
    return xTilde;
  case Method::Constant:
    return constantRelax(x, xTilde, _config.initialRelaxation);
  case Method::Aitken:
    return aitken(_state, x, xTilde);
  case Method::IqnIls:
    return iqnUpdate(_state, x, xTilde, QuasiNewton::Ils, _config.filterLimit);
  case Method::IqnImvj:
    return iqnUpdate(_state, x, xTilde, QuasiNewton::Imvj, _config.filterLimit);
  }
  return xTilde;
}

void Accelerator::windowConverged()
{
  endWindow(_state, _config.method);
}

} // namespace duet::acceleration
