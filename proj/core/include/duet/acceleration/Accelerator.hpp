#pragma once

#include "duet/acceleration/Acceleration.hpp"

namespace duet::acceleration {

/// Applies the configured acceleration to a concatenated coupling vector.
class Accelerator {
public:
  Accelerator(AccelerationConfig config, std::vector<Eigen::Index> blockSizes);

  /// Next iterate from the iterate x given to the solvers and their output xTilde.
  Eigen::VectorXd accelerate(const Eigen::VectorXd &x, const Eigen::VectorXd &xTilde);
  void            windowConverged();

  const AccelerationConfig &config() const { return _config; }
  const AccelerationState  &state() const { return _state; }

private:
  AccelerationConfig _config;
  AccelerationState  _state;
};

} // namespace duet::acceleration
