#pragma once

#include <Eigen/Dense>
#include <deque>
#include <string_view>
#include <vector>

namespace duet::acceleration {

enum class Method { None, Constant, Aitken, IqnIls, IqnImvj };
enum class QuasiNewton { Ils, Imvj };

std::string_view toString(Method method);

struct AccelerationConfig {
  Method method            = Method::None;
  double initialRelaxation = 0.5; ///< omega0, also used for the first iteration of every window
  int    maxColumns        = 40;  ///< cap on retained V/W columns ("max-used-iterations")
  double filterLimit       = 1e-2;

  friend bool operator==(const AccelerationConfig &, const AccelerationConfig &) = default;
};

/// Iteration history of one fixed-point acceleration.
///
/// x denotes the iterate handed to the solvers, xTilde = H(x) their output,
/// R(x) = xTilde - x the residual. V and W hold residual and value differences
/// with the newest column at the front.
struct AccelerationState {
  explicit AccelerationState(std::vector<Eigen::Index> blockSizes = {});

  Eigen::Index size() const { return _size; }

  double initialRelaxation = 0.5;
  int    maxColumns        = 40;

  // Previous iterate of the current window.
  bool            hasPrevious = false;
  Eigen::VectorXd previousValues;   // xTilde^{k-1}
  Eigen::VectorXd previousResidual; // R(x^{k-1})

  std::deque<Eigen::VectorXd> residualDifferences; // V
  std::deque<Eigen::VectorXd> valueDifferences;    // W

  double          aitkenFactor = 0.5;
  Eigen::MatrixXd previousJacobian; // IMVJ only, dense size x size

  std::vector<Eigen::Index> blockSizes;
  std::vector<double>       blockWeights;
  bool                      weightsFrozen = false;

  int iteration = 0; // within the current window, 1-based after the first update
  int window    = 0;

  Eigen::Index columns() const { return static_cast<Eigen::Index>(residualDifferences.size()); }
  Eigen::MatrixXd residualMatrix() const;
  Eigen::MatrixXd valueMatrix() const;
  /// Per-entry scaling built from the block weights.
  Eigen::VectorXd entryWeights() const;

private:
  Eigen::Index _size = 0;
};

/// x + omega (xTilde - x)
Eigen::VectorXd constantRelax(const Eigen::VectorXd &x, const Eigen::VectorXd &xTilde, double omega);

/// Aitken dynamic under-relaxation. The first call in a window relaxes with
/// the initial factor; later calls update
///     omega <- -omega <R_prev, R - R_prev> / ||R - R_prev||^2.
/// Throws "stagnated residual" when R equals R_prev while R is non-zero.
Eigen::VectorXd aitken(AccelerationState &state, const Eigen::VectorXd &x, const Eigen::VectorXd &xTilde);

/// One quasi-Newton update: x^{k+1} = xTilde + (W - J V) alpha - J R with
/// alpha minimizing ||V alpha + R|| in the preconditioned metric (J = 0 for ILS).
Eigen::VectorXd iqnUpdate(AccelerationState &state, const Eigen::VectorXd &x, const Eigen::VectorXd &xTilde,
                          QuasiNewton variant, double filterLimit);

/// QR1 filter: modified Gram-Schmidt over the preconditioned V, newest first;
/// drops every column whose orthogonal remainder is below limit * ||column||.
/// Returns the dropped column indices (positions before removal).
std::vector<int> filterColumns(AccelerationState &state, double limit);

/// Residual-norm weighting: block weight = 1 / ||R_block|| (1 for a zero block).
/// Weights are frozen until the window ends.
std::vector<double> updatePreconditioner(AccelerationState &state, const Eigen::VectorXd &residual);

/// Closes a time window: IMVJ folds the window's secant information into
/// previousJacobian and clears V/W; ILS keeps columns up to the cap.
void endWindow(AccelerationState &state, Method method);

/// Dense inverse Jacobian approximation J = (W - J_prev V) (PV)^+ P + J_prev
/// from the current history. With ILS (J_prev = 0) this is W V^+.
Eigen::MatrixXd secantInverseJacobian(const AccelerationState &state, bool usePreviousJacobian);

} // namespace duet::acceleration
