#pragma once

#include <set>
#include <vector>

#include "duet/cplscheme/SchemeConfig.hpp"

namespace duet::cplscheme {

inline constexpr double timeTolerance = 1e-12; ///< relative to the window size

struct TimeWindow {
  double size        = 0.0;
  double accumulated = 0.0; ///< solver time spent inside the current window

  double remaining() const { return size - accumulated; }
};

/// min(solverDt, remaining window time); solverDt must be positive.
double clampDt(const TimeWindow &window, double solverDt);

/// True once the accumulated time equals the window size within 1e-12 relative.
bool windowBoundaryReached(const TimeWindow &window);

struct MeasureResult {
  DataKey key;
  double  change   = 0.0; ///< ||x_k - x_{k-1}||
  double  norm     = 0.0; ///< ||x_k||
  double  limit    = 0.0;
  bool    converged = false;
};

struct ConvergenceResult {
  std::vector<MeasureResult> measures;
  bool allMeasuresConverged = false;
  bool maxIterationsReached = false; ///< forced advance with failing measures
  bool converged            = false; ///< all measures pass, or the iteration cap was hit
};

/// Relative two-norm test ||x_k - x_{k-1}|| <= limit * max(||x_k||, 1e-30) per
/// measure. Missing data in either map is an error.
ConvergenceResult checkConvergence(const std::vector<ConvergenceMeasure> &measures, const DataMap &current,
                                   const DataMap &previous, int iteration, int maxIterations);

enum class Action { WriteCheckpoint, ReadCheckpoint };

const char *toString(Action action);

enum class Phase {
  FirstIteration, ///< entering a window for the first time
  Iterating,      ///< repeating a window whose last evaluation did not converge
  Finished        ///< the final window is complete
};

struct SchemeState {
  double     time        = 0.0; ///< current solver time
  double     windowStart = 0.0;
  TimeWindow window;
  int        completedWindows = 0;
  int        iteration        = 1; ///< within the current window
  Phase      phase            = Phase::FirstIteration;
};

/// Checkpoint actions implied by the state; always empty for explicit schemes.
std::set<Action> requiredActions(SchemeKind kind, const SchemeState &state);

} // namespace duet::cplscheme
