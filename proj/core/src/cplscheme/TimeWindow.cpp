#include "duet/cplscheme/TimeWindow.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "duet/Error.hpp"

namespace duet::cplscheme {

double clampDt(const TimeWindow &window, double solverDt)
{
  if (!(solverDt > 0.0)) {
    throw Error(fmt::format("time step must be positive, got {}", solverDt));
  }
  return std::min(solverDt, window.remaining());
}

bool windowBoundaryReached(const TimeWindow &window)
{
  return window.accumulated >= window.size * (1.0 - timeTolerance);
}

ConvergenceResult checkConvergence(const std::vector<ConvergenceMeasure> &measures, const DataMap &current,
                                   const DataMap &previous, int iteration, int maxIterations)
{
  ConvergenceResult result;
  result.allMeasuresConverged = true;
  for (const auto &measure : measures) {
    const auto key = measure.key();
    const auto now = current.find(key);
    const auto old = previous.find(key);
    if (now == current.end() || old == previous.end()) {
      throw Error(fmt::format("convergence measure on {} has no data", toString(key)));
    }
    if (now->second.size() != old->second.size()) {
      throw Error(fmt::format("convergence measure on {}: size changed from {} to {}", toString(key),
                              old->second.size(), now->second.size()));
    }
    MeasureResult m;
    m.key       = key;
    m.change    = (now->second - old->second).norm();
    m.norm      = now->second.norm();
    m.limit     = measure.limit;
    m.converged = m.change <= measure.limit * std::max(m.norm, 1e-30);
    result.allMeasuresConverged = result.allMeasuresConverged && m.converged;
    result.measures.push_back(m);
  }
  result.maxIterationsReached = !result.allMeasuresConverged && iteration >= maxIterations;
  result.converged            = result.allMeasuresConverged || result.maxIterationsReached;
  return result;
}

const char *toString(Action action)
{
  return action == Action::WriteCheckpoint ? "write-iteration-checkpoint" : "read-iteration-checkpoint";
}

std::set<Action> requiredActions(SchemeKind kind, const SchemeState &state)
{
  if (!isImplicit(kind)) {
    return {};
  }
  switch (state.phase) {
  case Phase::FirstIteration:
    return {Action::WriteCheckpoint};
  case Phase::Iterating:
    return {Action::ReadCheckpoint};
  case Phase::Finished:
    break;
  }
  return {};
}

} // namespace duet::cplscheme
