#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "duet/acceleration/Accelerator.hpp"
#include "duet/com/Channel.hpp"
#include "duet/cplscheme/Schedule.hpp"
#include "duet/cplscheme/SchemeConfig.hpp"
#include "duet/cplscheme/TimeWindow.hpp"

namespace duet::cplscheme {

struct DataShape {
  Eigen::Index vertices   = 0;
  int          components = 1;

  Eigen::Index size() const { return vertices * components; }
};

/// Mapping callbacks run at the MapWrite / MapRead steps of a schedule.
struct SchemeHooks {
  std::function<void()> mapWrite;
  std::function<void()> mapRead;
};

/// One participant's side of a two-participant coupling scheme.
///
/// Holds one buffer per exchanged (data, mesh) pair. The solver side fills
/// buffers of data it sends (via the map-write hook or directly) and reads
/// buffers of data it receives. Communication happens only in advance()
/// calls that complete a time window.
class CouplingScheme {
public:
  CouplingScheme(SchemeConfig config, std::string participant, com::Channel &channel,
                 std::map<DataKey, DataShape> shapes, SchemeHooks hooks = {});

  /// Runs the initialize schedule; returns the window size.
  double initialize();

  /// Accumulates dt; at a window boundary exchanges data, checks convergence
  /// and accelerates as the schedule prescribes. Returns the maximal next
  /// time step (0 once coupling has ended).
  double advance(double dt);

  bool isCouplingOngoing() const;
  bool isActionRequired(Action action) const { return _pending.count(action) > 0; }
  void markActionFulfilled(Action action);
  const std::set<Action> &pendingActions() const { return _pending; }

  Role                role() const { return _role; }
  const SchemeConfig &config() const { return _config; }
  const SchemeState  &state() const { return _state; }
  double              time() const { return _state.time; }
  int                 windows() const { return _windows; }

  bool sends(const DataKey &key) const;
  bool receives(const DataKey &key) const;

  Eigen::VectorXd       &values(const DataKey &key);
  const Eigen::VectorXd &values(const DataKey &key) const;

  /// True if the last advance reached a window boundary.
  bool exchangedLastAdvance() const { return _exchanged; }
  /// True if the last boundary completed the window (explicit or converged).
  bool windowCompletedLastAdvance() const { return _windowCompleted; }

  int                      totalIterations() const { return _totalIterations; }
  int                      forcedWindows() const { return _forcedWindows; }
  const ConvergenceResult &lastConvergence() const { return _convergence; }

private:
  void run(const std::vector<Step> &steps);
  void sendStep();
  void receiveStep();
  void checkConvergenceStep();
  void accelerateStep();
  void advanceTimeStep();

  Eigen::VectorXd concatenate(const DataMap &source) const;

  SchemeConfig                 _config;
  std::string                  _participant;
  std::string                  _peer;
  Role                         _role;
  com::Channel                &_channel;
  std::map<DataKey, DataShape> _shapes;
  SchemeHooks                  _hooks;
  int                          _windows = 0;

  std::vector<Exchange> _outgoing;
  std::vector<Exchange> _incoming;
  std::vector<DataKey>  _accelerated;

  DataMap _data;      // buffers seen by the solver side
  DataMap _next;      // what goes out at Send (second participant, implicit)
  DataMap _used;      // accelerated iterate the solvers last used
  DataMap _lastInput; // previous evaluation of non-accelerated measured data

  std::unique_ptr<acceleration::Accelerator> _accelerator;

  SchemeState       _state;
  std::set<Action>  _pending;
  ConvergenceResult _convergence;
  bool              _initialized     = false;
  bool              _converged       = false;
  bool              _exchanged       = false;
  bool              _windowCompleted = false;
  int               _totalIterations = 0;
  int               _forcedWindows   = 0;
};

} // namespace duet::cplscheme
