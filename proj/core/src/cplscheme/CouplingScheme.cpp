#include "duet/cplscheme/CouplingScheme.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "duet/Error.hpp"

namespace duet::cplscheme {

CouplingScheme::CouplingScheme(SchemeConfig config, std::string participant, com::Channel &channel,
                               std::map<DataKey, DataShape> shapes, SchemeHooks hooks)
    : _config(std::move(config)), _participant(std::move(participant)), _channel(channel),
      _shapes(std::move(shapes)), _hooks(std::move(hooks))
{
  if (_participant == _config.first) {
    _role = Role::First;
    _peer = _config.second;
  } else if (_participant == _config.second) {
    _role = Role::Second;
    _peer = _config.first;
  } else {
    throw Error(fmt::format("participant \"{}\" is not part of the coupling scheme", _participant));
  }
  _windows            = windowCount(_config);
  _state.window.size  = _config.windowSize;
  if (isImplicit(_config.kind) && _config.maxIterations < 1) {
    throw ConfigError("max-iterations must be at least 1");
  }

  for (const auto &exchange : _config.exchanges) {
    const auto key   = exchange.key();
    const auto shape = _shapes.find(key);
    if (shape == _shapes.end()) {
      throw Error(fmt::format("no buffer layout for exchanged data {}", toString(key)));
    }
    if (exchange.from == _participant && exchange.to == _peer) {
      _outgoing.push_back(exchange);
    } else if (exchange.from == _peer && exchange.to == _participant) {
      _incoming.push_back(exchange);
    } else {
      throw Error(fmt::format("exchange of {} from \"{}\" to \"{}\" does not connect \"{}\" and \"{}\"",
                              toString(key), exchange.from, exchange.to, _participant, _peer));
    }
    if (_data.count(key)) {
      throw Error(fmt::format("data {} is exchanged twice", toString(key)));
    }
    _data[key] = Eigen::VectorXd::Zero(shape->second.size());
  }

  if (isImplicit(_config.kind)) {
    for (const auto &measure : _config.measures) {
      if (!_data.count(measure.key())) {
        throw Error(fmt::format("convergence measure on {} which is not exchanged", toString(measure.key())));
      }
    }
    if (_role == Role::Second) {
      std::vector<Eigen::Index> blocks;
      for (const auto &exchange : _config.exchanges) {
        if (!isSerial(_config.kind) || exchange.from == _config.second) {
          _accelerated.push_back(exchange.key());
          blocks.push_back(_data[exchange.key()].size());
        }
      }
      _accelerator = std::make_unique<acceleration::Accelerator>(_config.acceleration, blocks);
      for (const auto &key : _accelerated) {
        _used[key] = Eigen::VectorXd::Zero(_data[key].size());
      }
      for (const auto &measure : _config.measures) {
        if (!_used.count(measure.key())) {
          _lastInput[measure.key()] = Eigen::VectorXd::Zero(_data[measure.key()].size());
        }
      }
    }
  }
}

bool CouplingScheme::sends(const DataKey &key) const
{
  return std::any_of(_outgoing.begin(), _outgoing.end(), [&](const Exchange &e) { return e.key() == key; });
}

bool CouplingScheme::receives(const DataKey &key) const
{
  return std::any_of(_incoming.begin(), _incoming.end(), [&](const Exchange &e) { return e.key() == key; });
}

Eigen::VectorXd &CouplingScheme::values(const DataKey &key)
{
  auto it = _data.find(key);
  if (it == _data.end()) {
    throw Error(fmt::format("data {} is not exchanged", toString(key)));
  }
  return it->second;
}

const Eigen::VectorXd &CouplingScheme::values(const DataKey &key) const
{
  return const_cast<CouplingScheme *>(this)->values(key);
}

bool CouplingScheme::isCouplingOngoing() const
{
  return _state.phase != Phase::Finished;
}

void CouplingScheme::markActionFulfilled(Action action)
{
  if (!_pending.erase(action)) {
    throw PhaseError(fmt::format("action {} is not required", toString(action)));
  }
}

double CouplingScheme::initialize()
{
  if (_initialized) {
    throw PhaseError("coupling scheme already initialized");
  }
  _initialized = true;
  _pending     = requiredActions(_config.kind, _state);
  run(stepSchedule(_config.kind, _role, Event::Initialize));
  return _config.windowSize;
}

double CouplingScheme::advance(double dt)
{
  if (!_initialized) {
    throw PhaseError("coupling scheme not initialized");
  }
  if (!isCouplingOngoing()) {
    throw PhaseError("advance after the coupling has ended");
  }
  if (!_pending.empty()) {
    throw PhaseError(fmt::format("advance called while action {} is still required", toString(*_pending.begin())));
  }
  if (!(dt > 0.0)) {
    throw Error(fmt::format("time step must be positive, got {}", dt));
  }
  auto &window = _state.window;
  if (dt > window.remaining() + timeTolerance * window.size) {
    throw Error(fmt::format("dt overshoots window: {} > remaining {}", dt, window.remaining()));
  }
  window.accumulated = std::min(window.accumulated + dt, window.size);
  _state.time        = _state.windowStart + window.accumulated;
  _exchanged         = false;
  _windowCompleted   = false;
  if (!windowBoundaryReached(window)) {
    return window.remaining();
  }
  window.accumulated = window.size;
  _exchanged         = true;
  _converged         = !isImplicit(_config.kind);
  _convergence       = {};
  run(stepSchedule(_config.kind, _role, Event::Advance));
  return isCouplingOngoing() ? _config.windowSize : 0.0;
}

void CouplingScheme::run(const std::vector<Step> &steps)
{
  const bool serialSecond = isSerial(_config.kind) && _role == Role::Second;
  for (auto step : steps) {
    switch (step) {
    case Step::MapWrite:
      if (_hooks.mapWrite) {
        _hooks.mapWrite();
      }
      break;
    case Step::Send:
      sendStep();
      break;
    case Step::Receive:
      if (serialSecond && !isCouplingOngoing()) {
        return;
      }
      receiveStep();
      break;
    case Step::MapRead:
      if (_hooks.mapRead) {
        _hooks.mapRead();
      }
      break;
    case Step::CheckConvergence:
      checkConvergenceStep();
      break;
    case Step::Accelerate:
      accelerateStep();
      break;
    case Step::AdvanceTime:
      advanceTimeStep();
      break;
    }
  }
}

void CouplingScheme::sendStep()
{
  com::WindowControl control;
  control.window    = static_cast<std::uint32_t>(_state.completedWindows);
  control.iteration = static_cast<std::uint32_t>(_state.iteration);
  control.action    = _converged ? com::ControlAction::Converged : com::ControlAction::Iterate;
  if (_convergence.maxIterationsReached) {
    control.text = "max-iterations reached";
  }
  _channel.sendControl(control);

  for (const auto &exchange : _outgoing) {
    const auto key  = exchange.key();
    const auto next = _next.find(key);
    com::FieldData field;
    field.data       = exchange.data;
    field.mesh       = exchange.mesh;
    field.components = static_cast<std::uint32_t>(_shapes.at(key).components);
    field.values     = next != _next.end() ? next->second : _data.at(key);
    _channel.send(com::makeFieldFrame(field));
  }
}

void CouplingScheme::receiveStep()
{
  const auto frame = _channel.receive();
  if (frame.kind == com::FrameKind::Shutdown) {
    throw CommError(fmt::format("\"{}\" shut down before the coupling ended ({})", _peer, com::readShutdownFrame(frame)));
  }
  const auto control = com::readControlFrame(frame);
  if (control.action == com::ControlAction::Hello) {
    throw CommError("unexpected hello frame during coupling");
  }
  if (control.window != static_cast<std::uint32_t>(_state.completedWindows) ||
      control.iteration != static_cast<std::uint32_t>(_state.iteration)) {
    throw CommError(fmt::format("\"{}\" is out of step with \"{}\": peer at window {} iteration {}, local at "
                                "window {} iteration {}",
                                _participant, _peer, control.window, control.iteration, _state.completedWindows,
                                _state.iteration));
  }
  if (_role == Role::First && isImplicit(_config.kind)) {
    _converged                        = control.action == com::ControlAction::Converged;
    _convergence                      = {};
    _convergence.converged            = _converged;
    _convergence.maxIterationsReached = control.text == "max-iterations reached";
  }
  for (const auto &exchange : _incoming) {
    const auto field = com::readFieldFrame(_channel.receive());
    const auto key   = exchange.key();
    if (field.data != exchange.data || field.mesh != exchange.mesh) {
      throw CommError(fmt::format("expected data {} but received {}@{}", toString(key), field.data, field.mesh));
    }
    const auto &shape = _shapes.at(key);
    if (field.values.size() != shape.size() || static_cast<int>(field.components) != shape.components) {
      throw CommError(fmt::format("data {}: received {} values with {} components, expected {} with {}",
                                  toString(key), field.values.size(), field.components, shape.size(),
                                  shape.components));
    }
    _data[key] = field.values;
  }
}

void CouplingScheme::checkConvergenceStep()
{
  DataMap current;
  DataMap previous;
  for (const auto &measure : _config.measures) {
    const auto key = measure.key();
    current[key]   = _data.at(key);
    if (auto used = _used.find(key); used != _used.end()) {
      previous[key] = used->second;
    } else {
      previous[key] = _lastInput.at(key);
    }
  }
  _convergence = checkConvergence(_config.measures, current, previous, _state.iteration, _config.maxIterations);
  _converged   = _convergence.converged;
  for (auto &[key, value] : _lastInput) {
    value = _data.at(key);
  }
}

Eigen::VectorXd CouplingScheme::concatenate(const DataMap &source) const
{
  Eigen::Index total = 0;
  for (const auto &key : _accelerated) {
    total += source.at(key).size();
  }
  Eigen::VectorXd out(total);
  Eigen::Index    offset = 0;
  for (const auto &key : _accelerated) {
    const auto &v = source.at(key);
    out.segment(offset, v.size()) = v;
    offset += v.size();
  }
  return out;
}

void CouplingScheme::accelerateStep()
{
  const Eigen::VectorXd x      = concatenate(_used);
  const Eigen::VectorXd xTilde = concatenate(_data);
  Eigen::VectorXd       next;
  if (_converged) {
    next = xTilde;
    _accelerator->windowConverged();
  } else {
    next = _accelerator->accelerate(x, xTilde);
  }
  Eigen::Index offset = 0;
  for (const auto &key : _accelerated) {
    const auto size = _data.at(key).size();
    _used[key]      = next.segment(offset, size);
    offset += size;
    if (receives(key)) {
      _data[key] = _used[key];
    } else {
      _next[key] = _used[key];
    }
  }
}

void CouplingScheme::advanceTimeStep()
{
  auto &window       = _state.window;
  window.accumulated = 0.0;
  _windowCompleted   = _converged;
  if (_converged) {
    _totalIterations += _state.iteration;
    if (_convergence.maxIterationsReached) {
      ++_forcedWindows;
    }
    ++_state.completedWindows;
    _state.windowStart = _state.completedWindows * _config.windowSize;
    _state.time        = _state.windowStart;
    _state.iteration   = 1;
    _state.phase       = _state.completedWindows >= _windows ? Phase::Finished : Phase::FirstIteration;
  } else {
    _state.time = _state.windowStart;
    ++_state.iteration;
    _state.phase = Phase::Iterating;
  }
  _pending = requiredActions(_config.kind, _state);
}

} // namespace duet::cplscheme
