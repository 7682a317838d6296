#include "duet/cplscheme/Schedule.hpp"

#include "duet/Error.hpp"

namespace duet::cplscheme {

std::string_view toString(Step step)
{
  switch (step) {
  case Step::MapWrite:
    return "map-write";
  case Step::Send:
    return "send";
  case Step::Receive:
    return "receive";
  case Step::MapRead:
    return "map-read";
  case Step::CheckConvergence:
    return "check-convergence";
  case Step::Accelerate:
    return "accelerate";
  case Step::AdvanceTime:
    return "advance-time";
  }
  return "unknown";
}

std::vector<Step> stepSchedule(SchemeKind kind, Role role, Event event, bool ongoing)
{
  using enum Step;
  const bool implicit = isImplicit(kind);
  const bool serial   = isSerial(kind);

  if (event == Event::Initialize) {
    if (serial && role == Role::Second) {
      return {Receive, MapRead};
    }
    return {};
  }
  if (event != Event::Advance) {
    throw Error("illegal schedule event");
  }

  if (role == Role::First || !implicit) {
    if (serial && role == Role::Second) {
      std::vector<Step> steps{MapWrite, Send, AdvanceTime};
      if (ongoing) {
        steps.insert(steps.end(), {Receive, MapRead});
      }
      return steps;
    }
    return {MapWrite, Send, Receive, MapRead, AdvanceTime};
  }

  if (serial) {
    std::vector<Step> steps{MapWrite, CheckConvergence, Accelerate, Send, AdvanceTime};
    if (ongoing) {
      steps.insert(steps.end(), {Receive, MapRead});
    }
    return steps;
  }
  return {MapWrite, Receive, CheckConvergence, Accelerate, Send, MapRead, AdvanceTime};
}

} // namespace duet::cplscheme
