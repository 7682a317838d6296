#pragma once

#include <string_view>
#include <vector>

#include "duet/cplscheme/SchemeConfig.hpp"

namespace duet::cplscheme {

enum class Role { First, Second };
enum class Event { Initialize, Advance };

enum class Step { MapWrite, Send, Receive, MapRead, CheckConvergence, Accelerate, AdvanceTime };

std::string_view toString(Step step);

/// Ordered steps a participant performs for `event`. `ongoing` tells whether
/// another window evaluation follows (serial second participants only
/// receive when it does). Advance refers to a call that reaches the window
/// boundary; sub-cycling advances perform no steps.
std::vector<Step> stepSchedule(SchemeKind kind, Role role, Event event, bool ongoing = true);

} // namespace duet::cplscheme
