#include "duet/cplscheme/SchemeConfig.hpp"

#include <cmath>
#include <fmt/format.h>

#include "duet/Error.hpp"

namespace duet::cplscheme {

std::string_view toString(SchemeKind kind)
{
  switch (kind) {
  case SchemeKind::SerialExplicit:
    return "serial-explicit";
  case SchemeKind::ParallelExplicit:
    return "parallel-explicit";
  case SchemeKind::SerialImplicit:
    return "serial-implicit";
  case SchemeKind::ParallelImplicit:
    return "parallel-implicit";
  }
  return "unknown";
}

std::optional<SchemeKind> schemeKindFromString(std::string_view name)
{
  for (auto kind : {SchemeKind::SerialExplicit, SchemeKind::ParallelExplicit, SchemeKind::SerialImplicit,
                    SchemeKind::ParallelImplicit}) {
    if (toString(kind) == name) {
      return kind;
    }
  }
  return std::nullopt;
}

bool isImplicit(SchemeKind kind)
{
  return kind == SchemeKind::SerialImplicit || kind == SchemeKind::ParallelImplicit;
}

bool isSerial(SchemeKind kind)
{
  return kind == SchemeKind::SerialExplicit || kind == SchemeKind::SerialImplicit;
}

std::string toString(const DataKey &key)
{
  return fmt::format("{}@{}", key.data, key.mesh);
}

int windowCount(const SchemeConfig &config)
{
  if (!(config.windowSize > 0.0) || !std::isfinite(config.windowSize)) {
    throw ConfigError(fmt::format("time-window-size must be positive, got {}", config.windowSize));
  }
  if (!(config.maxTime > 0.0) || !std::isfinite(config.maxTime)) {
    throw ConfigError(fmt::format("max-time must be positive, got {}", config.maxTime));
  }
  const double ratio   = config.maxTime / config.windowSize;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw ConfigError(fmt::format("max-time {} is not a multiple of time-window-size {}", config.maxTime,
                                  config.windowSize));
  }
  return static_cast<int>(rounded);
}

} // namespace duet::cplscheme
