#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "duet/acceleration/Acceleration.hpp"

namespace duet::cplscheme {

enum class SchemeKind { SerialExplicit, ParallelExplicit, SerialImplicit, ParallelImplicit };

std::string_view           toString(SchemeKind kind);
std::optional<SchemeKind>  schemeKindFromString(std::string_view name);
bool                       isImplicit(SchemeKind kind);
bool                       isSerial(SchemeKind kind);

/// A coupled quantity: data name on a mesh.
struct DataKey {
  std::string data;
  std::string mesh;

  friend auto operator<=>(const DataKey &, const DataKey &) = default;
  friend bool operator==(const DataKey &, const DataKey &)  = default;
};

std::string toString(const DataKey &key);

using DataMap = std::map<DataKey, Eigen::VectorXd>;

struct Exchange {
  std::string data;
  std::string mesh;
  std::string from;
  std::string to;

  DataKey key() const { return {data, mesh}; }
  friend bool operator==(const Exchange &, const Exchange &) = default;
};

struct ConvergenceMeasure {
  std::string data;
  std::string mesh;
  double      limit = 1e-5;

  DataKey key() const { return {data, mesh}; }
  friend bool operator==(const ConvergenceMeasure &, const ConvergenceMeasure &) = default;
};

struct SchemeConfig {
  SchemeKind                       kind = SchemeKind::SerialExplicit;
  std::string                      first;
  std::string                      second;
  double                           windowSize    = 0.0;
  double                           maxTime       = 0.0;
  int                              maxIterations = 100;
  std::vector<ConvergenceMeasure>  measures;
  std::vector<Exchange>            exchanges;
  acceleration::AccelerationConfig acceleration;

  friend bool operator==(const SchemeConfig &, const SchemeConfig &) = default;
};

/// Number of windows in [0, maxTime]; throws unless maxTime is an integer
/// multiple of windowSize (relative tolerance 1e-9).
int windowCount(const SchemeConfig &config);

} // namespace duet::cplscheme
