#include "duet/mapping/RadialBasis.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "duet/Error.hpp"

namespace duet::mapping {

namespace {

void requirePositiveSupport(double supportRadius)
{
  if (!(supportRadius > 0.0) || !std::isfinite(supportRadius)) {
    throw Error(fmt::format("support radius must be positive and finite, got {}", supportRadius));
  }
}

} // namespace

double gaussianShapeFromSupport(double supportRadius)
{
  requirePositiveSupport(supportRadius);
  return std::sqrt(-std::log(gaussianCutoff)) / supportRadius;
}

RadialBasis RadialBasis::gaussian(double supportRadius)
{
  requirePositiveSupport(supportRadius);
  return {BasisKind::Gaussian, supportRadius, gaussianShapeFromSupport(supportRadius)};
}

RadialBasis RadialBasis::thinPlateSplines()
{
  return {BasisKind::ThinPlateSplines, std::numeric_limits<double>::infinity(), 0.0};
}

RadialBasis RadialBasis::compactThinPlateSplinesC2(double supportRadius)
{
  requirePositiveSupport(supportRadius);
  return {BasisKind::CompactThinPlateSplinesC2, supportRadius, 0.0};
}

double RadialBasis::evaluate(double distance) const
{
  switch (_kind) {
  case BasisKind::Gaussian: {
    if (distance > _supportRadius) {
      return 0.0;
    }
    const double scaled = _shape * distance;
    return std::exp(-scaled * scaled);
  }
  case BasisKind::ThinPlateSplines:
    if (distance == 0.0) {
      return 0.0;
    }
    return distance * distance * std::log(distance);
  case BasisKind::CompactThinPlateSplinesC2: {
    const double xi = distance / _supportRadius;
    if (xi >= 1.0) {
      return 0.0;
    }
    if (xi == 0.0) {
      return 1.0;
    }
    const double xi2 = xi * xi;
    const double xi3 = xi2 * xi;
    return 1.0 - 30.0 * xi2 - 10.0 * xi3 + 45.0 * xi2 * xi2 - 6.0 * xi3 * xi2 - 60.0 * xi3 * std::log(xi);
  }
  }
  return 0.0;
}

std::string_view RadialBasis::name() const
{
  switch (_kind) {
  case BasisKind::Gaussian:
    return "gaussian";
  case BasisKind::ThinPlateSplines:
    return "thin-plate-splines";
  case BasisKind::CompactThinPlateSplinesC2:
    return "compact-tps-c2";
  }
  return "unknown";
}

} // namespace duet::mapping
