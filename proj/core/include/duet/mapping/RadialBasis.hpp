#pragma once

#include <string_view>

namespace duet::mapping {

enum class BasisKind { Gaussian, ThinPlateSplines, CompactThinPlateSplinesC2 };

/// Threshold below which a Gaussian is cut off to obtain a finite support.
inline constexpr double gaussianCutoff = 1e-9;

/// Shape parameter zeta for which exp(-(zeta r)^2) equals the cutoff at r.
double gaussianShapeFromSupport(double supportRadius);

/// A radially symmetric basis function phi(|x|).
class RadialBasis {
public:
  static RadialBasis gaussian(double supportRadius);
  static RadialBasis thinPlateSplines();
  static RadialBasis compactThinPlateSplinesC2(double supportRadius);

  BasisKind kind() const { return _kind; }
  bool      hasCompactSupport() const { return _kind != BasisKind::ThinPlateSplines; }
  /// Infinite for global bases.
  double supportRadius() const { return _supportRadius; }
  /// Gaussian shape parameter zeta; zero for other bases.
  double shapeParameter() const { return _shape; }

  double evaluate(double distance) const;

  std::string_view name() const;

private:
  RadialBasis(BasisKind kind, double supportRadius, double shape)
      : _kind(kind), _supportRadius(supportRadius), _shape(shape) {}

  BasisKind _kind;
  double    _supportRadius;
  double    _shape;
};

} // namespace duet::mapping
