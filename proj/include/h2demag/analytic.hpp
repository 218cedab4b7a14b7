#pragma once

#include "h2demag/geometry.hpp"

#include <string>

namespace h2demag {

struct ReferenceResult {
  std::string geometry;
  Point3 direction = Point3::Zero();  // magnetisation direction, zero for non-uniform
  double ed_over_kd = 0.0;
  double demag_factor = -1.0;  // -1 when not applicable
};

/// Uniformly magnetised sphere: N = 1/3.
ReferenceResult sphere_reference(const Point3& direction = Point3::UnitZ());

/// Aharoni's closed form for the ballistic demagnetising factor of a rectangular
/// prism with edge lengths (a, b, c), magnetised along the first edge. Near full
/// double precision for edge ratios up to ~100; cancellation costs digits beyond.
double aharoni_demag_factor(double a, double b, double c);

/// Same quantity from the magnetostatic self-energy of the two charged faces
/// perpendicular to the first edge, reduced to a one-dimensional integral and
/// evaluated by tanh-sinh quadrature. Independent of the closed form.
double demag_factor_quadrature(double a, double b, double c);

/// Prism [0,a]x[0,b]x[0,c] magnetised along axis 0, 1 or 2.
ReferenceResult prism_reference(double a, double b, double c, int axis);

/// Azimuthally magnetised torus of revolution: no charges, zero energy.
ReferenceResult torus_reference();

}  // namespace h2demag
