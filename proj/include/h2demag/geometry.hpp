#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>

namespace h2demag {

using Index = std::ptrdiff_t;
using Point3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Axis-aligned bounding box. A default-constructed box is empty.
struct Box {
  Point3 lo = Point3::Constant(std::numeric_limits<double>::infinity());
  Point3 hi = Point3::Constant(-std::numeric_limits<double>::infinity());

  bool empty() const { return (lo.array() > hi.array()).any(); }
  void extend(const Point3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void extend(const Box& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  Point3 extent() const { return hi - lo; }
  double diameter() const { return empty() ? 0.0 : extent().norm(); }
  bool contains(const Point3& p, double tol = 0.0) const {
    return (p.array() >= lo.array() - tol).all() && (p.array() <= hi.array() + tol).all();
  }
  /// Euclidean distance between two boxes (zero if they overlap).
  double distance(const Box& other) const {
    const Point3 gap = (other.lo - hi).cwiseMax(lo - other.hi).cwiseMax(0.0);
    return gap.norm();
  }
};

/// Signed volume of the tetrahedron (a,b,c,d); positive when (b-a,c-a,d-a) is right-handed.
inline double tet_signed_volume(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

/// Signed solid angle subtended at `apex` by the triangle (a,b,c) (Van Oosterom-Strackee).
/// Positive when the apex sees the triangle's back side, i.e. it lies below the
/// plane with respect to the normal (b-a)x(c-a).
double triangle_solid_angle(const Point3& apex, const Point3& a, const Point3& b, const Point3& c);

}  // namespace h2demag
