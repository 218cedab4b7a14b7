#include "h2demag/analytic.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <stdexcept>

namespace h2demag {

namespace {

void check_dims(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0 && std::isfinite(a) && std::isfinite(b) && std::isfinite(c)))
    throw std::invalid_argument("prism dimensions must be positive and finite");
}

// ln((s + x) / (s - x)) for 0 <= x < s, written to avoid cancellation in s - x.
double log_ratio(double s, double x) { return 2.0 * std::atanh(x / s); }

// Aharoni, J. Appl. Phys. 83, 3432 (1998): D_z of the prism 2a x 2b x 2c.
double aharoni_dz(double a, double b, double c) {
  const double a2 = a * a, b2 = b * b, c2 = c * c;
  const double r = std::sqrt(a2 + b2 + c2);
  const double ab = std::sqrt(a2 + b2), bc = std::sqrt(b2 + c2), ac = std::sqrt(a2 + c2);
  const double abc = a * b * c;
  double s = 0.0;
  s -= (b2 - c2) / (2.0 * b * c) * log_ratio(r, a);
  s -= (a2 - c2) / (2.0 * a * c) * log_ratio(r, b);
  s += b / (2.0 * c) * log_ratio(ab, a);
  s += a / (2.0 * c) * log_ratio(ab, b);
  s -= c / (2.0 * a) * log_ratio(bc, b);
  s -= c / (2.0 * b) * log_ratio(ac, a);
  s += 2.0 * std::atan(a * b / (c * r));
  s += (a * a2 + b * b2 - 2.0 * c * c2) / (3.0 * abc);
  s += (a2 + b2 - 2.0 * c2) / (3.0 * abc) * r;
  s += c / (a * b) * (ac + bc);
  s -= (ab * ab * ab + bc * bc * bc + ac * ac * ac) / (3.0 * abc);
  return s / kPi;
}

// int_0^L (L - v) / sqrt(v^2 + s^2) dv
double strip_kernel(double len, double s) {
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  return len * std::asinh(len / s) - (std::hypot(len, s) - s);
}

// 4 * int_0^P int_0^Q (P-u)(Q-v) / sqrt(u^2 + v^2 + d^2) dv du: Coulomb
// interaction of two unit-charged P x Q rectangles at separation d.
double plate_interaction(double p, double q, double d) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  const auto f = [&](double u) { return (p - u) * strip_kernel(q, std::hypot(u, d)); };
  return 4.0 * integrator.integrate(f, 0.0, p, 1e-14);
}

}  // namespace

ReferenceResult sphere_reference(const Point3& direction) {
  ReferenceResult r;
  r.geometry = "sphere";
  r.direction = direction.normalized();
  r.demag_factor = 1.0 / 3.0;
  r.ed_over_kd = 1.0 / 3.0;
  return r;
}

double aharoni_demag_factor(double a, double b, double c) {
  check_dims(a, b, c);
  // The closed form is symmetric in its first two arguments; its third is the
  // magnetised edge.
  return aharoni_dz(b / 2.0, c / 2.0, a / 2.0);
}

double demag_factor_quadrature(double a, double b, double c) {
  check_dims(a, b, c);
  // Faces of size b x c carrying charge +-1 at separation a.
  const double self = plate_interaction(b, c, 0.0);
  const double mutual = plate_interaction(b, c, a);
  const double energy = (2.0 * self - 2.0 * mutual) / (8.0 * kPi);
  return 2.0 * energy / (a * b * c);
}

ReferenceResult prism_reference(double a, double b, double c, int axis) {
  check_dims(a, b, c);
  ReferenceResult r;
  r.geometry = "prism";
  double n = 0.0;
  switch (axis) {
    case 0: n = aharoni_demag_factor(a, b, c); break;
    case 1: n = aharoni_demag_factor(b, c, a); break;
    case 2: n = aharoni_demag_factor(c, a, b); break;
    default: throw std::invalid_argument("prism axis must be 0, 1 or 2");
  }
  r.direction = Point3::Unit(axis);
  r.demag_factor = n;
  r.ed_over_kd = n;
  return r;
}

ReferenceResult torus_reference() {
  ReferenceResult r;
  r.geometry = "torus";
  return r;
}

}  // namespace h2demag
