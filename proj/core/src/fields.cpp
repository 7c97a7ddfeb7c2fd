#include "phaseless/fields.hpp"

#include <cmath>
#include <vector>

#include "phaseless/errors.hpp"
#include "phaseless/special_functions.hpp"

namespace phaseless {

Complex RadiatingExpansion::evaluate(Vec2 x) const {
  const Vec2 rel = x - center;
  const double r = norm(rel);
  if (r == 0.0) throw GeometryError("radiating expansion evaluated at its center");
  const std::vector<Complex> h = special::hankel1_sequence(order, k * r);
  const double phi = std::atan2(rel.x2, rel.x1);
  Complex sum = coefficient(0) * h[0];
  for (int n = 1; n <= order; ++n) {
    const Complex e = std::exp(kI * (n * phi));
    sum += h[n] * (coefficient(n) * e + coefficient(-n) * std::conj(e));
  }
  return sum;
}

int expansion_order(double k, double reference_radius) {
  return static_cast<int>(std::ceil(k * reference_radius)) + 15;
}

}  // namespace phaseless
