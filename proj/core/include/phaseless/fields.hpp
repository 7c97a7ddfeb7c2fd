#pragma once

#include <vector>

#include "phaseless/types.hpp"

namespace phaseless {

enum class FieldTag { total, scattered, incident };

/// Complex field values at a list of points.
struct FieldSamples {
  std::vector<Vec2> points;
  std::vector<Complex> values;
  FieldTag tag = FieldTag::scattered;
};

/// Far-field pattern samples u∞(x̂) under u^s ~ e^{ik|x|}/√|x| · u∞(x̂).
struct FarField {
  std::vector<double> angles;
  std::vector<Complex> values;
  double k = 1.0;
};

/// Truncated outgoing expansion Σ_{n=−N}^{N} c_n H⁽¹⁾_{|n|}(k|x − c|) e^{inφ},
/// φ the polar angle of x − c. Valid outside the disk of `reference_radius`.
struct RadiatingExpansion {
  double k = 1.0;
  Vec2 center;
  double reference_radius = 0.0;
  int order = 0;                       // N
  std::vector<Complex> coefficients;   // c_{−N}, ..., c_{N}

  Complex coefficient(int n) const { return coefficients[static_cast<std::size_t>(n + order)]; }
  Complex& coefficient(int n) { return coefficients[static_cast<std::size_t>(n + order)]; }

  /// Field value at x. Throws GeometryError at the expansion center.
  Complex evaluate(Vec2 x) const;
};

/// ceil(k ρ) + 15, the truncation used for all radiating expansions.
int expansion_order(double k, double reference_radius);

}  // namespace phaseless
