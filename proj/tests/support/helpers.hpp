#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "phaseless/forward.hpp"
#include "phaseless/scene.hpp"

namespace testing {

using phaseless::Complex;

inline double max_abs(std::span<const Complex> a) {
  double m = 0.0;
  for (Complex v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline phaseless::Obstacle circle_obstacle(double radius, phaseless::Vec2 center = {}, int nodes = 128) {
  return {phaseless::BoundaryCurve::circle(center, radius), phaseless::BoundaryCondition::sound_soft, {}, nodes};
}

inline phaseless::Obstacle hard_circle(double radius, int nodes = 128) {
  return {phaseless::BoundaryCurve::circle({}, radius), phaseless::BoundaryCondition::impedance, {}, nodes};
}

inline phaseless::Obstacle kite_obstacle(int nodes = 128) {
  return {phaseless::builtin_kite({}), phaseless::BoundaryCondition::sound_soft, {}, nodes};
}

// Measurement circle of radius 15 with 128 points and 192 directions, dense
// enough for phase continuation at k = 2.
inline phaseless::Scene retrieval_scene(phaseless::Scatterer s, double k = 2.0, int points = 128,
                                        int directions = 192) {
  return phaseless::Scene(k, std::move(s), phaseless::MeasurementSet::circle({}, 15.0, points),
                          phaseless::DirectionGrid{directions, 1.5 * std::numbers::pi});
}

inline phaseless::Scene probe_scene(phaseless::Scatterer s, double k, double radius = 3.0, int points = 16) {
  return phaseless::Scene(k, std::move(s), phaseless::MeasurementSet::circle({}, radius, points));
}

}  // namespace testing
