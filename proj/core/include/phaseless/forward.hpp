#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "phaseless/fields.hpp"
#include "phaseless/scene.hpp"

namespace phaseless {

class ObstacleSolver;
class MediumSolver;

/// Scene-independent front end over the obstacle and medium solvers. Each
/// model factorizes (or sets up) its solver once; all methods are const and
/// may be called concurrently.
class ForwardModel {
 public:
  explicit ForwardModel(const Scene& scene);
  ~ForwardModel();
  ForwardModel(ForwardModel&&) noexcept;
  ForwardModel& operator=(ForwardModel&&) noexcept;

  const Scene& scene() const { return scene_; }
  double wavenumber() const { return scene_.wavenumber(); }

  /// Scattered fields, one column per incident field, one row per point.
  Eigen::MatrixXcd scattered(std::span<const IncidentField> incidents, std::span<const Vec2> points) const;

  /// Total fields u^i + u^s, same layout.
  Eigen::MatrixXcd total(std::span<const IncidentField> incidents, std::span<const Vec2> points) const;

  /// Far fields u∞, one column per incident field, one row per angle.
  Eigen::MatrixXcd farfield(std::span<const IncidentField> incidents, std::span<const double> angles) const;

  /// Scattered fields and far fields from a single set of solves.
  void scattered_and_farfield(std::span<const IncidentField> incidents, std::span<const Vec2> points,
                              std::span<const double> angles, Eigen::MatrixXcd& scattered,
                              Eigen::MatrixXcd& farfield) const;

 private:
  Scene scene_;
  std::unique_ptr<ObstacleSolver> obstacle_;
  std::unique_ptr<MediumSolver> medium_;
};

/// Plane waves e^{ikx·d} for each angle.
std::vector<IncidentField> plane_waves(double k, std::span<const double> angles);

}  // namespace phaseless
