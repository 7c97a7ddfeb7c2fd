#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "phaseless/fields.hpp"
#include "phaseless/scene.hpp"

namespace phaseless {

/// Combined-potential density at the nodes t_j = 2πj/N.
struct BoundaryDensity {
  std::vector<Complex> values;
  int nodes() const { return static_cast<int>(values.size()); }
};

/// Nodes and geometric data of the periodic trapezoidal discretization.
struct CurveDiscretization {
  CurveDiscretization(const BoundaryCurve& curve, int nodes);

  BoundaryCurve curve;
  int n;                      // number of nodes N (even)
  std::vector<double> t;
  std::vector<Vec2> x;        // p(t_j)
  std::vector<Vec2> dx;       // p'(t_j)
  std::vector<Vec2> ddx;      // p''(t_j)
  std::vector<double> speed;  // |p'(t_j)|
};

/// Nyström solver for the exterior sound-soft / impedance problem.
///
/// The scattered field is represented as u^s = (D − iη_c S)φ with the
/// coupling η_c = k, which is uniquely solvable at every wavenumber.
/// Logarithmic kernel singularities are integrated with the Kress product
/// quadrature; the hypersingular operator of the impedance case uses the
/// Maue form d/ds S d/ds + k² ν·Sν with spectral differentiation.
/// The system matrix is LU-factorized once at construction and shared
/// read-only by every solve.
class ObstacleSolver {
 public:
  ObstacleSolver(const Obstacle& obstacle, double k);

  double wavenumber() const { return k_; }
  double coupling() const { return coupling_; }
  const Obstacle& obstacle() const { return obstacle_; }
  const CurveDiscretization& discretization() const { return disc_; }

  /// Throws GeometryError if a point source lies inside or on the obstacle.
  BoundaryDensity solve(const IncidentField& incident) const;

  /// One density per incident field, from a single blocked back-substitution.
  std::vector<BoundaryDensity> solve_many(std::span<const IncidentField> incidents) const;

  /// Matrix E with u^s(points) = E φ. Targets within a few node spacings of
  /// the boundary use graded Gauss panels on the trigonometric interpolant
  /// of φ; all others use the trapezoidal rule. Throws GeometryError for
  /// points inside or on the obstacle.
  Eigen::MatrixXcd field_matrix(std::span<const Vec2> points) const;

  /// Matrices (G₁, G₂) with ∂u^s/∂x₁ = G₁ φ and ∂u^s/∂x₂ = G₂ φ.
  std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> gradient_matrices(std::span<const Vec2> points) const;

  /// Matrix F with u∞(angles) = F φ.
  Eigen::MatrixXcd farfield_matrix(std::span<const double> angles) const;

  std::vector<Complex> scattered(const BoundaryDensity& density, std::span<const Vec2> points) const;
  std::vector<std::pair<Complex, Complex>> scattered_gradient(const BoundaryDensity& density,
                                                              std::span<const Vec2> points) const;
  std::vector<Complex> farfield(const BoundaryDensity& density, std::span<const double> angles) const;

 private:
  Eigen::VectorXcd right_hand_side(const IncidentField& incident) const;

  Obstacle obstacle_;
  double k_;
  double coupling_;
  CurveDiscretization disc_;
  std::vector<double> row_scale_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

BoundaryDensity solve_obstacle(const Scene& scene, const IncidentField& incident, int nodes);
FieldSamples eval_scattered(const BoundaryDensity& density, const Scene& scene,
                            std::span<const Vec2> points);
FarField eval_farfield(const BoundaryDensity& density, const Scene& scene,
                       std::span<const double> angles);

/// Far field w∞(x̂, y) of the total field Φ(·, y) + w^s(·, y): scattered far
/// field plus γ e^{−ik x̂·y}. An empty scene yields γ e^{−ik x̂·y}.
FarField solve_point_source(const Scene& scene, Vec2 y, std::span<const double> angles);

}  // namespace phaseless
