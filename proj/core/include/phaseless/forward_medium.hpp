#pragma once

#include <memory>
#include <span>
#include <vector>

#include "phaseless/fields.hpp"
#include "phaseless/scene.hpp"

namespace phaseless {

/// Total field on the cells of a MediumIndex grid (same row-major layout).
struct VolumeField {
  std::vector<Complex> values;
  int iterations = 0;
  double residual = 0.0;  // final relative GMRES residual
};

/// Lippmann–Schwinger solver u − k² ∫ Φ(·, y) (n(y) − 1) u(y) dy = u^i on a
/// uniform grid. The contrast is piecewise constant per cell and Φ is
/// integrated exactly over each cell, so the discrete operator is a Toeplitz
/// convolution applied with FFTs on a zero-padded 2N × 2N grid. Systems are
/// solved by restarted GMRES to a relative residual of 1e-10.
class MediumSolver {
 public:
  MediumSolver(const MediumIndex& medium, double k);
  ~MediumSolver();
  MediumSolver(const MediumSolver&) = delete;
  MediumSolver& operator=(const MediumSolver&) = delete;

  double wavenumber() const { return k_; }
  const MediumIndex& medium() const { return medium_; }

  /// Throws GeometryError for a point source inside the grid square and
  /// ConvergenceError if GMRES stalls above the tolerance.
  VolumeField solve(const IncidentField& incident) const;

  /// u∞(x̂) = γ k² Σ_cells e^{−ik x̂·y} (n − 1) u h².
  std::vector<Complex> farfield(const VolumeField& field, std::span<const double> angles) const;

  /// Outgoing expansion of u^s about the support-box center, valid outside
  /// the support disk.
  RadiatingExpansion expansion(const VolumeField& field) const;

  /// u^s at points outside every cell where n ≠ 1. Points beyond the support
  /// disk use the multipole expansion, others direct cell quadrature.
  std::vector<Complex> scattered(const VolumeField& field, std::span<const Vec2> points) const;

  /// Applies the discrete operator u ↦ u − k² G ∗ ((n − 1) u).
  std::vector<Complex> apply(std::span<const Complex> u) const;

 private:
  struct Fft;

  MediumIndex medium_;
  double k_;
  std::vector<std::size_t> support_;  // cells with n ≠ 1
  Vec2 support_center_;
  double support_radius_ = 0.0;
  std::unique_ptr<Fft> fft_;
};

VolumeField solve_medium(const Scene& scene, const IncidentField& incident);
FarField medium_farfield(const VolumeField& field, const Scene& scene, std::span<const double> angles);

/// ∫ over the axis-aligned square of side h centered at c of Φ(x, ·).
Complex cell_integral(double k, Vec2 x, Vec2 c, double h);

}  // namespace phaseless
