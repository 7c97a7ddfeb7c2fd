#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "phaseless/geometry.hpp"
#include "phaseless/types.hpp"

namespace phaseless {

/// Incident or measurement direction d = (cos angle, sin angle).
class Direction {
 public:
  explicit Direction(double angle) : angle_(wrap_angle(angle)) {}
  double angle() const { return angle_; }
  Vec2 vector() const { return unit_vector(angle_); }
  bool operator==(const Direction&) const = default;

 private:
  double angle_;
};

enum class BoundaryCondition { sound_soft, impedance };

/// Impedance profile η(t) = mean + Σ c_m cos(m t) along the curve parameter.
struct ImpedanceProfile {
  Complex mean{0.0, 0.0};
  std::vector<std::pair<int, Complex>> cos_terms;

  Complex operator()(double t) const;
  bool operator==(const ImpedanceProfile&) const = default;
};

struct Obstacle {
  BoundaryCurve curve;
  BoundaryCondition bc = BoundaryCondition::sound_soft;
  ImpedanceProfile eta;  // ignored for sound_soft
  int nodes = 128;       // Nyström quadrature nodes

  /// Checks N even, N ≥ 32, and Im η ≥ 0 on 256 samples.
  void validate() const;
  bool operator==(const Obstacle&) const = default;
};

/// Refractive index on a uniform N×N grid of square cells covering
/// [center − L, center + L]²; n ≡ 1 outside the grid.
class MediumIndex {
 public:
  MediumIndex(int cells_per_side, Vec2 center, double half_width, std::vector<Complex> values);

  /// Disk of index `value` and radius `radius` at `disk_center`; cells cut
  /// by the circle carry the area-weighted average of the two indices.
  static MediumIndex disk(Vec2 disk_center, double radius, Complex value, int cells_per_side,
                          Vec2 grid_center, double half_width);

  int cells_per_side() const { return n_; }
  Vec2 center() const { return center_; }
  double half_width() const { return half_width_; }
  double cell_size() const { return 2.0 * half_width_ / n_; }
  /// Row-major storage: index = i2 * N + i1, i1 along x1.
  const std::vector<Complex>& values() const { return values_; }
  Complex value(int i1, int i2) const { return values_[static_cast<std::size_t>(i2) * n_ + i1]; }
  Vec2 cell_center(int i1, int i2) const;

  /// Bounding box of the cells where n ≠ 1.
  Box support_box() const;
  /// max |y − about| over cell corners of cells where n ≠ 1.
  double support_radius(Vec2 about) const;
  bool contrast_free() const;

  MediumIndex translated(Vec2 shift) const;

  bool operator==(const MediumIndex&) const = default;

 private:
  void validate() const;

  int n_;
  Vec2 center_;
  double half_width_;
  std::vector<Complex> values_;
};

struct NoScatterer {
  bool operator==(const NoScatterer&) const = default;
};

using Scatterer = std::variant<NoScatterer, Obstacle, MediumIndex>;

enum class MeasurementKind { line_segment, circle };

/// Sample points on a segment of the line x₂ = H or on a circle.
class MeasurementSet {
 public:
  static MeasurementSet line_segment(double height, double x1_begin, double x1_end, int count);
  static MeasurementSet circle(Vec2 center, double radius, int count);

  MeasurementKind kind() const { return kind_; }
  double height() const { return height_; }
  double x1_begin() const { return x1_begin_; }
  double x1_end() const { return x1_end_; }
  Vec2 center() const { return center_; }
  double radius() const { return radius_; }
  int count() const { return static_cast<int>(points_.size()); }
  const std::vector<Vec2>& points() const { return points_; }

  /// Throws GeometryError unless the set lies strictly above (segment) or
  /// strictly encloses (circle) the given box.
  void check_clear_of(const Box& scatterer_box) const;

  bool operator==(const MeasurementSet&) const = default;

 private:
  MeasurementSet() = default;
  MeasurementKind kind_ = MeasurementKind::circle;
  double height_ = 0.0;
  double x1_begin_ = 0.0;
  double x1_end_ = 0.0;
  Vec2 center_;
  double radius_ = 0.0;
  std::vector<Vec2> points_;
};

struct PlaneWave {
  Direction d;
  bool operator==(const PlaneWave&) const = default;
};
struct Superposition {
  Direction d;
  Direction d0;
  bool operator==(const Superposition&) const = default;
};
struct PointSource {
  Vec2 y;
  bool operator==(const PointSource&) const = default;
};

/// e^{ikx·d}, e^{ikx·d} + e^{ikx·d₀}, or Φ(x, y), times a unimodular
/// `amplitude` (1 by default; a global phase shifts every field).
struct IncidentField {
  std::variant<PlaneWave, Superposition, PointSource> variant;
  double k = 1.0;
  Complex amplitude{1.0, 0.0};

  static IncidentField plane(double k, double angle) { return {PlaneWave{Direction(angle)}, k}; }
  static IncidentField superposition(double k, double angle, double angle0) {
    return {Superposition{Direction(angle), Direction(angle0)}, k};
  }
  static IncidentField point_source(double k, Vec2 y) { return {PointSource{y}, k}; }
};

/// Value of the incident field at x. Throws SingularityError at a point source.
Complex eval_incident(const IncidentField& field, Vec2 x);

/// Gradient of the incident field at x.
std::pair<Complex, Complex> eval_incident_gradient(const IncidentField& field, Vec2 x);

/// Equispaced incident directions 2πj/count, plus the fixed reference d₀.
struct DirectionGrid {
  int count = 64;
  double d0_angle = 1.5 * kPi;

  std::vector<double> angles() const;
  bool operator==(const DirectionGrid&) const = default;
};

/// The complete description consumed by solvers, synthesizers and the
/// retrieval pipeline.
class Scene {
 public:
  Scene(double wavenumber, Scatterer scatterer, MeasurementSet measurement,
        DirectionGrid directions = {}, std::optional<Disk> support_bound = std::nullopt);

  double wavenumber() const { return k_; }
  const Scatterer& scatterer() const { return scatterer_; }
  const MeasurementSet& measurement() const { return measurement_; }
  const DirectionGrid& directions() const { return directions_; }

  /// Bounding box of the scatterer support; nullopt for an empty scene.
  std::optional<Box> scatterer_box() const;

  /// A-priori disk known to contain the scatterer. Uses the explicit bound
  /// when given, otherwise the scatterer's enclosing disk about its box
  /// center padded by 5%; a zero-radius disk at the measurement center
  /// for an empty scene.
  Disk support_bound() const;
  bool has_explicit_support_bound() const { return support_bound_.has_value(); }

  bool operator==(const Scene&) const = default;

 private:
  void validate() const;

  double k_;
  Scatterer scatterer_;
  MeasurementSet measurement_;
  DirectionGrid directions_;
  std::optional<Disk> support_bound_;
};

/// Same scene with the scatterer (and any explicit support bound) moved by
/// `shift`; the measurement set is unchanged and its invariants re-checked.
Scene translate_scene(const Scene& scene, Vec2 shift);

/// The standard non-convex benchmark curve centered at `center`.
BoundaryCurve builtin_kite(Vec2 center);

}  // namespace phaseless
