#include "phaseless/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phaseless/errors.hpp"
#include "phaseless/special_functions.hpp"

namespace phaseless {

Complex ImpedanceProfile::operator()(double t) const {
  Complex eta = mean;
  for (const auto& [m, c] : cos_terms) eta += c * std::cos(m * t);
  return eta;
}

void Obstacle::validate() const {
  if (nodes < 32 || nodes % 2 != 0) {
    throw GeometryError("obstacle quadrature needs an even node count >= 32, got " +
                        std::to_string(nodes));
  }
  if (bc == BoundaryCondition::impedance) {
    for (int j = 0; j < 256; ++j) {
      if (eta(kTwoPi * j / 256).imag() < 0.0) {
        throw GeometryError("impedance must satisfy Im(eta) >= 0 along the boundary");
      }
    }
  }
}

MediumIndex::MediumIndex(int cells_per_side, Vec2 center, double half_width,
                         std::vector<Complex> values)
    : n_(cells_per_side), center_(center), half_width_(half_width), values_(std::move(values)) {
  validate();
}

void MediumIndex::validate() const {
  if (n_ < 4) throw GeometryError("medium grid needs at least 4 cells per side");
  if (!(half_width_ > 0.0)) throw GeometryError("medium grid half width must be positive");
  if (values_.size() != static_cast<std::size_t>(n_) * n_) {
    throw GeometryError("medium grid has " + std::to_string(values_.size()) + " values, expected " +
                        std::to_string(n_ * n_));
  }
  constexpr double kMinRealPart = 1e-6;
  for (int i2 = 0; i2 < n_; ++i2) {
    for (int i1 = 0; i1 < n_; ++i1) {
      const Complex v = value(i1, i2);
      if (!(v.real() >= kMinRealPart) || v.imag() < 0.0 || !std::isfinite(v.imag())) {
        throw GeometryError("refractive index must satisfy Re n > 0 and Im n >= 0");
      }
      const bool rim = i1 == 0 || i2 == 0 || i1 == n_ - 1 || i2 == n_ - 1;
      if (rim && v != Complex(1.0, 0.0)) {
        throw GeometryError("refractive index must equal 1 in the outermost ring of cells");
      }
    }
  }
}

MediumIndex MediumIndex::disk(Vec2 disk_center, double radius, Complex value, int cells_per_side,
                              Vec2 grid_center, double half_width) {
  const double h = 2.0 * half_width / cells_per_side;
  const Disk d{disk_center, radius};
  std::vector<Complex> values(static_cast<std::size_t>(cells_per_side) * cells_per_side);
  for (int i2 = 0; i2 < cells_per_side; ++i2) {
    for (int i1 = 0; i1 < cells_per_side; ++i1) {
      const Vec2 lo = grid_center + Vec2{-half_width + i1 * h, -half_width + i2 * h};
      const double fraction = disk_box_overlap(d, Box{lo, lo + Vec2{h, h}}) / (h * h);
      values[static_cast<std::size_t>(i2) * cells_per_side + i1] =
          fraction == 0.0 ? Complex(1.0, 0.0) : 1.0 + (value - 1.0) * fraction;
    }
  }
  return MediumIndex(cells_per_side, grid_center, half_width, std::move(values));
}

Vec2 MediumIndex::cell_center(int i1, int i2) const {
  const double h = cell_size();
  return center_ + Vec2{-half_width_ + (i1 + 0.5) * h, -half_width_ + (i2 + 0.5) * h};
}

Box MediumIndex::support_box() const {
  const double h = cell_size();
  Box box{{1e300, 1e300}, {-1e300, -1e300}};
  bool any = false;
  for (int i2 = 0; i2 < n_; ++i2) {
    for (int i1 = 0; i1 < n_; ++i1) {
      if (value(i1, i2) == Complex(1.0, 0.0)) continue;
      any = true;
      const Vec2 c = cell_center(i1, i2);
      box.lo.x1 = std::min(box.lo.x1, c.x1 - h / 2);
      box.lo.x2 = std::min(box.lo.x2, c.x2 - h / 2);
      box.hi.x1 = std::max(box.hi.x1, c.x1 + h / 2);
      box.hi.x2 = std::max(box.hi.x2, c.x2 + h / 2);
    }
  }
  if (!any) return Box{center_, center_};
  return box;
}

double MediumIndex::support_radius(Vec2 about) const {
  const double h = cell_size();
  double r = 0.0;
  for (int i2 = 0; i2 < n_; ++i2) {
    for (int i1 = 0; i1 < n_; ++i1) {
      if (value(i1, i2) == Complex(1.0, 0.0)) continue;
      const Vec2 c = cell_center(i1, i2);
      r = std::max(r, distance(c, about) + h / std::sqrt(2.0));
    }
  }
  return r;
}

bool MediumIndex::contrast_free() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](Complex v) { return v == Complex(1.0, 0.0); });
}

MediumIndex MediumIndex::translated(Vec2 shift) const {
  MediumIndex m = *this;
  m.center_ += shift;
  return m;
}

MeasurementSet MeasurementSet::line_segment(double height, double x1_begin, double x1_end,
                                            int count) {
  if (count < 2) throw GeometryError("line-segment measurement needs at least 2 points");
  if (!(x1_end > x1_begin)) throw GeometryError("line-segment extent must satisfy a < b");
  MeasurementSet m;
  m.kind_ = MeasurementKind::line_segment;
  m.height_ = height;
  m.x1_begin_ = x1_begin;
  m.x1_end_ = x1_end;
  m.points_.resize(count);
  for (int j = 0; j < count; ++j) {
    m.points_[j] = {x1_begin + (x1_end - x1_begin) * j / (count - 1), height};
  }
  return m;
}

MeasurementSet MeasurementSet::circle(Vec2 center, double radius, int count) {
  if (count < 3) throw GeometryError("circle measurement needs at least 3 points");
  if (!(radius > 0.0)) throw GeometryError("measurement circle radius must be positive");
  MeasurementSet m;
  m.kind_ = MeasurementKind::circle;
  m.center_ = center;
  m.radius_ = radius;
  m.points_.resize(count);
  for (int j = 0; j < count; ++j) m.points_[j] = center + radius * unit_vector(kTwoPi * j / count);
  return m;
}

void MeasurementSet::check_clear_of(const Box& box) const {
  if (kind_ == MeasurementKind::line_segment) {
    if (!(height_ > box.hi.x2)) {
      throw GeometryError("measurement line x2 = " + std::to_string(height_) +
                          " is not strictly above the scatterer (top at " +
                          std::to_string(box.hi.x2) + ")");
    }
    return;
  }
  for (Vec2 corner : {box.lo, box.hi, Vec2{box.lo.x1, box.hi.x2}, Vec2{box.hi.x1, box.lo.x2}}) {
    if (!(distance(corner, center_) < radius_)) {
      throw GeometryError("measurement circle does not enclose the scatterer bounding box");
    }
  }
}

Complex eval_incident(const IncidentField& field, Vec2 x) {
  const double k = field.k;
  return std::visit(
      [&](const auto& v) -> Complex {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PlaneWave>) {
          return field.amplitude * std::exp(kI * (k * dot(x, v.d.vector())));
        } else if constexpr (std::is_same_v<T, Superposition>) {
          return field.amplitude * (std::exp(kI * (k * dot(x, v.d.vector()))) +
                                    std::exp(kI * (k * dot(x, v.d0.vector()))));
        } else {
          return field.amplitude * special::fundamental_solution(k, x, v.y);
        }
      },
      field.variant);
}

std::pair<Complex, Complex> eval_incident_gradient(const IncidentField& field, Vec2 x) {
  const double k = field.k;
  auto plane_grad = [&](Vec2 d) {
    const Complex e = kI * k * std::exp(kI * (k * dot(x, d)));
    return std::pair<Complex, Complex>{e * d.x1, e * d.x2};
  };
  return std::visit(
      [&](const auto& v) -> std::pair<Complex, Complex> {
        using T = std::decay_t<decltype(v)>;
        std::pair<Complex, Complex> g;
        if constexpr (std::is_same_v<T, PlaneWave>) {
          g = plane_grad(v.d.vector());
        } else if constexpr (std::is_same_v<T, Superposition>) {
          const auto a = plane_grad(v.d.vector());
          const auto b = plane_grad(v.d0.vector());
          g = {a.first + b.first, a.second + b.second};
        } else {
          g = special::fundamental_solution_gradient(k, x, v.y);
        }
        return {field.amplitude * g.first, field.amplitude * g.second};
      },
      field.variant);
}

std::vector<double> DirectionGrid::angles() const {
  std::vector<double> a(count);
  for (int j = 0; j < count; ++j) a[j] = kTwoPi * j / count;
  return a;
}

Scene::Scene(double wavenumber, Scatterer scatterer, MeasurementSet measurement,
             DirectionGrid directions, std::optional<Disk> support_bound)
    : k_(wavenumber),
      scatterer_(std::move(scatterer)),
      measurement_(std::move(measurement)),
      directions_(directions),
      support_bound_(support_bound) {
  validate();
}

void Scene::validate() const {
  if (!(k_ > 0.0) || !std::isfinite(k_)) throw GeometryError("wavenumber must be positive");
  if (directions_.count < 1) throw GeometryError("direction grid needs at least one direction");
  if (const auto* obstacle = std::get_if<Obstacle>(&scatterer_)) obstacle->validate();
  if (auto box = scatterer_box()) measurement_.check_clear_of(*box);
  if (support_bound_) {
    if (!(support_bound_->radius >= 0.0)) throw GeometryError("support bound radius must be >= 0");
    // The bound is a prior on location; it must at least cover the support.
    const Disk b = *support_bound_;
    bool covered = true;
    if (const auto* obstacle = std::get_if<Obstacle>(&scatterer_)) {
      covered = obstacle->curve.enclosing_radius(b.center) <= b.radius;
    } else if (const auto* medium = std::get_if<MediumIndex>(&scatterer_)) {
      covered = medium->contrast_free() || medium->support_radius(b.center) <= b.radius;
    }
    if (!covered) throw GeometryError("support bound does not contain the scatterer");
  }
}

std::optional<Box> Scene::scatterer_box() const {
  if (const auto* obstacle = std::get_if<Obstacle>(&scatterer_)) return obstacle->curve.bounding_box();
  if (const auto* medium = std::get_if<MediumIndex>(&scatterer_)) {
    if (medium->contrast_free()) return std::nullopt;
    return medium->support_box();
  }
  return std::nullopt;
}

Disk Scene::support_bound() const {
  if (support_bound_) return *support_bound_;
  if (const auto* obstacle = std::get_if<Obstacle>(&scatterer_)) {
    const Vec2 c = obstacle->curve.bounding_box().center();
    return {c, 1.05 * obstacle->curve.enclosing_radius(c)};
  }
  if (const auto* medium = std::get_if<MediumIndex>(&scatterer_)) {
    if (!medium->contrast_free()) {
      const Vec2 c = medium->support_box().center();
      return {c, 1.05 * medium->support_radius(c)};
    }
  }
  const Vec2 c = measurement_.kind() == MeasurementKind::circle ? measurement_.center() : Vec2{};
  return {c, 0.0};
}

Scene translate_scene(const Scene& scene, Vec2 shift) {
  Scatterer moved = std::visit(
      [&](const auto& s) -> Scatterer {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Obstacle>) {
          Obstacle o = s;
          o.curve = s.curve.translated(shift);
          return o;
        } else if constexpr (std::is_same_v<T, MediumIndex>) {
          return s.translated(shift);
        } else {
          return s;
        }
      },
      scene.scatterer());
  std::optional<Disk> bound;
  if (scene.has_explicit_support_bound()) {
    Disk d = scene.support_bound();
    d.center += shift;
    bound = d;
  }
  return Scene(scene.wavenumber(), std::move(moved), scene.measurement(), scene.directions(), bound);
}

BoundaryCurve builtin_kite(Vec2 center) { return BoundaryCurve::kite(center); }

}  // namespace phaseless
