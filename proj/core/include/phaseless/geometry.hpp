#pragma once

#include <vector>

#include "phaseless/types.hpp"

namespace phaseless {

struct Box {
  Vec2 lo;
  Vec2 hi;

  double width() const { return hi.x1 - lo.x1; }
  double height() const { return hi.x2 - lo.x2; }
  Vec2 center() const { return 0.5 * (lo + hi); }
  bool operator==(const Box&) const = default;
};

/// Disk used as an a-priori bound on the scatterer location.
struct Disk {
  Vec2 center;
  double radius = 0.0;
  bool operator==(const Disk&) const = default;
};

enum class CurveKind { circle, kite, ellipse };

/// Smooth, simple, counter-clockwise 2π-periodic boundary curve p(t).
///
/// circle:  center + r (cos t, sin t)
/// ellipse: center + (a cos t, b sin t)
/// kite:    center + (cos t + 0.65 cos 2t − 0.65, 1.5 sin t)
class BoundaryCurve {
 public:
  static BoundaryCurve circle(Vec2 center, double radius);
  static BoundaryCurve ellipse(Vec2 center, double semi_axis_1, double semi_axis_2);
  static BoundaryCurve kite(Vec2 center);

  CurveKind kind() const { return kind_; }
  Vec2 center() const { return center_; }
  /// Radius (circle) or first semi-axis (ellipse); unused for the kite.
  double a() const { return a_; }
  /// Second semi-axis (ellipse); equals a() for circles.
  double b() const { return b_; }

  Vec2 point(double t) const;
  Vec2 derivative(double t) const;
  Vec2 second_derivative(double t) const;

  /// Outward unit normal at p(t).
  Vec2 normal(double t) const;

  BoundaryCurve translated(Vec2 shift) const;

  /// Tight axis-aligned bounding box, from dense sampling.
  Box bounding_box() const;

  /// max_t |p(t) − about|.
  double enclosing_radius(Vec2 about) const;

  /// Parameter of the boundary point closest to x.
  double closest_parameter(Vec2 x) const;

  /// Strict interior test. Points within 1e-12 of the curve count as inside.
  bool contains(Vec2 x) const;

  bool operator==(const BoundaryCurve&) const = default;

 private:
  BoundaryCurve(CurveKind kind, Vec2 center, double a, double b)
      : kind_(kind), center_(center), a_(a), b_(b) {}

  CurveKind kind_;
  Vec2 center_;
  double a_;
  double b_;
};

/// `count` equispaced samples of the curve, t_j = 2πj/count.
std::vector<Vec2> sample_curve(const BoundaryCurve& curve, int count);

/// Area of the intersection of a disk with an axis-aligned box.
double disk_box_overlap(const Disk& disk, const Box& box);

}  // namespace phaseless
