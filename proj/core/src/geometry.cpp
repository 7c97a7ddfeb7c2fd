#include "phaseless/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "phaseless/errors.hpp"
#include "phaseless/quadrature.hpp"

namespace phaseless {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

BoundaryCurve BoundaryCurve::circle(Vec2 center, double radius) {
  if (!(radius > 0.0)) throw GeometryError("circle radius must be positive");
  return {CurveKind::circle, center, radius, radius};
}

BoundaryCurve BoundaryCurve::ellipse(Vec2 center, double semi_axis_1, double semi_axis_2) {
  if (!(semi_axis_1 > 0.0) || !(semi_axis_2 > 0.0)) {
    throw GeometryError("ellipse semi-axes must be positive");
  }
  return {CurveKind::ellipse, center, semi_axis_1, semi_axis_2};
}

BoundaryCurve BoundaryCurve::kite(Vec2 center) { return {CurveKind::kite, center, 1.0, 1.0}; }

Vec2 BoundaryCurve::point(double t) const {
  switch (kind_) {
    case CurveKind::kite:
      return center_ + Vec2{std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65, 1.5 * std::sin(t)};
    case CurveKind::circle:
    case CurveKind::ellipse:
      break;
  }
  return center_ + Vec2{a_ * std::cos(t), b_ * std::sin(t)};
}

Vec2 BoundaryCurve::derivative(double t) const {
  switch (kind_) {
    case CurveKind::kite:
      return {-std::sin(t) - 1.3 * std::sin(2.0 * t), 1.5 * std::cos(t)};
    case CurveKind::circle:
    case CurveKind::ellipse:
      break;
  }
  return {-a_ * std::sin(t), b_ * std::cos(t)};
}

Vec2 BoundaryCurve::second_derivative(double t) const {
  switch (kind_) {
    case CurveKind::kite:
      return {-std::cos(t) - 2.6 * std::cos(2.0 * t), -1.5 * std::sin(t)};
    case CurveKind::circle:
    case CurveKind::ellipse:
      break;
  }
  return {-a_ * std::cos(t), -b_ * std::sin(t)};
}

Vec2 BoundaryCurve::normal(double t) const {
  const Vec2 d = derivative(t);
  const double s = norm(d);
  return {d.x2 / s, -d.x1 / s};
}

BoundaryCurve BoundaryCurve::translated(Vec2 shift) const {
  BoundaryCurve c = *this;
  c.center_ += shift;
  return c;
}

Box BoundaryCurve::bounding_box() const {
  constexpr int kSamples = 4096;
  Box box{point(0.0), point(0.0)};
  for (int j = 1; j < kSamples; ++j) {
    const Vec2 p = point(kTwoPi * j / kSamples);
    box.lo.x1 = std::min(box.lo.x1, p.x1);
    box.lo.x2 = std::min(box.lo.x2, p.x2);
    box.hi.x1 = std::max(box.hi.x1, p.x1);
    box.hi.x2 = std::max(box.hi.x2, p.x2);
  }
  return box;
}

double BoundaryCurve::enclosing_radius(Vec2 about) const {
  constexpr int kSamples = 4096;
  double r = 0.0;
  for (int j = 0; j < kSamples; ++j) r = std::max(r, distance(point(kTwoPi * j / kSamples), about));
  return r;
}

double BoundaryCurve::closest_parameter(Vec2 x) const {
  constexpr int kSamples = 512;
  int best = 0;
  double best_d = distance(point(0.0), x);
  for (int j = 1; j < kSamples; ++j) {
    const double d = distance(point(kTwoPi * j / kSamples), x);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  double t = kTwoPi * best / kSamples;
  for (int iter = 0; iter < 30; ++iter) {
    const Vec2 diff = point(t) - x;
    const Vec2 d1 = derivative(t);
    const double f = dot(diff, d1);
    const double fp = dot(d1, d1) + dot(diff, second_derivative(t));
    if (fp <= 0.0) break;
    double step = f / fp;
    step = std::clamp(step, -kTwoPi / kSamples, kTwoPi / kSamples);
    t -= step;
    if (std::fabs(step) < 1e-15) break;
  }
  return wrap_angle(t);
}

bool BoundaryCurve::contains(Vec2 x) const {
  const double t = closest_parameter(x);
  const Vec2 offset = x - point(t);
  if (norm(offset) < 1e-12) return true;
  return dot(offset, normal(t)) < 0.0;
}

std::vector<Vec2> sample_curve(const BoundaryCurve& curve, int count) {
  std::vector<Vec2> pts(count);
  for (int j = 0; j < count; ++j) pts[j] = curve.point(kTwoPi * j / count);
  return pts;
}

namespace {

// Area of {|z| < r, z1 ≤ X, z2 ≤ Y} for a disk centered at the origin.
double quadrant_area(double r, double X, double Y) {
  if (X <= -r || Y <= -r) return 0.0;
  const double theta_hi = std::asin(std::clamp(X / r, -1.0, 1.0));
  std::vector<double> breaks{-kPi / 2.0, theta_hi};
  if (std::fabs(Y) < r) {
    const double kink = std::acos(std::fabs(Y) / r);
    for (double b : {-kink, kink}) {
      if (b > -kPi / 2.0 && b < theta_hi) breaks.push_back(b);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  auto integrand = [&](double th) {
    const double s = r * std::cos(th);
    const double len = std::clamp(Y, -s, s) + s;
    return len * s;
  };
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    area += integrate_gauss(integrand, breaks[i], breaks[i + 1], 20);
  }
  return area;
}

}  // namespace

double disk_box_overlap(const Disk& disk, const Box& box) {
  const double r = disk.radius;
  const Vec2 lo = box.lo - disk.center;
  const Vec2 hi = box.hi - disk.center;
  if (lo.x1 >= r || lo.x2 >= r || hi.x1 <= -r || hi.x2 <= -r) return 0.0;
  const double area = quadrant_area(r, hi.x1, hi.x2) - quadrant_area(r, lo.x1, hi.x2) -
                      quadrant_area(r, hi.x1, lo.x2) + quadrant_area(r, lo.x1, lo.x2);
  return std::max(area, 0.0);
}

}  // namespace phaseless
