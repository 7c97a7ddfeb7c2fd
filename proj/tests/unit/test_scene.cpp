#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/scene.hpp"

using namespace phaseless;

namespace {

double orient(Vec2 a, Vec2 b, Vec2 c) { return (b.x1 - a.x1) * (c.x2 - a.x2) - (b.x2 - a.x2) * (c.x1 - a.x1); }

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return o1 * o2 < 0.0 && o3 * o4 < 0.0;
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("plane wave at the origin is one") {
  const auto f = IncidentField::plane(3.0, 0.7);
  CHECK(std::abs(eval_incident(f, {0.0, 0.0}) - Complex(1.0, 0.0)) == 0.0);
}

TEST_CASE("plane wave is unimodular") {
  const auto f = IncidentField::plane(5.0, 1.1);
  CHECK(std::fabs(std::abs(eval_incident(f, {3.7, -2.1})) - 1.0) <= 1e-14);
}

TEST_CASE("superposition of a direction with itself doubles the plane wave") {
  const Vec2 x{0.4, -1.3};
  const auto s = IncidentField::superposition(2.0, 0.9, 0.9);
  const auto p = IncidentField::plane(2.0, 0.9);
  CHECK(std::abs(eval_incident(s, x) - 2.0 * eval_incident(p, x)) <= 1e-15);
}

TEST_CASE("point source") {
  const auto f = IncidentField::point_source(1.0, {1.0, 1.0});
  CHECK_THROWS_AS(eval_incident(f, {1.0, 1.0}), SingularityError);
  const Complex v = eval_incident(f, {2.0, 1.0});
  CHECK(std::abs(v - 0.25 * kI * Complex(std::cyl_bessel_j(0.0, 1.0), std::cyl_neumann(0.0, 1.0))) <= 1e-13);
}

TEST_CASE("incident gradient agrees with finite differences") {
  const Vec2 x{0.3, 0.8};
  const double h = 1e-6;
  for (const auto& f : {IncidentField::plane(2.0, 0.4), IncidentField::superposition(2.0, 0.4, 4.0),
                        IncidentField::point_source(2.0, {-1.0, 0.5})}) {
    const auto [g1, g2] = eval_incident_gradient(f, x);
    const Complex d1 = (eval_incident(f, x + Vec2{h, 0}) - eval_incident(f, x - Vec2{h, 0})) / (2 * h);
    const Complex d2 = (eval_incident(f, x + Vec2{0, h}) - eval_incident(f, x - Vec2{0, h})) / (2 * h);
    CHECK(std::abs(g1 - d1) <= 1e-7);
    CHECK(std::abs(g2 - d2) <= 1e-7);
  }
}

TEST_CASE("directions wrap into [0, 2pi)") {
  CHECK(Direction(-0.5 * kPi).angle() == doctest::Approx(1.5 * kPi));
  CHECK(Direction(kTwoPi).angle() == 0.0);
}

TEST_CASE("kite parametrization") {
  const BoundaryCurve kite = builtin_kite({0.5, -2.0});
  const Vec2 p0 = kite.point(0.0);
  const Vec2 pi = kite.point(kPi);
  CHECK(p0.x1 == doctest::Approx(1.5));
  CHECK(p0.x2 == doctest::Approx(-2.0));
  CHECK(pi.x1 == doctest::Approx(-0.5));
  CHECK(pi.x2 == doctest::Approx(-2.0));
}

TEST_CASE("kite is a simple curve") {
  const auto pts = sample_curve(builtin_kite({}), 2048);
  const std::size_t n = pts.size();
  int crossings = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) ++crossings;
    }
  }
  CHECK(crossings == 0);
}

TEST_CASE("curve derivatives agree with finite differences") {
  const double h = 1e-5;
  for (const auto& c : {builtin_kite({0.2, 0.1}), BoundaryCurve::ellipse({1, 0}, 1.2, 0.7),
                        BoundaryCurve::circle({0, 0}, 2.0)}) {
    for (double t : {0.0, 0.9, 2.5, 5.1}) {
      const Vec2 fd = (1.0 / (2 * h)) * (c.point(t + h) - c.point(t - h));
      const Vec2 fdd = (1.0 / (2 * h)) * (c.derivative(t + h) - c.derivative(t - h));
      CHECK(norm(fd - c.derivative(t)) <= 1e-8);
      CHECK(norm(fdd - c.second_derivative(t)) <= 1e-8);
      CHECK(std::fabs(dot(c.normal(t), c.derivative(t))) <= 1e-12);
    }
  }
}

TEST_CASE("curves are counter-clockwise with outward normals") {
  const BoundaryCurve kite = builtin_kite({});
  const Vec2 p = kite.point(0.0);
  CHECK(!kite.contains(p + 0.01 * kite.normal(0.0)));
  CHECK(kite.contains(p - 0.01 * kite.normal(0.0)));
  CHECK(kite.contains({0.0, 0.0}));
  CHECK(!kite.contains({1.5, 0.0}));
}

TEST_CASE("translate_scene") {
  const Scene s = testing::probe_scene(testing::circle_obstacle(1.0), 2.0, 4.0);
  CHECK(translate_scene(s, {0.0, 0.0}) == s);
  const Scene moved = translate_scene(s, {1.0, 0.0});
  const auto& o = std::get<Obstacle>(moved.scatterer());
  CHECK(o.curve.center() == Vec2{1.0, 0.0});
  CHECK(moved.measurement() == s.measurement());
  CHECK(translate_scene(moved, {-1.0, 0.0}) == s);
  CHECK_THROWS_AS(translate_scene(s, {3.5, 0.0}), GeometryError);
}

TEST_CASE("translating a medium moves its grid") {
  const auto m = MediumIndex::disk({}, 0.5, 1.2, 16, {}, 1.0);
  const Scene s(1.0, m, MeasurementSet::circle({}, 5.0, 8));
  const Scene moved = translate_scene(s, {0.5, 0.25});
  CHECK(std::get<MediumIndex>(moved.scatterer()).center() == Vec2{0.5, 0.25});
  CHECK(translate_scene(moved, {-0.5, -0.25}) == s);
}

TEST_CASE("measurement invariants") {
  CHECK_THROWS_AS(Scene(1.0, testing::circle_obstacle(1.0), MeasurementSet::circle({}, 0.9, 8)), GeometryError);
  CHECK_THROWS_AS(Scene(1.0, testing::circle_obstacle(1.0), MeasurementSet::line_segment(0.5, -2, 2, 8)),
                  GeometryError);
  CHECK_NOTHROW(Scene(1.0, testing::circle_obstacle(1.0), MeasurementSet::line_segment(1.5, -2, 2, 8)));
  CHECK_THROWS_AS(MeasurementSet::circle({}, 1.0, 2), GeometryError);
  CHECK_THROWS_AS(MeasurementSet::line_segment(1.0, 2, -2, 8), GeometryError);
}

TEST_CASE("obstacle and medium validation") {
  Obstacle odd = testing::circle_obstacle(1.0, {}, 63);
  CHECK_THROWS_AS(odd.validate(), GeometryError);
  Obstacle lossy = testing::hard_circle(1.0);
  lossy.eta.mean = Complex(1.0, -0.5);
  CHECK_THROWS_AS(lossy.validate(), GeometryError);
  std::vector<Complex> vals(16, 1.0);
  vals[0] = 2.0;
  CHECK_THROWS_AS(MediumIndex(4, {}, 1.0, vals), GeometryError);
  CHECK_THROWS_AS(Scene(-1.0, NoScatterer{}, MeasurementSet::circle({}, 1.0, 8)), GeometryError);
}

TEST_CASE("disk medium uses area weighting on cut cells") {
  const auto m = MediumIndex::disk({}, 0.6, 1.5, 32, {}, 1.0);
  double area = 0.0;
  const double h = m.cell_size();
  for (const Complex v : m.values()) area += (v.real() - 1.0) / 0.5 * h * h;
  CHECK(area == doctest::Approx(kPi * 0.36).epsilon(1e-10));
}

TEST_CASE("support bound") {
  const Scene s = testing::probe_scene(testing::circle_obstacle(1.0, {0.5, 0.0}), 1.0, 4.0);
  const Disk b = s.support_bound();
  CHECK(b.center.x1 == doctest::Approx(0.5));
  CHECK(b.radius == doctest::Approx(1.05));
  const Scene e(1.0, NoScatterer{}, MeasurementSet::circle({1, 1}, 3.0, 8));
  CHECK(e.support_bound().radius == 0.0);
  CHECK_THROWS_AS(Scene(1.0, testing::circle_obstacle(1.0), MeasurementSet::circle({}, 4.0, 8), {},
                        Disk{{0, 0}, 0.5}),
                  GeometryError);
}

TEST_CASE("direction grid") {
  const auto a = DirectionGrid{8, 0.0}.angles();
  REQUIRE(a.size() == 8);
  CHECK(a[2] == doctest::Approx(kPi / 2));
}

}  // TEST_SUITE
