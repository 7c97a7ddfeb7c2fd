#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/farfield_imaging.hpp"
#include "phaseless/forward.hpp"
#include "phaseless/forward_obstacle.hpp"
#include "phaseless/special_functions.hpp"

using namespace phaseless;

namespace {

std::vector<double> equispaced(int n) {
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[i] = kTwoPi * i / n;
  return a;
}

bool within_one_cell(Vec2 p, Vec2 target, double cell) {
  return std::fabs(p.x1 - target.x1) <= cell && std::fabs(p.x2 - target.x2) <= cell;
}

Scene small_scatterer(Vec2 center) {
  return Scene(2.0, testing::circle_obstacle(0.1 * kPi, center, 64), MeasurementSet::circle({}, 15.0, 128),
               DirectionGrid{192, 1.5 * kPi}, Disk{{0, 0}, 1.5});
}

}  // namespace

TEST_SUITE("farfield_imaging") {

TEST_CASE("single monopole mode has a constant far field") {
  RadiatingExpansion e{1.3, {0, 0}, 1.0, 0, {Complex(1.0, 0.0)}};
  const auto f = expansion_to_farfield(e, equispaced(8));
  for (const Complex v : f.values) CHECK(std::abs(v - special::mode_farfield_factor(0, 1.3)) <= 1e-15);
  CHECK(std::abs(special::mode_farfield_factor(0, 1.3) - std::sqrt(2.0 / (kPi * 1.3)) * std::exp(-kI * (kPi / 4))) <=
        1e-15);
}

TEST_CASE("expansion far field agrees with asymptotic extraction") {
  RadiatingExpansion e{1.0, {0.3, -0.2}, 1.0, 3, {}};
  for (int n = -3; n <= 3; ++n) e.coefficients.push_back(Complex(0.5 + 0.1 * n, 0.2 * n * n));
  const std::vector<double> angles{0.1, 1.9, 3.3, 5.0};
  const auto f = expansion_to_farfield(e, angles);
  const double r = 9999.0;
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const Vec2 x = r * unit_vector(angles[a]);
    const Complex extracted = std::sqrt(r) * std::exp(-kI * r) * e.evaluate(x);
    CHECK(std::abs(extracted - f.values[a]) <= 1e-3 * std::abs(f.values[a]));
  }
}

TEST_CASE("far field is linear in the coefficients") {
  RadiatingExpansion a{1.0, {}, 1.0, 2, {1.0, 2.0, kI, -1.0, 0.5}};
  RadiatingExpansion b{1.0, {}, 1.0, 2, {kI, 0.0, 3.0, 1.0, -kI}};
  RadiatingExpansion sum = a;
  for (std::size_t i = 0; i < sum.coefficients.size(); ++i) sum.coefficients[i] = 2.0 * a.coefficients[i] + b.coefficients[i];
  const auto angles = equispaced(16);
  const auto fa = expansion_to_farfield(a, angles);
  const auto fb = expansion_to_farfield(b, angles);
  const auto fs = expansion_to_farfield(sum, angles);
  for (std::size_t i = 0; i < angles.size(); ++i) CHECK(std::abs(fs.values[i] - 2.0 * fa.values[i] - fb.values[i]) <= 1e-13);
}

TEST_CASE("solver far field equals the far field of the fitted near field") {
  const Scene s = testing::retrieval_scene(testing::kite_obstacle());
  const ObstacleSolver solver(std::get<Obstacle>(s.scatterer()), 2.0);
  const auto d = solver.solve(IncidentField::plane(2.0, 0.8));
  const auto& pts = s.measurement().points();
  const auto near = solver.scattered(d, pts);
  const RadiatingExpansion e = fit_expansion(2.0, s.support_bound(), pts, near);
  const auto angles = equispaced(32);
  const auto fitted = expansion_to_farfield(e, angles);
  const auto direct = solver.farfield(d, angles);
  CHECK(testing::max_diff(fitted.values, direct) <= 1e-6 * testing::max_abs(direct));
}

TEST_CASE("translation invariance of single-wave moduli") {
  const Scene kite(2.0, testing::kite_obstacle(), MeasurementSet::circle({}, 15.0, 16), DirectionGrid{64, 1.5 * kPi});
  const InvarianceReport r = translation_invariance_report(kite, {0.5, 0.0});
  CHECK(r.single_discrepancy <= 1e-8);
  CHECK(r.shift_law_error <= 1e-8);
  CHECK(r.superposition_discrepancy >= 1e-2);
  CHECK(r.observations == 64);
  const InvarianceReport zero = translation_invariance_report(kite, {0.0, 0.0});
  CHECK(zero.single_discrepancy <= 1e-12);
  CHECK(zero.superposition_discrepancy <= 1e-12);
  CHECK(r.to_json().find("\"superposition_discrepancy\"") != std::string::npos);
}

TEST_CASE("search grid geometry") {
  const SearchGrid g = SearchGrid::around({1.0, 2.0}, 0.5, 10);
  CHECK(g.side == doctest::Approx(3.0));
  CHECK(g.cell_size() == doctest::Approx(0.3));
  CHECK(g.cell_center(0, 0).x1 == doctest::Approx(-0.35));
  CHECK(g.cell_center(9, 9).x2 == doctest::Approx(3.35));
}

TEST_CASE("backpropagation of exact far fields locates a small scatterer") {
  const Scene s = small_scatterer({0, 0});
  const auto angles = equispaced(128);
  const auto dirs = equispaced(32);
  const Eigen::MatrixXcd f = ForwardModel(s).farfield(plane_waves(2.0, dirs), angles);
  const SearchGrid grid = SearchGrid::around({0, 0}, 0.2 * kPi, 64);
  const IndicatorMap map = backpropagate(f, angles, 2.0, grid);
  CHECK(within_one_cell(map.argmax_point(), {0, 0}, grid.cell_size()));
  CHECK_THROWS_AS(backpropagate(f, dirs, 2.0, grid), DomainError);
}

TEST_CASE("retrieved superposition data track a translation; moduli alone do not") {
  const auto angles = equispaced(128);
  const SearchGrid grid = SearchGrid::around({0, 0}, 0.2 * kPi);
  for (const Vec2 c : {Vec2{0, 0}, Vec2{1, 0}}) {
    CAPTURE(c.x1);
    const Scene s = small_scatterer(c);
    const RetrievalResult r = retrieve(synthesize(s), s);
    const FieldTable t{r.k, r.support_bound, r.points, r.directions, r.total, r.scattered};
    const IndicatorMap map = backpropagate(farfields_from_fields(t, angles), angles, 2.0, grid);
    CHECK(within_one_cell(map.argmax_point(), c, grid.cell_size()));

    const Eigen::MatrixXcd moduli =
        ForwardModel(s).farfield(plane_waves(2.0, r.directions), angles).cwiseAbs().cast<Complex>();
    const IndicatorMap control = backpropagate(moduli, angles, 2.0, grid);
    if (c.x1 != 0.0) CHECK(!within_one_cell(control.argmax_point(), c, grid.cell_size()));
  }
}

TEST_CASE("indicator file layout") {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Ones(8, 2);
  const auto angles = equispaced(8);
  const IndicatorMap map = backpropagate(f, angles, 1.0, SearchGrid{{0, 0}, 2.0, 4});
  const auto p = std::filesystem::temp_directory_path() / "phaseless_indicator.csv";
  write_indicator(map, p);
  std::ifstream in(p);
  std::string header, columns, row;
  std::getline(in, header);
  std::getline(in, columns);
  CHECK(header.rfind("# {", 0) == 0);
  CHECK(header.find("\"argmax\"") != std::string::npos);
  CHECK(columns == "x1,x2,value");
  int rows = 0;
  while (std::getline(in, row)) ++rows;
  CHECK(rows == 16);
}

}  // TEST_SUITE
