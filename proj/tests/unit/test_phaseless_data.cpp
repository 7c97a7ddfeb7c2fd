#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/phaseless_data.hpp"

using namespace phaseless;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "phaseless_data_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p);
  for (const auto& l : lines) out << l << '\n';
}

Scene empty_scene() { return Scene(2.0, NoScatterer{}, MeasurementSet::circle({0.3, 0}, 3.0, 16), DirectionGrid{8, 1.0}); }

int parse_error_line(const fs::path& p) {
  try {
    read_dataset(p);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_SUITE("phaseless_data") {

TEST_CASE("empty scene moduli are closed form") {
  const Scene s = empty_scene();
  const auto data = synthesize(s);
  REQUIRE(data.points() == 16);
  REQUIRE(data.directions() == 9);
  const Vec2 d0 = unit_vector(1.0);
  for (int m = 0; m < data.points(); ++m) {
    const Vec2 x = s.measurement().points()[m];
    for (int j = 0; j < data.directions(); ++j) {
      const Vec2 d = unit_vector(data.meta.directions[j]);
      CHECK(std::fabs(data.singles(m, j) - 1.0) <= 1e-14);
      CHECK(std::fabs(data.pairs(m, j) - 2.0 * std::fabs(std::cos(0.5 * 2.0 * dot(x, d - d0)))) <= 1e-13);
    }
  }
}

TEST_CASE("reference direction is inserted when off the grid") {
  int idx = -1;
  const auto a = direction_list(DirectionGrid{8, 1.0}, 1.0, idx);
  REQUIRE(a.size() == 9);
  CHECK(idx == 2);
  CHECK(a[idx] == 1.0);
  const auto b = direction_list(DirectionGrid{8, 0.0}, kPi / 2, idx);
  CHECK(b.size() == 8);
  CHECK(idx == 2);
}

TEST_CASE("pair column at the reference direction doubles the singles") {
  const Scene s = testing::probe_scene(testing::kite_obstacle(64), 2.0, 4.0);
  const auto data = synthesize(s, DirectionGrid{12, 0.0}, 0.5);
  const int j0 = data.meta.d0_index;
  CHECK((data.pairs.col(j0) - 2.0 * data.singles.col(j0)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("triangle bounds") {
  const Scene s = testing::probe_scene(testing::kite_obstacle(64), 2.0, 4.0);
  const auto data = synthesize(s, DirectionGrid{12, 0.0}, 0.5);
  const Eigen::VectorXd r0 = data.singles_d0();
  for (int m = 0; m < data.points(); ++m) {
    for (int j = 0; j < data.directions(); ++j) {
      CHECK(data.pairs(m, j) >= std::fabs(data.singles(m, j) - r0[m]) - 1e-12);
      CHECK(data.pairs(m, j) <= data.singles(m, j) + r0[m] + 1e-12);
    }
  }
}

TEST_CASE("noise is multiplicative, bounded and seeded") {
  const Scene s = empty_scene();
  const auto clean = synthesize(s);
  const auto a = synthesize(s, 0.05, 11);
  const auto b = synthesize(s, 0.05, 11);
  const auto c = synthesize(s, 0.05, 12);
  CHECK(a.singles == b.singles);
  CHECK(a.pairs == b.pairs);
  CHECK(a.singles != c.singles);
  const Eigen::ArrayXXd ratio = a.singles.array() / clean.singles.array();
  CHECK(ratio.minCoeff() >= 0.95);
  CHECK(ratio.maxCoeff() <= 1.05);
  CHECK_THROWS_AS(synthesize(s, 1.0, 0), DomainError);
  CHECK_THROWS_AS(synthesize(s, -0.1, 0), DomainError);
}

TEST_CASE("write then read is exact") {
  const Scene s(2.0, testing::circle_obstacle(1.0, {}, 64), MeasurementSet::circle({}, 4.0, 16), DirectionGrid{8, 0.3});
  const auto data = synthesize(s, DirectionGrid{8, 0.0}, 0.0, 0.01, 5);
  REQUIRE(data.points() == 16);
  REQUIRE(data.directions() == 8);
  const fs::path p = temp_file("roundtrip.csv");
  write_dataset(data, p);
  const auto back = read_dataset(p);
  CHECK(back.singles == data.singles);
  CHECK(back.pairs == data.pairs);
  CHECK(back.meta.directions == data.meta.directions);
  CHECK(back.meta.d0_index == data.meta.d0_index);
  CHECK(back.meta.k == data.meta.k);
  CHECK(back.meta.noise == data.meta.noise);
  CHECK(back.meta.seed == data.meta.seed);
  CHECK(back.meta.measurement == data.meta.measurement);
}

TEST_CASE("line segment datasets round trip") {
  const Scene s(1.0, testing::circle_obstacle(0.5, {}, 64), MeasurementSet::line_segment(2.0, -3.0, 3.0, 7),
                DirectionGrid{5, 4.0});
  const auto data = synthesize(s);
  const fs::path p = temp_file("segment.csv");
  write_dataset(data, p);
  CHECK(read_dataset(p).pairs == data.pairs);
}

TEST_CASE("malformed dataset files") {
  const auto data = synthesize(empty_scene());
  const fs::path good = temp_file("good.csv");
  write_dataset(data, good);
  const auto lines = read_lines(good);
  const fs::path bad = temp_file("bad.csv");

  SUBCASE("negative modulus") {
    auto l = lines;
    const auto comma = l[5].rfind(',');
    l[5] = l[5].substr(0, comma) + ",-0.5";
    write_lines(bad, l);
    CHECK(parse_error_line(bad) == 6);
  }
  SUBCASE("header declares a different shape") {
    auto l = lines;
    const auto pos = l[0].find("\"points\":16");
    REQUIRE(pos != std::string::npos);
    l[0].replace(pos, 11, "\"points\":15");
    write_lines(bad, l);
    CHECK(parse_error_line(bad) == 1);
  }
  SUBCASE("nonpositive wavenumber") {
    auto l = lines;
    const auto pos = l[0].find("\"k\":2.0");
    REQUIRE(pos != std::string::npos);
    l[0].replace(pos, 7, "\"k\":0.0");
    write_lines(bad, l);
    CHECK(parse_error_line(bad) == 1);
  }
  SUBCASE("truncated file") {
    auto l = lines;
    l.pop_back();
    write_lines(bad, l);
    CHECK(parse_error_line(bad) > 0);
  }
  SUBCASE("missing header") {
    auto l = lines;
    l.erase(l.begin());
    write_lines(bad, l);
    CHECK(parse_error_line(bad) == 1);
  }
  SUBCASE("non-numeric entry") {
    auto l = lines;
    l[3] = "a,b,c,d,e";
    write_lines(bad, l);
    CHECK(parse_error_line(bad) == 4);
  }
}

}  // TEST_SUITE
