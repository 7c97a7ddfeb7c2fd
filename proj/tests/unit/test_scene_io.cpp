#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "helpers.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/scene_io.hpp"

using namespace phaseless;
namespace fs = std::filesystem;

namespace {

const char* kCircle = R"({
  "wavenumber": 2.0,
  "scatterer": {"type": "circle", "params": {"center": [0.5, 0], "radius": 1.0, "bc": "sound_soft"}},
  "measurement": {"kind": "circle", "params": {"center": [0, 0], "radius": 6.0, "count": 16}},
  "directions": {"count": 32, "d0_angle": 1.0}
})";

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / "phaseless_scene_io";
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("scene_io") {

TEST_CASE("parse a circle scene") {
  const Scene s = parse_scene(kCircle);
  CHECK(s.wavenumber() == 2.0);
  const auto& o = std::get<Obstacle>(s.scatterer());
  CHECK(o.curve.kind() == CurveKind::circle);
  CHECK(o.curve.center() == Vec2{0.5, 0.0});
  CHECK(o.nodes == 128);
  CHECK(s.measurement().count() == 16);
  CHECK(s.directions() == DirectionGrid{32, 1.0});
}

TEST_CASE("sound-hard maps to zero impedance") {
  std::string text = kCircle;
  text.replace(text.find("sound_soft"), 10, "sound_hard");
  const auto& o = std::get<Obstacle>(parse_scene(text).scatterer());
  CHECK(o.bc == BoundaryCondition::impedance);
  CHECK(o.eta(0.3) == Complex(0.0, 0.0));
}

TEST_CASE("canonical JSON round trips") {
  for (const char* name : {"circle.json", "kite.json", "impedance_ellipse.json", "medium_disk.json", "empty.json",
                           "small_circle.json"}) {
    CAPTURE(name);
    const Scene s = load_scene(fs::path(PHASELESS_DATA_DIR) / "scenes" / name);
    const Scene back = parse_scene(scene_to_json(s));
    CHECK(back == s);
    CHECK(scene_hash(back) == scene_hash(s));
  }
}

TEST_CASE("scene hash separates scenes") {
  const Scene a = parse_scene(kCircle);
  const Scene b = translate_scene(a, {0.1, 0.0});
  CHECK(scene_hash(a) != scene_hash(b));
}

TEST_CASE("line-segment measurement round trip") {
  const auto m = MeasurementSet::line_segment(3.0, -2.0, 2.0, 9);
  CHECK(parse_measurement(measurement_to_json(m)) == m);
}

TEST_CASE("medium raster round trip") {
  const auto m = MediumIndex::disk({0.1, 0}, 0.5, Complex(1.3, 0.01), 12, {}, 1.0);
  const fs::path p = temp_dir() / "raster.csv";
  write_medium_raster(m, p);
  CHECK(load_medium_raster(p, 12, {}, 1.0) == m);
  CHECK_THROWS_AS(load_medium_raster(p, 13, {}, 1.0), ParseError);
}

TEST_CASE("raster scenes resolve relative to the scene file") {
  const fs::path dir = temp_dir();
  write_medium_raster(MediumIndex::disk({}, 0.5, 1.2, 8, {}, 1.0), dir / "n.csv");
  const std::string text = R"({"wavenumber": 1, "scatterer": {"type": "medium_raster", "params":
    {"grid": {"cells": 8, "center": [0, 0], "half_width": 1.0}, "file": "n.csv"}},
    "measurement": {"kind": "circle", "params": {"center": [0, 0], "radius": 3, "count": 8}}})";
  std::ofstream(dir / "scene.json") << text;
  const Scene s = load_scene(dir / "scene.json");
  CHECK(std::get<MediumIndex>(s.scatterer()).cells_per_side() == 8);
}

TEST_CASE("malformed scenes") {
  CHECK_THROWS_AS(parse_scene("{"), ParseError);
  CHECK_THROWS_AS(parse_scene(R"({"wavenumber": 1})"), ParseError);
  std::string bad_type = kCircle;
  bad_type.replace(bad_type.find("\"circle\""), 8, "\"blob\"");
  CHECK_THROWS_AS(parse_scene(bad_type), ParseError);
  std::string bad_bc = kCircle;
  bad_bc.replace(bad_bc.find("sound_soft"), 10, "rubbery");
  CHECK_THROWS_AS(parse_scene(bad_bc), ParseError);
  std::string bad_number = kCircle;
  bad_number.replace(bad_number.find("2.0"), 3, "\"x\"");
  CHECK_THROWS_AS(parse_scene(bad_number), ParseError);
  CHECK_THROWS_AS(load_scene("/nonexistent/scene.json"), ParseError);
}

TEST_CASE("invariant violations are geometry errors") {
  std::string small = kCircle;
  small.replace(small.find("6.0"), 3, "1.2");
  CHECK_THROWS_AS(parse_scene(small), GeometryError);
}

}  // TEST_SUITE
