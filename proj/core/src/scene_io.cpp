#include "phaseless/scene_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "csv.hpp"
#include "json_io.hpp"
#include "phaseless/errors.hpp"

namespace phaseless {
namespace detail {

Json vec_json(Vec2 v) { return Json::array({v.x1, v.x2}); }
Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double get_double(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

int get_int(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

Vec2 get_vec(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ParseError(std::string("field '") + key + "' must be a pair [x1, x2]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Complex as_complex(const Json& v, const char* what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ParseError(std::string(what) + " must be a number or [re, im]");
}

Json measurement_json(const MeasurementSet& m) {
  Json j;
  if (m.kind() == MeasurementKind::circle) {
    j["kind"] = "circle";
    j["params"] = {{"center", vec_json(m.center())}, {"radius", m.radius()}, {"count", m.count()}};
  } else {
    j["kind"] = "line_segment";
    j["params"] = {{"height", m.height()},
                   {"x1_begin", m.x1_begin()},
                   {"x1_end", m.x1_end()},
                   {"count", m.count()}};
  }
  return j;
}

MeasurementSet measurement_from_json(const Json& j) {
  const Json& kind = require(j, "kind");
  const Json& p = require(j, "params");
  if (kind == "circle") {
    return MeasurementSet::circle(get_vec(p, "center"), get_double(p, "radius"), get_int(p, "count"));
  }
  if (kind == "line_segment") {
    return MeasurementSet::line_segment(get_double(p, "height"), get_double(p, "x1_begin"),
                                        get_double(p, "x1_end"), get_int(p, "count"));
  }
  throw ParseError("unknown measurement kind " + kind.dump());
}

namespace {

Json obstacle_json(const Obstacle& o) {
  Json j;
  Json p;
  const BoundaryCurve& c = o.curve;
  switch (c.kind()) {
    case CurveKind::circle:
      j["type"] = "circle";
      p["center"] = vec_json(c.center());
      p["radius"] = c.a();
      break;
    case CurveKind::ellipse:
      j["type"] = "ellipse";
      p["center"] = vec_json(c.center());
      p["semi_axes"] = Json::array({c.a(), c.b()});
      break;
    case CurveKind::kite:
      j["type"] = "kite";
      p["center"] = vec_json(c.center());
      break;
  }
  if (o.bc == BoundaryCondition::sound_soft) {
    p["bc"] = "sound_soft";
  } else {
    p["bc"] = "impedance";
    Json terms = Json::array();
    for (const auto& [m, v] : o.eta.cos_terms) terms.push_back(Json::array({m, v.real(), v.imag()}));
    p["eta"] = {{"mean", complex_json(o.eta.mean)}, {"cos_terms", terms}};
  }
  p["nodes"] = o.nodes;
  j["params"] = p;
  return j;
}

ImpedanceProfile parse_eta(const Json& v) {
  ImpedanceProfile eta;
  if (v.is_object()) {
    eta.mean = as_complex(require(v, "mean"), "eta.mean");
    if (v.contains("cos_terms")) {
      for (const Json& t : v.at("cos_terms")) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer()) {
          throw ParseError("eta.cos_terms entries must be [m, re, im]");
        }
        eta.cos_terms.emplace_back(t[0].get<int>(), Complex(t[1].get<double>(), t[2].get<double>()));
      }
    }
    return eta;
  }
  eta.mean = as_complex(v, "eta");
  return eta;
}

Obstacle parse_obstacle(const std::string& type, const Json& p) {
  Obstacle o{BoundaryCurve::kite({}), BoundaryCondition::sound_soft, {}, 128};
  const Vec2 center = p.contains("center") ? get_vec(p, "center") : Vec2{};
  if (type == "circle") {
    o.curve = BoundaryCurve::circle(center, get_double(p, "radius"));
  } else if (type == "ellipse") {
    const Json& ax = require(p, "semi_axes");
    if (!ax.is_array() || ax.size() != 2) throw ParseError("semi_axes must be [a, b]");
    o.curve = BoundaryCurve::ellipse(center, ax[0].get<double>(), ax[1].get<double>());
  } else {
    o.curve = BoundaryCurve::kite(center);
  }
  const std::string bc = p.contains("bc") ? p.at("bc").get<std::string>() : "sound_soft";
  if (bc == "sound_soft") {
    o.bc = BoundaryCondition::sound_soft;
  } else if (bc == "sound_hard") {
    o.bc = BoundaryCondition::impedance;
  } else if (bc == "impedance") {
    o.bc = BoundaryCondition::impedance;
    o.eta = parse_eta(require(p, "eta"));
  } else {
    throw ParseError("unknown boundary condition '" + bc + "'");
  }
  if (p.contains("nodes")) o.nodes = get_int(p, "nodes");
  return o;
}

MediumIndex parse_medium(const std::string& type, const Json& p, const std::filesystem::path& base) {
  const Json& g = require(p, "grid");
  const int cells = get_int(g, "cells");
  const Vec2 gc = g.contains("center") ? get_vec(g, "center") : Vec2{};
  const double L = get_double(g, "half_width");
  if (type == "medium_disk") {
    return MediumIndex::disk(get_vec(p, "center"), get_double(p, "radius"),
                             as_complex(require(p, "index"), "index"), cells, gc, L);
  }
  if (type == "medium_raster") {
    return load_medium_raster(base / require(p, "file").get<std::string>(), cells, gc, L);
  }
  const Json& vals = require(p, "values");
  if (!vals.is_array()) throw ParseError("medium values must be a list of [re, im] pairs");
  std::vector<Complex> v;
  v.reserve(vals.size());
  for (const Json& e : vals) v.push_back(as_complex(e, "medium value"));
  return MediumIndex(cells, gc, L, std::move(v));
}

}  // namespace

Json scene_json(const Scene& scene) {
  Json j;
  j["wavenumber"] = scene.wavenumber();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Obstacle>) {
          j["scatterer"] = obstacle_json(s);
        } else if constexpr (std::is_same_v<T, MediumIndex>) {
          Json vals = Json::array();
          for (Complex c : s.values()) vals.push_back(complex_json(c));
          j["scatterer"] = {{"type", "medium_grid"},
                            {"params",
                             {{"grid",
                               {{"cells", s.cells_per_side()},
                                {"center", vec_json(s.center())},
                                {"half_width", s.half_width()}}},
                              {"values", vals}}}};
        } else {
          j["scatterer"] = {{"type", "none"}, {"params", Json::object()}};
        }
      },
      scene.scatterer());
  j["measurement"] = measurement_json(scene.measurement());
  j["directions"] = {{"count", scene.directions().count}, {"d0_angle", scene.directions().d0_angle}};
  if (scene.has_explicit_support_bound()) {
    const Disk b = scene.support_bound();
    j["support_bound"] = {{"center", vec_json(b.center)}, {"radius", b.radius}};
  }
  return j;
}

}  // namespace detail

using detail::Json;

Scene parse_scene(std::string_view text, const std::filesystem::path& base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scene JSON: ") + e.what());
  }
  try {
    const double k = detail::get_double(j, "wavenumber");
    const Json& s = detail::require(j, "scatterer");
    const std::string type = detail::require(s, "type").get<std::string>();
    const Json params = s.contains("params") ? s.at("params") : Json::object();
    Scatterer scatterer = NoScatterer{};
    if (type == "circle" || type == "ellipse" || type == "kite") {
      scatterer = detail::parse_obstacle(type, params);
    } else if (type == "medium_disk" || type == "medium_raster" || type == "medium_grid") {
      scatterer = detail::parse_medium(type, params, base_dir);
    } else if (type != "none") {
      throw ParseError("unknown scatterer type '" + type + "'");
    }
    const MeasurementSet m = detail::measurement_from_json(detail::require(j, "measurement"));
    DirectionGrid grid;
    if (j.contains("directions")) {
      const Json& d = j.at("directions");
      if (d.contains("count")) grid.count = detail::get_int(d, "count");
      if (d.contains("d0_angle")) grid.d0_angle = detail::get_double(d, "d0_angle");
    }
    std::optional<Disk> bound;
    if (j.contains("support_bound")) {
      const Json& b = j.at("support_bound");
      bound = Disk{detail::get_vec(b, "center"), detail::get_double(b, "radius")};
    }
    return Scene(k, std::move(scatterer), m, grid, bound);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scene JSON: ") + e.what());
  }
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scene file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str(), path.parent_path());
}

std::string scene_to_json(const Scene& scene) { return detail::scene_json(scene).dump(2); }

std::uint64_t scene_hash(const Scene& scene) {
  const std::string s = detail::scene_json(scene).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string measurement_to_json(const MeasurementSet& m) { return detail::measurement_json(m).dump(); }

MeasurementSet parse_measurement(std::string_view text) {
  try {
    return detail::measurement_from_json(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("measurement JSON: ") + e.what());
  }
}

MediumIndex load_medium_raster(const std::filesystem::path& path, int cells, Vec2 center, double half_width) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open medium raster " + path.string());
  if (cells < 1) throw ParseError("medium raster needs a positive cell count");
  std::vector<Complex> values;
  values.reserve(static_cast<std::size_t>(cells) * cells);
  std::string line;
  int lineno = 0;
  int rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty() || line[0] == '#') continue;
    const auto fields = detail::split_fields(line);
    if (static_cast<int>(fields.size()) != 2 * cells) {
      throw ParseError("expected " + std::to_string(2 * cells) + " values, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    for (int i = 0; i < cells; ++i) {
      values.emplace_back(detail::parse_double(fields[2 * i], lineno),
                          detail::parse_double(fields[2 * i + 1], lineno));
    }
    ++rows;
  }
  if (rows != cells) {
    throw ParseError("medium raster has " + std::to_string(rows) + " rows, expected " + std::to_string(cells));
  }
  return MediumIndex(cells, center, half_width, std::move(values));
}

void write_medium_raster(const MediumIndex& medium, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write medium raster " + path.string());
  const int N = medium.cells_per_side();
  for (int i2 = 0; i2 < N; ++i2) {
    for (int i1 = 0; i1 < N; ++i1) {
      const Complex v = medium.value(i1, i2);
      if (i1 > 0) out << ',';
      out << detail::format_double(v.real()) << ',' << detail::format_double(v.imag());
    }
    out << '\n';
  }
}

}  // namespace phaseless
