#include "phaseless/experiments.hpp"

#include <cmath>
#include <limits>

#include "json_io.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/farfield_imaging.hpp"
#include "phaseless/forward.hpp"
#include "phaseless/forward_obstacle.hpp"
#include "phaseless/phaseless_data.hpp"
#include "phaseless/scene_io.hpp"
#include "phaseless/special_functions.hpp"

namespace phaseless {

std::string CheckReport::to_json() const {
  detail::Json j;
  j["check"] = check;
  j["pass"] = pass;
  j["error"] = error;
  j["threshold"] = threshold;
  j["scene_hash"] = scene_hash;
  for (const auto& [key, v] : values) j[key] = v;
  if (!note.empty()) j["note"] = note;
  return j.dump(2);
}

std::vector<ReciprocityPair> default_reciprocity_pairs(const Scene& scene, int count) {
  const Disk bound = scene.support_bound();
  const double radius = std::max(1.6 * bound.radius, 1.0);
  std::vector<ReciprocityPair> pairs;
  for (int i = 0; i < count; ++i) {
    const double a = kTwoPi * (i + 0.25) / count;
    pairs.push_back({bound.center + radius * unit_vector(a), wrap_angle(0.7 + 2.3 * i)});
  }
  return pairs;
}

CheckReport check_mixed_reciprocity(const Scene& scene, std::span<const ReciprocityPair> pairs,
                                    double threshold) {
  const double k = scene.wavenumber();
  const Complex gamma = special::farfield_constant(k);
  const ForwardModel model(scene);
  CheckReport r;
  r.check = "mixed_reciprocity";
  r.threshold = threshold;
  r.scene_hash = scene_hash(scene);
  for (const auto& p : pairs) {
    const double back = wrap_angle(p.d_angle + kPi);
    const FarField w = solve_point_source(scene, p.z, std::span<const double>(&back, 1));
    const IncidentField wave = IncidentField::plane(k, p.d_angle);
    const Vec2 z = p.z;
    const Complex u = model.total(std::span<const IncidentField>(&wave, 1), std::span<const Vec2>(&z, 1))(0, 0);
    r.error = std::max(r.error, std::abs(w.values[0] - gamma * u) / std::abs(gamma * u));
  }
  r.values.emplace_back("pairs", static_cast<double>(pairs.size()));
  r.pass = r.error <= threshold;
  return r;
}

namespace {

double green_error(const Scene& scene, const IncidentField& incident, std::span<const Vec2> probes,
                   const Disk& circle, int nodes) {
  if (nodes < 3) throw DomainError("the circle quadrature needs at least 3 nodes");
  for (const Vec2& x : probes) {
    if (!(distance(x, circle.center) > circle.radius * (1.0 + 1e-12))) {
      throw GeometryError("probe lies on or inside the representation circle");
    }
  }
  const auto* obstacle = std::get_if<Obstacle>(&scene.scatterer());
  if (obstacle == nullptr) {
    if (std::holds_alternative<NoScatterer>(scene.scatterer())) return 0.0;
    throw DomainError("the Green representation check supports obstacle and empty scenes");
  }
  if (obstacle->curve.enclosing_radius(circle.center) >= circle.radius) {
    throw GeometryError("the representation circle does not enclose the scatterer");
  }
  IncidentField inc = incident;
  inc.k = scene.wavenumber();
  const double k = inc.k;
  const ObstacleSolver solver(*obstacle, k);
  const BoundaryDensity density = solver.solve(inc);

  std::vector<Vec2> ys(static_cast<std::size_t>(nodes));
  std::vector<Vec2> normals(ys.size());
  for (int i = 0; i < nodes; ++i) {
    normals[i] = unit_vector(kTwoPi * i / nodes);
    ys[i] = circle.center + circle.radius * normals[i];
  }
  const auto us = solver.scattered(density, ys);
  const auto grad = solver.scattered_gradient(density, ys);
  const auto exact = solver.scattered(density, probes);
  const double weight = kTwoPi * circle.radius / nodes;

  double err = 0.0;
  double scale = 0.0;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    Complex sum = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const Vec2 n = normals[i];
      const auto [gy1, gy2] = special::fundamental_solution_gradient(k, ys[i], probes[p]);
      const Complex dphi = gy1 * n.x1 + gy2 * n.x2;
      const Complex dun = grad[i].first * n.x1 + grad[i].second * n.x2;
      sum += us[i] * dphi - dun * special::fundamental_solution(k, probes[p], ys[i]);
    }
    err = std::max(err, std::abs(weight * sum - exact[p]));
    scale = std::max(scale, std::abs(exact[p]));
  }
  return scale > 0.0 ? err / scale : err;
}

}  // namespace

CheckReport check_green_representation(const Scene& scene, const IncidentField& incident,
                                       std::span<const Vec2> probes, const Disk& circle, int nodes,
                                       double threshold) {
  CheckReport r;
  r.check = "green_representation";
  r.threshold = threshold;
  r.scene_hash = scene_hash(scene);
  r.error = green_error(scene, incident, probes, circle, nodes);
  r.values.emplace_back("nodes", nodes);
  r.pass = r.error <= threshold;
  return r;
}

CheckReport green_refinement(const Scene& scene, const IncidentField& incident, std::span<const Vec2> probes,
                             const Disk& circle, std::span<const int> node_counts, double threshold,
                             double min_gain) {
  if (node_counts.empty()) throw DomainError("green_refinement needs at least one node count");
  CheckReport r;
  r.check = "green_representation";
  r.threshold = threshold;
  r.scene_hash = scene_hash(scene);
  std::vector<double> errors;
  for (int n : node_counts) {
    errors.push_back(green_error(scene, incident, probes, circle, n));
    r.values.emplace_back("error_" + std::to_string(n), errors.back());
  }
  r.error = errors.back();
  const double tiny = std::numeric_limits<double>::min();
  const double gain = errors.front() / std::max(errors.back(), tiny);
  r.values.emplace_back("gain", gain);
  r.pass = r.error <= threshold && (node_counts.size() == 1 || gain >= min_gain);
  return r;
}

CheckReport check_eigen_guard(double k, double rho) {
  if (!(k > 0.0) || !(rho > 0.0)) throw DomainError("eigen guard needs k > 0 and rho > 0");
  const double x = k * rho;
  const int top = static_cast<int>(std::floor(x));
  std::vector<double> j(static_cast<std::size_t>(top) + 1);
  special::bessel_j_sequence(x, j);
  CheckReport r;
  r.check = "eigen_guard";
  r.threshold = 1e-6;
  double smallest = std::numeric_limits<double>::infinity();
  int order = 0;
  for (int n = 0; n <= top; ++n) {
    if (std::fabs(j[n]) < smallest) {
      smallest = std::fabs(j[n]);
      order = n;
    }
  }
  r.error = smallest;
  r.values.emplace_back("k_rho", x);
  r.values.emplace_back("n", order);
  r.pass = smallest > r.threshold;
  if (!r.pass) r.note = "J_" + std::to_string(order) + "(k rho) vanishes: k^2 is a Dirichlet eigenvalue of the disk";
  return r;
}

CheckReport uniqueness_demo(const Scene& a, const Scene& b, double threshold, bool expect_identical) {
  if (a.wavenumber() != b.wavenumber() || !(a.measurement() == b.measurement()) ||
      !(a.directions() == b.directions())) {
    throw GeometryError("uniqueness scenes must share k, measurement set, direction grid and d0");
  }
  const PhaselessDataset da = synthesize(a, 0.0, 0);
  const PhaselessDataset db = synthesize(b, 0.0, 0);
  CheckReport r;
  r.check = "uniqueness";
  r.threshold = threshold;
  r.scene_hash = scene_hash(a);
  int point = 0;
  int direction = 0;
  int which = 0;
  for (int m = 0; m < da.points(); ++m) {
    for (int j = 0; j < da.directions(); ++j) {
      const double s = std::fabs(da.singles(m, j) - db.singles(m, j));
      const double p = std::fabs(da.pairs(m, j) - db.pairs(m, j));
      if (s > r.error) {
        r.error = s;
        point = m;
        direction = j;
        which = 0;
      }
      if (p > r.error) {
        r.error = p;
        point = m;
        direction = j;
        which = 1;
      }
    }
  }
  r.note = "scene_b_hash " + std::to_string(scene_hash(b));
  r.values.emplace_back("point", point);
  r.values.emplace_back("direction_angle", da.meta.directions[static_cast<std::size_t>(direction)]);
  r.values.emplace_back("dataset", which);
  r.pass = expect_identical ? r.error <= threshold : r.error >= threshold;
  return r;
}

namespace {

using detail::Json;

Scene scene_from(const Json& v, const std::filesystem::path& base) {
  if (v.is_string()) {
    const std::filesystem::path p = v.get<std::string>();
    return load_scene(p.is_absolute() ? p : base / p);
  }
  if (v.is_object()) return parse_scene(v.dump(), base);
  throw ParseError("scene must be a path or an inline object");
}

double get_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? detail::get_double(j, key) : fallback;
}

std::vector<Vec2> points_from(const Json& arr, const char* what) {
  if (!arr.is_array()) throw ParseError(std::string(what) + " must be an array of [x1, x2]");
  std::vector<Vec2> out;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() < 2) throw ParseError(std::string(what) + " entries must be [x1, x2]");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

std::vector<CheckReport> reciprocity_suite(const Json& c, const std::filesystem::path& base) {
  const Scene scene = scene_from(detail::require(c, "scene"), base);
  std::vector<ReciprocityPair> pairs;
  if (c.contains("pairs")) {
    for (const auto& p : c.at("pairs")) {
      if (!p.is_array() || p.size() != 3) throw ParseError("pairs entries must be [z1, z2, d_angle]");
      pairs.push_back({{p[0].get<double>(), p[1].get<double>()}, p[2].get<double>()});
    }
  } else {
    pairs = default_reciprocity_pairs(scene, c.contains("count") ? detail::get_int(c, "count") : 8);
  }
  return {check_mixed_reciprocity(scene, pairs, get_or(c, "threshold", 1e-6))};
}

std::vector<CheckReport> green_suite(const Json& c, const std::filesystem::path& base) {
  const Scene scene = scene_from(detail::require(c, "scene"), base);
  const Disk bound = scene.support_bound();
  Disk circle{bound.center, 1.6 * std::max(bound.radius, 0.5)};
  if (c.contains("circle")) {
    const Json& cc = c.at("circle");
    circle = {cc.contains("center") ? detail::get_vec(cc, "center") : bound.center,
              detail::get_double(cc, "radius")};
  }
  std::vector<Vec2> probes;
  if (c.contains("probes")) {
    probes = points_from(c.at("probes"), "probes");
  } else {
    for (int i = 0; i < 8; ++i) probes.push_back(circle.center + 1.25 * circle.radius * unit_vector(kTwoPi * i / 8 + 0.3));
  }
  std::vector<int> nodes{64, 256};
  if (c.contains("nodes")) {
    const Json& n = c.at("nodes");
    nodes = n.is_array() ? n.get<std::vector<int>>() : std::vector<int>{n.get<int>()};
  }
  const IncidentField inc = IncidentField::plane(scene.wavenumber(), get_or(c, "incident_angle", 0.0));
  return {green_refinement(scene, inc, probes, circle, nodes, get_or(c, "threshold", 1e-6),
                           get_or(c, "min_gain", 1e4))};
}

std::vector<CheckReport> eigenguard_suite(const Json& c) {
  std::vector<CheckReport> out;
  if (c.contains("cases")) {
    for (const auto& e : c.at("cases")) out.push_back(check_eigen_guard(detail::get_double(e, "k"), detail::get_double(e, "rho")));
  } else {
    out.push_back(check_eigen_guard(detail::get_double(c, "k"), detail::get_double(c, "rho")));
  }
  return out;
}

std::vector<CheckReport> invariance_suite(const Json& c, const std::filesystem::path& base) {
  const Scene scene = scene_from(detail::require(c, "scene"), base);
  const Vec2 shift = c.contains("shift") ? detail::get_vec(c, "shift") : Vec2{0.5, 0.0};
  const InvarianceReport inv = translation_invariance_report(scene, shift);
  CheckReport r;
  r.check = "translation_invariance";
  r.threshold = get_or(c, "max_single", 1e-8);
  r.scene_hash = scene_hash(scene);
  r.error = inv.single_discrepancy;
  const double min_super = get_or(c, "min_superposition", 1e-2);
  r.values = {{"superposition_discrepancy", inv.superposition_discrepancy},
              {"min_superposition", min_super},
              {"shift_law_error", inv.shift_law_error},
              {"shift_x1", shift.x1},
              {"shift_x2", shift.x2}};
  r.pass = r.error <= r.threshold && inv.superposition_discrepancy >= min_super;
  return {r};
}

std::vector<CheckReport> uniqueness_suite(const Json& c, const std::filesystem::path& base) {
  std::vector<CheckReport> out;
  auto one = [&](const Json& e) {
    const Scene a = scene_from(detail::require(e, "scene_a"), base);
    const Scene b = scene_from(detail::require(e, "scene_b"), base);
    const bool identical = e.contains("expect_identical") && e.at("expect_identical").get<bool>();
    out.push_back(uniqueness_demo(a, b, get_or(e, "threshold", identical ? 1e-12 : 1e-3), identical));
  };
  if (c.contains("pairs")) {
    for (const auto& e : c.at("pairs")) one(e);
  } else {
    one(c);
  }
  return out;
}

}  // namespace

std::vector<CheckReport> run_suite(std::string_view suite, std::string_view config_json,
                                   const std::filesystem::path& base_dir) {
  Json c;
  try {
    c = Json::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  try {
    if (suite == "reciprocity") return reciprocity_suite(c, base_dir);
    if (suite == "green") return green_suite(c, base_dir);
    if (suite == "eigenguard") return eigenguard_suite(c);
    if (suite == "invariance") return invariance_suite(c, base_dir);
    if (suite == "uniqueness") return uniqueness_suite(c, base_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  throw ParseError("unknown suite '" + std::string(suite) + "'");
}

std::string suite_to_json(std::string_view suite, const std::vector<CheckReport>& reports) {
  Json j;
  j["suite"] = std::string(suite);
  bool pass = !reports.empty();
  Json checks = Json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass;
    checks.push_back(Json::parse(r.to_json()));
  }
  j["pass"] = pass;
  j["checks"] = std::move(checks);
  return j.dump(2);
}

}  // namespace phaseless
