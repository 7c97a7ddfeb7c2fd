// phaseless-helm: forward solves, phaseless synthesis, retrieval, verification
// suites and imaging from the command line.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phaseless/errors.hpp"
#include "phaseless/experiments.hpp"
#include "phaseless/farfield_imaging.hpp"
#include "phaseless/forward.hpp"
#include "phaseless/parallel.hpp"
#include "phaseless/phase_retrieval.hpp"
#include "phaseless/phaseless_data.hpp"
#include "phaseless/scene_io.hpp"

namespace {

using namespace phaseless;
using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(what + ": '" + item + "' is not a number");
    }
  }
  if (out.size() != expected) throw UsageError(what + " expects " + std::to_string(expected) + " numbers");
  return out;
}

IncidentField parse_incident(const std::string& spec, double k) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("--incident must be plane:A, superpose:A1,A2 or source:X,Y");
  const std::string kind = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  if (kind == "plane") return IncidentField::plane(k, parse_numbers(args, 1, "plane")[0]);
  if (kind == "superpose") {
    const auto a = parse_numbers(args, 2, "superpose");
    return IncidentField::superposition(k, a[0], a[1]);
  }
  if (kind == "source") {
    const auto p = parse_numbers(args, 2, "source");
    return IncidentField::point_source(k, {p[0], p[1]});
  }
  throw UsageError("unknown incident kind '" + kind + "'");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_forward(const std::string& scene_path, const std::string& incident_spec, const std::string& points,
                const std::string& out_path) {
  const Scene scene = load_scene(scene_path);
  const IncidentField inc = parse_incident(incident_spec, scene.wavenumber());
  const ForwardModel model(scene);
  Json header;
  header["format"] = points == "near" ? "phased-fields" : "farfield";
  header["k"] = scene.wavenumber();
  header["incident"] = incident_spec;
  header["scene_hash"] = scene_hash(scene);
  auto out = open_out(out_path);
  if (points == "near") {
    const auto& pts = scene.measurement().points();
    const Eigen::MatrixXcd us = model.scattered({&inc, 1}, pts);
    const Disk b = scene.support_bound();
    double angle = 0.0;
    if (const auto* p = std::get_if<PlaneWave>(&inc.variant)) angle = p->d.angle();
    if (const auto* s = std::get_if<Superposition>(&inc.variant)) angle = s->d.angle();
    FieldTable t{scene.wavenumber(), b, pts, {angle}, Eigen::MatrixXcd(us.rows(), 1), us};
    for (std::size_t m = 0; m < pts.size(); ++m) {
      t.total(static_cast<Eigen::Index>(m), 0) = eval_incident(inc, pts[m]) + us(static_cast<Eigen::Index>(m), 0);
    }
    out.close();
    write_fields(t, out_path);
    return 0;
  }
  const auto angles = scene.directions().angles();
  const Eigen::MatrixXcd f = model.farfield({&inc, 1}, angles);
  header["angles"] = angles.size();
  out << "# " << header.dump() << '\n' << "angle,re_uinf,im_uinf\n";
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const Complex v = f(static_cast<Eigen::Index>(a), 0);
    out << fmt(angles[a]) << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << '\n';
  }
  return 0;
}

int run_synth(const std::string& scene_path, std::optional<double> d0, std::optional<int> directions, double noise,
              std::uint64_t seed, const std::string& out_path) {
  const Scene scene = load_scene(scene_path);
  DirectionGrid grid = scene.directions();
  if (directions) grid.count = *directions;
  if (d0) grid.d0_angle = *d0;
  if (grid.count < 1) throw UsageError("--directions must be positive");
  const PhaselessDataset data = synthesize(scene, grid, grid.d0_angle, noise, seed);
  write_dataset(data, out_path);
  return 0;
}

int run_retrieve(const std::string& data_path, const std::string& scene_path, const std::string& out_path,
                 const std::string& report_path) {
  const PhaselessDataset data = read_dataset(data_path);
  const Scene scene = load_scene(scene_path);
  const RetrievalResult r = retrieve(data, scene);
  write_fields(r, out_path);
  if (!report_path.empty()) open_out(report_path) << r.report.to_json() << '\n';
  return 0;
}

int run_verify(const std::string& suite, const std::string& config_path, const std::string& out_path) {
  const std::filesystem::path cfg(config_path);
  const auto reports = run_suite(suite, read_text(config_path), cfg.parent_path());
  const std::string doc = suite_to_json(suite, reports);
  open_out(out_path) << doc << '\n';
  for (const auto& r : reports) {
    if (!r.pass) {
      std::cerr << "phaseless-helm: check " << r.check << " failed (error " << fmt(r.error) << ", threshold "
                << fmt(r.threshold) << ")\n";
      return 1;
    }
  }
  return 0;
}

int run_image(const std::string& fields_path, int cells, int angles_count, std::optional<double> side,
              const std::string& out_path) {
  if (cells < 1) throw UsageError("--grid must be positive");
  if (angles_count < 8) throw UsageError("--angles must be at least 8");
  const FieldTable t = read_fields(fields_path);
  std::vector<double> angles(static_cast<std::size_t>(angles_count));
  for (int i = 0; i < angles_count; ++i) angles[i] = kTwoPi * i / angles_count;
  const Eigen::MatrixXcd f = farfields_from_fields(t, angles);
  const SearchGrid grid{t.support_bound.center, side ? *side : 4.0 * t.support_bound.radius, cells};
  write_indicator(backpropagate(f, angles, t.k, grid), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phaseless inverse scattering workbench"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker cap (default: PHASELESS_HELM_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  std::string scene, incident, points = "near", out, data, report, suite, config, fields;
  std::optional<double> d0;
  std::optional<int> directions;
  std::optional<double> side;
  double noise = 0.0;
  std::uint64_t seed = 0;
  int cells = 128;
  int angles = 128;

  auto* fwd = app.add_subcommand("forward", "Phased forward solve for one incident field");
  fwd->add_option("--scene", scene, "Scene JSON")->required();
  fwd->add_option("--incident", incident, "plane:ANGLE | superpose:A1,A2 | source:X,Y")->required();
  fwd->add_option("--points", points, "near (measurement set) or far (direction grid)")
      ->check(CLI::IsMember({"near", "far"}));
  fwd->add_option("--out", out, "Output CSV")->required();

  auto* syn = app.add_subcommand("synth", "Synthesize phaseless single and superposition moduli");
  syn->add_option("--scene", scene, "Scene JSON")->required();
  syn->add_option("--d0", d0, "Reference direction angle (radians)");
  syn->add_option("--directions", directions, "Number of equispaced incident directions");
  syn->add_option("--noise", noise, "Multiplicative noise level in [0, 1)")->check(CLI::Range(0.0, 1.0));
  syn->add_option("--seed", seed, "Noise seed");
  syn->add_option("--out", out, "Output dataset CSV")->required();

  auto* ret = app.add_subcommand("retrieve", "Recover phased fields from a phaseless dataset");
  ret->add_option("--data", data, "Dataset CSV")->required();
  ret->add_option("--scene-geometry", scene, "Scene JSON providing the a-priori support bound")->required();
  ret->add_option("--out", out, "Output fields CSV")->required();
  ret->add_option("--report", report, "Branch report JSON");

  auto* ver = app.add_subcommand("verify", "Run a verification suite");
  ver->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"reciprocity", "green", "eigenguard", "invariance", "uniqueness"}));
  ver->add_option("--config", config, "Suite configuration JSON")->required();
  ver->add_option("--out", out, "Report JSON")->required();

  auto* img = app.add_subcommand("image", "Backpropagation indicator from phased fields");
  img->add_option("--fields", fields, "Fields CSV")->required();
  img->add_option("--grid", cells, "Cells per side of the search square");
  img->add_option("--angles", angles, "Observation angles for the far fields");
  img->add_option("--side", side, "Search square side (default: twice the support diameter)");
  img->add_option("--out", out, "Indicator CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (threads > 0) set_thread_count(threads);
    if (*fwd) return run_forward(scene, incident, points, out);
    if (*syn) return run_synth(scene, d0, directions, noise, seed, out);
    if (*ret) return run_retrieve(data, scene, out, report);
    if (*ver) return run_verify(suite, config, out);
    if (*img) return run_image(fields, cells, angles, side, out);
  } catch (const UsageError& e) {
    std::cerr << "phaseless-helm: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "phaseless-helm: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
