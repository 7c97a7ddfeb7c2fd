#include "phaseless/farfield_imaging.hpp"

#include <cmath>
#include <fstream>

#include "csv.hpp"
#include "json_io.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/forward.hpp"
#include "phaseless/parallel.hpp"
#include "phaseless/special_functions.hpp"

namespace phaseless {

FarField expansion_to_farfield(const RadiatingExpansion& e, std::span<const double> angles) {
  FarField out;
  out.k = e.k;
  out.angles.assign(angles.begin(), angles.end());
  out.values.resize(angles.size());
  std::vector<Complex> factor(e.coefficients.size());
  for (int n = -e.order; n <= e.order; ++n) {
    factor[static_cast<std::size_t>(n + e.order)] = e.coefficient(n) * special::mode_farfield_factor(n, e.k);
  }
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const double phi = angles[a];
    Complex sum = 0.0;
    for (int n = -e.order; n <= e.order; ++n) {
      sum += factor[static_cast<std::size_t>(n + e.order)] * std::exp(kI * (n * phi));
    }
    out.values[a] = sum * std::exp(-kI * (e.k * dot(unit_vector(phi), e.center)));
  }
  return out;
}

Eigen::MatrixXcd farfields_from_fields(const FieldTable& t, std::span<const double> angles) {
  const auto D = static_cast<Eigen::Index>(t.directions.size());
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(angles.size()), D);
  std::vector<Complex> column(t.points.size());
  for (Eigen::Index j = 0; j < D; ++j) {
    for (std::size_t m = 0; m < t.points.size(); ++m) column[m] = t.scattered(static_cast<Eigen::Index>(m), j);
    const RadiatingExpansion e = fit_expansion(t.k, t.support_bound, t.points, column);
    const FarField f = expansion_to_farfield(e, angles);
    for (std::size_t a = 0; a < angles.size(); ++a) out(static_cast<Eigen::Index>(a), j) = f.values[a];
  }
  return out;
}

std::string InvarianceReport::to_json() const {
  detail::Json j;
  j["shift"] = detail::vec_json(shift);
  j["single_discrepancy"] = single_discrepancy;
  j["shift_law_error"] = shift_law_error;
  j["superposition_discrepancy"] = superposition_discrepancy;
  j["observations"] = observations;
  j["incidences"] = incidences;
  return j.dump(2);
}

InvarianceReport translation_invariance_report(const Scene& scene, Vec2 shift, std::span<const double> angles,
                                               double d0_angle) {
  const Scene moved = translate_scene(scene, shift);
  const double k = scene.wavenumber();
  std::vector<double> incident(angles.begin(), angles.end());
  incident.push_back(d0_angle);
  const auto waves = plane_waves(k, incident);
  const Eigen::MatrixXcd f = ForwardModel(scene).farfield(waves, angles);
  const Eigen::MatrixXcd g = ForwardModel(moved).farfield(waves, angles);
  const Eigen::Index D = static_cast<Eigen::Index>(angles.size());

  InvarianceReport r;
  r.shift = shift;
  r.observations = static_cast<int>(angles.size());
  r.incidences = static_cast<int>(angles.size());
  for (Eigen::Index a = 0; a < D; ++a) {
    const Vec2 xhat = unit_vector(angles[static_cast<std::size_t>(a)]);
    for (Eigen::Index j = 0; j < D; ++j) {
      const Vec2 d = unit_vector(incident[static_cast<std::size_t>(j)]);
      const Complex law = std::exp(kI * (k * dot(d - xhat, shift)));
      r.single_discrepancy = std::max(r.single_discrepancy, std::fabs(std::abs(g(a, j)) - std::abs(f(a, j))));
      r.shift_law_error = std::max(r.shift_law_error, std::abs(g(a, j) - law * f(a, j)));
      const double sf = std::abs(f(a, j) + f(a, D));
      const double sg = std::abs(g(a, j) + g(a, D));
      r.superposition_discrepancy = std::max(r.superposition_discrepancy, std::fabs(sg - sf));
    }
  }
  return r;
}

InvarianceReport translation_invariance_report(const Scene& scene, Vec2 shift) {
  const auto angles = scene.directions().angles();
  return translation_invariance_report(scene, shift, angles, scene.directions().d0_angle);
}

Vec2 SearchGrid::cell_center(int i1, int i2) const {
  const double h = cell_size();
  return {center.x1 - 0.5 * side + (i1 + 0.5) * h, center.x2 - 0.5 * side + (i2 + 0.5) * h};
}

SearchGrid SearchGrid::around(Vec2 center, double diameter, int cells) {
  return SearchGrid{center, 6.0 * diameter, cells};
}

IndicatorMap backpropagate(const Eigen::MatrixXcd& farfields, std::span<const double> angles, double k,
                           const SearchGrid& grid) {
  if (farfields.rows() != static_cast<Eigen::Index>(angles.size())) {
    throw DomainError("far-field rows must match the observation angles");
  }
  if (grid.cells < 1 || !(grid.side > 0.0)) throw DomainError("search grid needs cells ≥ 1 and side > 0");
  IndicatorMap map;
  map.grid = grid;
  const int N = grid.cells;
  map.values.assign(static_cast<std::size_t>(N) * N, 0.0);
  const double w = kTwoPi / static_cast<double>(angles.size());
  std::vector<Vec2> xhat(angles.size());
  for (std::size_t a = 0; a < angles.size(); ++a) xhat[a] = unit_vector(angles[a]);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t row) {
    const int i2 = static_cast<int>(row);
    Eigen::VectorXcd phase(static_cast<Eigen::Index>(angles.size()));
    for (int i1 = 0; i1 < N; ++i1) {
      const Vec2 z = grid.cell_center(i1, i2);
      for (std::size_t a = 0; a < angles.size(); ++a) {
        phase[static_cast<Eigen::Index>(a)] = w * std::exp(kI * (k * dot(xhat[a], z)));
      }
      const Eigen::VectorXcd s = farfields.transpose() * phase;
      map.values[static_cast<std::size_t>(i2) * N + i1] = s.squaredNorm();
    }
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < map.values.size(); ++i) {
    if (map.values[i] > map.values[best]) best = i;
  }
  map.argmax_i1 = static_cast<int>(best % static_cast<std::size_t>(N));
  map.argmax_i2 = static_cast<int>(best / static_cast<std::size_t>(N));
  return map;
}

void write_indicator(const IndicatorMap& map, const std::filesystem::path& path) {
  detail::Json h;
  h["format"] = "indicator";
  h["center"] = detail::vec_json(map.grid.center);
  h["side"] = map.grid.side;
  h["cells"] = map.grid.cells;
  h["argmax"] = {map.argmax_i1, map.argmax_i2};
  h["argmax_point"] = detail::vec_json(map.argmax_point());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write indicator " + path.string());
  out << "# " << h.dump() << '\n' << "x1,x2,value\n";
  for (int i2 = 0; i2 < map.grid.cells; ++i2) {
    for (int i1 = 0; i1 < map.grid.cells; ++i1) {
      const Vec2 z = map.grid.cell_center(i1, i2);
      out << detail::format_double(z.x1) << ',' << detail::format_double(z.x2) << ','
          << detail::format_double(map.value(i1, i2)) << '\n';
    }
  }
}

}  // namespace phaseless
