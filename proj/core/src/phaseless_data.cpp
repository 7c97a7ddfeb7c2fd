#include "phaseless/phaseless_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "csv.hpp"
#include "json_io.hpp"
#include "phaseless/errors.hpp"
#include "phaseless/forward.hpp"

namespace phaseless {

void PhaselessDataset::validate() const {
  if (singles.rows() != pairs.rows() || singles.cols() != pairs.cols()) {
    throw ParseError("singles and pairs matrices differ in shape");
  }
  if (static_cast<std::size_t>(singles.rows()) != meta.measurement.points().size()) {
    throw ParseError("dataset rows do not match the measurement point count");
  }
  if (static_cast<std::size_t>(singles.cols()) != meta.directions.size()) {
    throw ParseError("dataset columns do not match the direction count");
  }
  if (meta.d0_index < 0 || meta.d0_index >= directions()) throw ParseError("d0 index out of range");
  if (!(meta.k > 0.0)) throw ParseError("wavenumber must be positive");
  for (const Eigen::MatrixXd* m : {&singles, &pairs}) {
    if (!m->allFinite() || (m->size() > 0 && m->minCoeff() < 0.0)) {
      throw ParseError("moduli must be finite and nonnegative");
    }
  }
}

std::vector<double> direction_list(const DirectionGrid& grid, double d0_angle, int& d0_index) {
  std::vector<double> a = grid.angles();
  const double d0 = wrap_angle(d0_angle);
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::fabs(wrap_phase(a[j] - d0)) < 1e-12) {
      a[j] = d0;
      d0_index = static_cast<int>(j);
      return a;
    }
  }
  const auto it = std::upper_bound(a.begin(), a.end(), d0);
  d0_index = static_cast<int>(it - a.begin());
  a.insert(it, d0);
  return a;
}

PhaselessDataset dataset_from_fields(const DatasetMeta& meta, const Eigen::MatrixXcd& total) {
  PhaselessDataset data;
  data.meta = meta;
  data.singles = total.cwiseAbs();
  const Eigen::VectorXcd u0 = total.col(meta.d0_index);
  data.pairs = (total.colwise() + u0).cwiseAbs();
  // |u + u| is exactly 2|u|; keep the d₀ column bit-consistent.
  data.pairs.col(meta.d0_index) = 2.0 * data.singles.col(meta.d0_index);
  if (meta.noise > 0.0) {
    std::mt19937_64 rng(meta.seed);
    std::uniform_real_distribution<double> dist(1.0 - meta.noise, 1.0 + meta.noise);
    for (Eigen::Index m = 0; m < data.singles.rows(); ++m) {
      for (Eigen::Index j = 0; j < data.singles.cols(); ++j) {
        data.singles(m, j) *= dist(rng);
        data.pairs(m, j) *= dist(rng);
      }
    }
  }
  return data;
}

PhaselessDataset synthesize(const Scene& scene, const DirectionGrid& directions, double d0_angle,
                            double noise, std::uint64_t seed) {
  if (!(noise >= 0.0) || noise >= 1.0) throw DomainError("noise level must lie in [0, 1)");
  DatasetMeta meta;
  meta.k = scene.wavenumber();
  meta.d0_angle = wrap_angle(d0_angle);
  meta.measurement = scene.measurement();
  meta.directions = direction_list(directions, d0_angle, meta.d0_index);
  meta.noise = noise;
  meta.seed = seed;
  const ForwardModel model(scene);
  const auto incidents = plane_waves(scene.wavenumber(), meta.directions);
  return dataset_from_fields(meta, model.total(incidents, scene.measurement().points()));
}

PhaselessDataset synthesize(const Scene& scene, double noise, std::uint64_t seed) {
  return synthesize(scene, scene.directions(), scene.directions().d0_angle, noise, seed);
}

void write_dataset(const PhaselessDataset& data, const std::filesystem::path& path) {
  data.validate();
  detail::Json header;
  header["format"] = "phaseless-dataset";
  header["k"] = data.meta.k;
  header["d0_angle"] = data.meta.d0_angle;
  header["d0_index"] = data.meta.d0_index;
  header["points"] = data.points();
  header["directions"] = data.directions();
  header["noise"] = data.meta.noise;
  header["seed"] = data.meta.seed;
  header["measurement"] = detail::measurement_json(data.meta.measurement);
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write dataset " + path.string());
  out << "# " << header.dump() << '\n' << "x1,x2,d_angle,r_single,r_pair\n";
  const auto& pts = data.meta.measurement.points();
  for (int m = 0; m < data.points(); ++m) {
    for (int j = 0; j < data.directions(); ++j) {
      out << detail::format_double(pts[m].x1) << ',' << detail::format_double(pts[m].x2) << ','
          << detail::format_double(data.meta.directions[j]) << ','
          << detail::format_double(data.singles(m, j)) << ',' << detail::format_double(data.pairs(m, j))
          << '\n';
    }
  }
}

PhaselessDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind('#', 0) != 0) {
    throw ParseError("missing '#' JSON header", 1);
  }
  PhaselessDataset data;
  int M = 0;
  int D = 0;
  try {
    const detail::Json h = detail::Json::parse(line.substr(1));
    data.meta.k = detail::get_double(h, "k");
    data.meta.d0_angle = detail::get_double(h, "d0_angle");
    data.meta.d0_index = detail::get_int(h, "d0_index");
    data.meta.noise = detail::get_double(h, "noise");
    data.meta.seed = detail::require(h, "seed").get<std::uint64_t>();
    data.meta.measurement = detail::measurement_from_json(detail::require(h, "measurement"));
    M = detail::get_int(h, "points");
    D = detail::get_int(h, "directions");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dataset header: ") + e.what(), 1);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), 1);
  } catch (const GeometryError& e) {
    throw ParseError(e.what(), 1);
  }
  if (M != data.meta.measurement.count()) {
    throw ParseError("header declares " + std::to_string(M) + " points but the measurement set has " +
                         std::to_string(data.meta.measurement.count()),
                     1);
  }
  if (D < 1 || data.meta.d0_index < 0 || data.meta.d0_index >= D) {
    throw ParseError("header direction count or d0 index is inconsistent", 1);
  }
  if (!(data.meta.k > 0.0)) throw ParseError("header wavenumber must be positive", 1);
  if (!std::getline(in, line) || detail::trim(line) != "x1,x2,d_angle,r_single,r_pair") {
    throw ParseError("expected column header x1,x2,d_angle,r_single,r_pair", 2);
  }
  data.singles.resize(M, D);
  data.pairs.resize(M, D);
  data.meta.directions.assign(D, 0.0);
  const auto& pts = data.meta.measurement.points();
  int lineno = 2;
  long count = 0;
  const long expected = static_cast<long>(M) * D;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    if (count >= expected) throw ParseError("more rows than declared in the header", lineno);
    const auto f = detail::split_fields(line);
    if (f.size() != 5) throw ParseError("expected 5 columns, got " + std::to_string(f.size()), lineno);
    const int m = static_cast<int>(count / D);
    const int j = static_cast<int>(count % D);
    const Vec2 x{detail::parse_double(f[0], lineno), detail::parse_double(f[1], lineno)};
    const double angle = detail::parse_double(f[2], lineno);
    const double rs = detail::parse_double(f[3], lineno);
    const double rp = detail::parse_double(f[4], lineno);
    if (distance(x, pts[m]) > 1e-9 * (1.0 + norm(pts[m]))) {
      throw ParseError("point does not match measurement point " + std::to_string(m), lineno);
    }
    if (m == 0) {
      data.meta.directions[j] = angle;
    } else if (angle != data.meta.directions[j]) {
      throw ParseError("direction angle differs from the first block", lineno);
    }
    if (!(rs >= 0.0) || !(rp >= 0.0) || !std::isfinite(rs) || !std::isfinite(rp)) {
      throw ParseError("moduli must be finite and nonnegative", lineno);
    }
    data.singles(m, j) = rs;
    data.pairs(m, j) = rp;
    ++count;
  }
  if (count != expected) {
    throw ParseError("dataset has " + std::to_string(count) + " rows, header declares " +
                         std::to_string(expected),
                     lineno);
  }
  if (std::fabs(wrap_phase(data.meta.directions[data.meta.d0_index] - data.meta.d0_angle)) > 1e-12) {
    throw ParseError("direction at d0_index does not equal d0_angle", 1);
  }
  return data;
}

}  // namespace phaseless
