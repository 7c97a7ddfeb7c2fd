#include "phaseless/forward.hpp"

#include "phaseless/errors.hpp"
#include "phaseless/forward_medium.hpp"
#include "phaseless/forward_obstacle.hpp"
#include "phaseless/parallel.hpp"

namespace phaseless {

ForwardModel::ForwardModel(const Scene& scene) : scene_(scene) {
  if (const auto* o = std::get_if<Obstacle>(&scene.scatterer())) {
    obstacle_ = std::make_unique<ObstacleSolver>(*o, scene.wavenumber());
  } else if (const auto* m = std::get_if<MediumIndex>(&scene.scatterer())) {
    if (!m->contrast_free()) medium_ = std::make_unique<MediumSolver>(*m, scene.wavenumber());
  }
}

ForwardModel::~ForwardModel() = default;
ForwardModel::ForwardModel(ForwardModel&&) noexcept = default;
ForwardModel& ForwardModel::operator=(ForwardModel&&) noexcept = default;

void ForwardModel::scattered_and_farfield(std::span<const IncidentField> incidents,
                                          std::span<const Vec2> points, std::span<const double> angles,
                                          Eigen::MatrixXcd& us, Eigen::MatrixXcd& uf) const {
  const auto P = static_cast<Eigen::Index>(points.size());
  const auto A = static_cast<Eigen::Index>(angles.size());
  const auto D = static_cast<Eigen::Index>(incidents.size());
  us = Eigen::MatrixXcd::Zero(P, D);
  uf = Eigen::MatrixXcd::Zero(A, D);
  std::vector<IncidentField> inc(incidents.begin(), incidents.end());
  for (auto& f : inc) f.k = scene_.wavenumber();
  if (obstacle_) {
    const std::vector<BoundaryDensity> dens = obstacle_->solve_many(inc);
    Eigen::MatrixXcd phi(obstacle_->discretization().n, D);
    for (Eigen::Index c = 0; c < D; ++c) {
      phi.col(c) = Eigen::Map<const Eigen::VectorXcd>(dens[c].values.data(), phi.rows());
    }
    if (P > 0) us = obstacle_->field_matrix(points) * phi;
    if (A > 0) uf = obstacle_->farfield_matrix(angles) * phi;
  } else if (medium_) {
    parallel_for(inc.size(), [&](std::size_t c) {
      const VolumeField field = medium_->solve(inc[c]);
      if (P > 0) {
        const auto v = medium_->scattered(field, points);
        us.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXcd>(v.data(), P);
      }
      if (A > 0) {
        const auto f = medium_->farfield(field, angles);
        uf.col(static_cast<Eigen::Index>(c)) = Eigen::Map<const Eigen::VectorXcd>(f.data(), A);
      }
    });
  }
}

Eigen::MatrixXcd ForwardModel::scattered(std::span<const IncidentField> incidents,
                                         std::span<const Vec2> points) const {
  Eigen::MatrixXcd us, uf;
  scattered_and_farfield(incidents, points, {}, us, uf);
  return us;
}

Eigen::MatrixXcd ForwardModel::total(std::span<const IncidentField> incidents,
                                     std::span<const Vec2> points) const {
  Eigen::MatrixXcd u = scattered(incidents, points);
  for (std::size_t c = 0; c < incidents.size(); ++c) {
    IncidentField f = incidents[c];
    f.k = scene_.wavenumber();
    for (std::size_t p = 0; p < points.size(); ++p) {
      u(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) += eval_incident(f, points[p]);
    }
  }
  return u;
}

Eigen::MatrixXcd ForwardModel::farfield(std::span<const IncidentField> incidents,
                                        std::span<const double> angles) const {
  Eigen::MatrixXcd us, uf;
  scattered_and_farfield(incidents, {}, angles, us, uf);
  return uf;
}

std::vector<IncidentField> plane_waves(double k, std::span<const double> angles) {
  std::vector<IncidentField> out;
  out.reserve(angles.size());
  for (double a : angles) out.push_back(IncidentField::plane(k, a));
  return out;
}

}  // namespace phaseless
