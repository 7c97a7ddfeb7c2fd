#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "phaseless/scene.hpp"

namespace phaseless {

struct DatasetMeta {
  double k = 1.0;
  double d0_angle = 1.5 * kPi;
  MeasurementSet measurement = MeasurementSet::circle({}, 1.0, 3);
  std::vector<double> directions;  // includes d₀ at `d0_index`
  int d0_index = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

/// Moduli r(x_m, d_j) = |u(x_m, d_j)| and |u(x_m, d_j) + u(x_m, d₀)| on a
/// point × direction grid (rows: points, columns: directions).
struct PhaselessDataset {
  DatasetMeta meta;
  Eigen::MatrixXd singles;
  Eigen::MatrixXd pairs;

  int points() const { return static_cast<int>(singles.rows()); }
  int directions() const { return static_cast<int>(singles.cols()); }
  /// r(x_m, d₀).
  Eigen::VectorXd singles_d0() const { return singles.col(meta.d0_index); }

  /// Throws ParseError on negative or non-finite entries or shape mismatch.
  void validate() const;
};

/// Directions of `grid` with d₀ inserted in angular order when it is not
/// already a grid angle; returns the index of d₀.
std::vector<double> direction_list(const DirectionGrid& grid, double d0_angle, int& d0_index);

/// Synthesizes moduli from phased solves. `noise` > 0 applies independent
/// multiplicative factors uniform in [1 − noise, 1 + noise] drawn from a
/// 64-bit Mersenne Twister seeded with `seed`.
PhaselessDataset synthesize(const Scene& scene, const DirectionGrid& directions, double d0_angle,
                            double noise = 0.0, std::uint64_t seed = 0);
PhaselessDataset synthesize(const Scene& scene, double noise = 0.0, std::uint64_t seed = 0);

/// Same, from already computed total fields (rows: points; columns: the
/// directions of `meta`).
PhaselessDataset dataset_from_fields(const DatasetMeta& meta, const Eigen::MatrixXcd& total);

/// CSV with a '#'-prefixed JSON header line, a column header line and rows
/// x1,x2,d_angle,r_single,r_pair ordered by point, then direction.
void write_dataset(const PhaselessDataset& data, const std::filesystem::path& path);
PhaselessDataset read_dataset(const std::filesystem::path& path);

}  // namespace phaseless
