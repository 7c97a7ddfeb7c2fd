#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phaseless/fields.hpp"
#include "phaseless/phase_retrieval.hpp"
#include "phaseless/scene.hpp"

namespace phaseless {

/// u∞(φ) = Σ c_n γ_n e^{inφ} e^{−ik x̂·c}, γ_n the far-field factor of mode n.
FarField expansion_to_farfield(const RadiatingExpansion& expansion, std::span<const double> angles);

/// Far fields of every direction in a phased field table, through expansions
/// fitted on the table's points. Rows are angles, columns directions.
Eigen::MatrixXcd farfields_from_fields(const FieldTable& fields, std::span<const double> angles);

struct InvarianceReport {
  Vec2 shift;
  double single_discrepancy = 0.0;         // max ||u∞'| − |u∞||, plane waves
  double shift_law_error = 0.0;            // max |u∞' − e^{ik(d − x̂)·z₀} u∞|
  double superposition_discrepancy = 0.0;  // same modulus comparison for d plus d₀
  int observations = 0;
  int incidences = 0;

  std::string to_json() const;
};

/// Compares far fields of the scene and its translate on the given angle
/// grid, used both for observation and incidence, with reference d₀.
InvarianceReport translation_invariance_report(const Scene& scene, Vec2 shift, std::span<const double> angles,
                                               double d0_angle);
/// Uses the scene's direction grid and d₀.
InvarianceReport translation_invariance_report(const Scene& scene, Vec2 shift);

/// Square search region split into cells × cells cells.
struct SearchGrid {
  Vec2 center;
  double side = 1.0;
  int cells = 128;

  double cell_size() const { return side / cells; }
  Vec2 cell_center(int i1, int i2) const;

  /// Side of six scatterer diameters around `center`.
  static SearchGrid around(Vec2 center, double diameter, int cells = 128);
};

struct IndicatorMap {
  SearchGrid grid;
  std::vector<double> values;  // row-major, index = i2 * cells + i1
  int argmax_i1 = 0;
  int argmax_i2 = 0;

  double value(int i1, int i2) const { return values[static_cast<std::size_t>(i2) * grid.cells + i1]; }
  Vec2 argmax_point() const { return grid.cell_center(argmax_i1, argmax_i2); }
};

/// I(z) = Σ_d |Σ_x̂ w u∞(x̂, d) e^{ik x̂·z}|² with trapezoidal weights on the
/// equispaced observation angles. `farfields` has one row per angle and one
/// column per incident direction.
IndicatorMap backpropagate(const Eigen::MatrixXcd& farfields, std::span<const double> angles, double k,
                           const SearchGrid& grid);

/// '#'-prefixed JSON header (grid and argmax), then rows x1,x2,value.
void write_indicator(const IndicatorMap& map, const std::filesystem::path& path);

}  // namespace phaseless
