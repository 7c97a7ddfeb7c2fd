#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phaseless/fields.hpp"
#include "phaseless/phaseless_data.hpp"
#include "phaseless/scene.hpp"

namespace phaseless {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// c(x, d) = Re{u(x, d) ū(x, d₀)} = (|u + u₀|² − |u|² − |u₀|²) / 2.
struct CorrelationField {
  Eigen::MatrixXd c;
  Mask valid;  // false where r(x, d) r(x, d₀) < 1e-8 · max
};

CorrelationField extract_correlation(const PhaselessDataset& data);

/// Principal relative phase δ = arccos(c / (r r₀)) ∈ [0, π].
struct RelativePhaseField {
  Eigen::MatrixXd delta;
  Mask valid;
  int d0_index = 0;
};

RelativePhaseField principal_relative_phase(const CorrelationField& corr, const PhaselessDataset& data);

/// The two global candidates V±(x, d) = r(x, d) e^{±iψ(x, d)} for the relative
/// field u(x, d) e^{−iθ₀(x)}, where ψ is the signed continuation of δ along
/// the direction grid starting from ψ(x, d₀) = 0. Per point, the sign is
/// oriented so that the plus candidate is the one closer to the free-space
/// relative field e^{ikx·(d − d₀)}.
struct BranchCandidates {
  Eigen::MatrixXd phase;         // ψ, unwrapped along the traversal from d₀
  Eigen::MatrixXcd plus;
  Eigen::MatrixXcd minus;
  Mask valid;                    // entries whose δ was measured, not interpolated
  std::vector<char> point_valid; // false where u(x, d₀) vanishes
};

/// Throws ContinuationError when consecutive measured δ differ by ≥ π/2 or a
/// masked run spans more than an eighth of the grid.
BranchCandidates continue_branch(const RelativePhaseField& rel, const PhaselessDataset& data);

/// Reference phase θ₀(x) of u(x, d₀) and its residuals.
struct AnchorPhase {
  std::vector<double> theta0;         // [0, 2π); 0 where not anchored
  std::vector<double> point_residual; // relative defect per point; NaN where not anchored
  std::vector<char> anchored;
  double residual = 0.0;              // root mean square of point residuals
  double worst = 0.0;
  int iterations = 1;                 // direct solve
  Eigen::MatrixXcd relative;          // candidate after sign refinement
  int entries_flipped = 0;
};

/// Anchors one candidate. For each measurement point y the mixed reciprocity
/// relation makes d ↦ u(y, d) − e^{iky·d} a far-field pattern evaluated at −d,
/// hence a combination of e^{ik d·c} e^{inθ_d}, |n| ≤ N, for any disk B(c, R)
/// containing the scatterer (N = ceil(kR) + 15). The phase θ₀ solves
///   min_{θ₀, b} ‖ e^{iθ₀} V(y, ·) − Σ b_n e^{ik d·c} e^{inθ_d} − e^{iky·d} ‖
/// and the residual is the relative defect of that fit. The conjugate
/// candidate admits no such fit when k|y − c| clearly exceeds N.
///
/// With `refine`, sign decisions that continuation cannot make reliably are
/// revisited: entries with |sin ψ| < 0.3 and the runs of entries between
/// them are conjugated greedily while each move lowers the defect.
AnchorPhase anchor_phase(const Eigen::MatrixXcd& candidate, const Mask& measured,
                         const std::vector<char>& point_valid, const PhaselessDataset& data,
                         const Disk& support_bound, bool refine = true);

struct BranchReport {
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  std::string chosen;         // "plus" or "minus"
  double ratio = 0.0;         // larger / smaller aggregate residual
  int points_reoriented = 0;  // points whose orientation was overruled by their own residual
  double expansion_residual = 0.0;
  int entries_flipped = 0;    // single-entry sign corrections in the chosen branch

  std::string to_json() const;
};

struct BranchDecision {
  BranchReport report;
  Eigen::MatrixXcd relative;  // chosen V per entry
  AnchorPhase anchor;
};

/// Anchors the refined plus candidate and its exact conjugate, chooses the
/// one with the smaller aggregate residual and requires the other to be at
/// least 10× larger, else throws AmbiguityError. Points where the chosen
/// branch fits clearly worse than its conjugate are reoriented.
BranchDecision disambiguate_branch(const BranchCandidates& candidates, const PhaselessDataset& data,
                                   const Disk& support_bound);

struct RetrievalResult {
  Eigen::MatrixXcd total;      // u(x_m, d_j)
  Eigen::MatrixXcd scattered;  // u − u^i
  std::vector<RadiatingExpansion> expansions;  // u^s(·, d_j)
  AnchorPhase anchor;
  BranchReport report;
  std::vector<Vec2> points;
  std::vector<double> directions;
  double k = 1.0;
  Disk support_bound;

  FieldSamples field(int direction, FieldTag tag = FieldTag::total) const;
};

/// Fits Σ_{|n|≤N} c_n H_|n|(k|x − c|) e^{inφ} to samples by least squares
/// with singular values below 1e-10 · max dropped. Returns the expansion and
/// sets `relative_residual`.
RadiatingExpansion fit_expansion(double k, const Disk& bound, std::span<const Vec2> points,
                                 std::span<const Complex> values, double* relative_residual = nullptr);

/// Full pipeline. Only the a-priori support bound is taken from the scene.
RetrievalResult retrieve(const PhaselessDataset& data, const Disk& support_bound);
RetrievalResult retrieve(const PhaselessDataset& data, const Scene& geometry);

/// CSV with a '#'-prefixed JSON header, column header and rows
/// x1,x2,d_angle,re_u,im_u,re_us,im_us ordered by point, then direction.
void write_fields(const RetrievalResult& result, const std::filesystem::path& path);

/// Reads fields written by write_fields (or by the forward command).
struct FieldTable {
  double k = 1.0;
  Disk support_bound;
  std::vector<Vec2> points;
  std::vector<double> directions;
  Eigen::MatrixXcd total;
  Eigen::MatrixXcd scattered;
};
FieldTable read_fields(const std::filesystem::path& path);
void write_fields(const FieldTable& table, const std::filesystem::path& path);

}  // namespace phaseless
