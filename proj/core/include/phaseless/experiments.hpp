#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phaseless/scene.hpp"

namespace phaseless {

/// Outcome of one verification check. Serialized as
/// {"check", "pass", "error", "threshold", "scene_hash", ...values, "note"}.
struct CheckReport {
  std::string check;
  bool pass = false;
  double error = 0.0;
  double threshold = 0.0;
  std::uint64_t scene_hash = 0;
  std::vector<std::pair<std::string, double>> values;
  std::string note;

  std::string to_json() const;
};

struct ReciprocityPair {
  Vec2 z;
  double d_angle = 0.0;
};

/// `count` pairs on a circle of 1.6× the support radius, with incident
/// directions spread over the circle.
std::vector<ReciprocityPair> default_reciprocity_pairs(const Scene& scene, int count = 8);

/// max over pairs of |w∞(−d, z) − γ u(z, d)| / |γ u(z, d)|, where w∞ is the
/// far field of the total field due to a point source at z.
CheckReport check_mixed_reciprocity(const Scene& scene, std::span<const ReciprocityPair> pairs,
                                    double threshold = 1e-6);

/// Reconstructs u^s at the probes from its Cauchy data on `circle` by the
/// trapezoidal rule with `nodes` points and reports the error relative to
/// max |u^s| at the probes. The circle must enclose the scatterer and the
/// probes must lie strictly outside it (GeometryError otherwise). Obstacle
/// and empty scenes.
CheckReport check_green_representation(const Scene& scene, const IncidentField& incident,
                                       std::span<const Vec2> probes, const Disk& circle, int nodes = 256,
                                       double threshold = 1e-6);

/// Runs the representation check at each node count; passes when the last
/// error meets `threshold` and the first-to-last improvement is at least
/// `min_gain` (a factor).
CheckReport green_refinement(const Scene& scene, const IncidentField& incident, std::span<const Vec2> probes,
                             const Disk& circle, std::span<const int> node_counts, double threshold = 1e-6,
                             double min_gain = 1e4);

/// Passes iff |J_n(kρ)| > 1e-6 for every n ≤ kρ; the failing order is
/// reported as "n". Orders above kρ have no zeros in (0, kρ].
CheckReport check_eigen_guard(double k, double rho);

/// Δ = max entrywise difference of (singles, pairs) synthesized from the two
/// scenes without noise; values carry the discriminating point, direction
/// and dataset (0 singles, 1 pairs). Passes iff Δ ≥ threshold, or Δ ≤
/// threshold when `expect_identical`.
CheckReport uniqueness_demo(const Scene& a, const Scene& b, double threshold, bool expect_identical = false);

/// Runs a named suite (reciprocity, green, eigenguard, invariance,
/// uniqueness) from a JSON configuration; scene paths resolve against
/// `base_dir`. Throws ParseError on unknown suites or malformed configs.
std::vector<CheckReport> run_suite(std::string_view suite, std::string_view config_json,
                                   const std::filesystem::path& base_dir = {});

/// JSON document {"suite", "pass", "checks": [...]}.
std::string suite_to_json(std::string_view suite, const std::vector<CheckReport>& reports);

}  // namespace phaseless
