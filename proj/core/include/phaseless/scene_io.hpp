#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "phaseless/scene.hpp"

namespace phaseless {

/// Scene description file.
///
/// {
///   "wavenumber": 2.0,
///   "scatterer": {"type": "circle" | "ellipse" | "kite" | "medium_disk" |
///                         "medium_raster" | "medium_grid" | "none",
///                 "params": {...}},
///   "measurement": {"kind": "circle" | "line_segment", "params": {...}},
///   "directions": {"count": 64, "d0_angle": 4.712388980384690},
///   "support_bound": {"center": [0, 0], "radius": 1.5}          (optional)
/// }
///
/// Obstacle params: "center": [x1, x2]; "radius" (circle) or "semi_axes"
/// (ellipse); "bc": "sound_soft" | "sound_hard" | "impedance"; "eta": a
/// number, [re, im], or {"mean": [re, im], "cos_terms": [[m, re, im], ...]};
/// "nodes" (default 128).
///
/// Medium params: "grid": {"cells": N, "center": [x1, x2], "half_width": L}
/// plus either "center", "radius", "index" (medium_disk), "file" (a CSV
/// raster relative to the scene file, medium_raster) or "values" (a list of
/// N² [re, im] pairs, medium_grid).
///
/// Measurement params: circle {"center", "radius", "count"}; line_segment
/// {"height", "x1_begin", "x1_end", "count"}.
///
/// Lengths are in user units and angles in radians. Throws ParseError on
/// malformed input and GeometryError on invariant violations.
Scene parse_scene(std::string_view json_text, const std::filesystem::path& base_dir = {});
Scene load_scene(const std::filesystem::path& path);

/// Canonical JSON; media are written inline as "medium_grid".
std::string scene_to_json(const Scene& scene);

/// FNV-1a hash of the canonical JSON.
std::uint64_t scene_hash(const Scene& scene);

std::string measurement_to_json(const MeasurementSet& measurement);
MeasurementSet parse_measurement(std::string_view json_text);

/// Medium raster: N lines of 2N comma-separated numbers
/// re(n(i1, i2)), im(n(i1, i2)) for i1 = 0..N−1, line i2 = 0..N−1.
MediumIndex load_medium_raster(const std::filesystem::path& path, int cells, Vec2 center, double half_width);
void write_medium_raster(const MediumIndex& medium, const std::filesystem::path& path);

}  // namespace phaseless
