#pragma once

#include <json.hpp>

#include "phaseless/scene.hpp"

namespace phaseless::detail {

using Json = nlohmann::ordered_json;

Json measurement_json(const MeasurementSet& m);
MeasurementSet measurement_from_json(const Json& j);
Json scene_json(const Scene& scene);

Json vec_json(Vec2 v);
Json complex_json(Complex c);

/// Field access that converts nlohmann errors into ParseError naming `key`.
const Json& require(const Json& j, const char* key);
double get_double(const Json& j, const char* key);
int get_int(const Json& j, const char* key);
Vec2 get_vec(const Json& j, const char* key);
Complex as_complex(const Json& j, const char* what);

}  // namespace phaseless::detail
