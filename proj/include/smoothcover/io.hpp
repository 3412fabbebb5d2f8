#pragma once

// JSON descriptions of bodies, lattices and residue sets.
//
// Body:    {"type": "box", "lower": [..], "upper": [..], "lower_closed": [..], "upper_closed": [..]}
//          {"type": "half_open_box", "lower": [..], "upper": [..]}
//          {"type": "ball", "center": [..] | "n": k, "radius": r}
//          {"type": "ellipsoid", "center": [..], "form": [[..], ..]}
//          optional "scale": alpha > 0 dilates about the origin.
// Lattice: {"basis": [[..], ..]} (rows of g; generators are its columns) or
//          {"type": "integer", "n": k}; optional "scale".

#include <json.hpp>
#include <string>

#include "smoothcover/geometry.hpp"
#include "smoothcover/lattice.hpp"

namespace smoothcover {

/// Parses a file; errors name the path.
nlohmann::json load_json(const std::string& path);

/// Accepts inline JSON text (starting with '{') or a file path.
nlohmann::json load_json_arg(const std::string& value);

ConvexBody body_from_json(const nlohmann::json& j);
Lattice lattice_from_json(const nlohmann::json& j);

/// Typed field access with ConfigError naming the field.
double json_double(const nlohmann::json& j, const std::string& key);
double json_double(const nlohmann::json& j, const std::string& key, double fallback);
std::uint64_t json_u64(const nlohmann::json& j, const std::string& key);
std::uint64_t json_u64(const nlohmann::json& j, const std::string& key, std::uint64_t fallback);
Point json_point(const nlohmann::json& j, const std::string& key);

}  // namespace smoothcover
