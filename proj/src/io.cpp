#include "smoothcover/io.hpp"

#include <fstream>
#include <sstream>

#include "smoothcover/error.hpp"

namespace smoothcover {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const std::string& key) {
  if (!j.is_object()) throw ConfigError("expected a JSON object holding '" + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError("missing field '" + key + "'");
  return *it;
}

std::vector<bool> json_flags(const nlohmann::json& j, const std::string& key, std::size_t n) {
  if (!j.contains(key)) return std::vector<bool>(n, true);
  const auto& a = j[key];
  if (!a.is_array() || a.size() != n) throw ConfigError("field '" + key + "' must be an array of " + std::to_string(n) + " booleans");
  std::vector<bool> out;
  for (const auto& e : a) {
    if (!e.is_boolean()) throw ConfigError("field '" + key + "' must hold booleans");
    out.push_back(e.get<bool>());
  }
  return out;
}

Eigen::MatrixXd json_matrix(const nlohmann::json& j, const std::string& key) {
  const auto& rows = field(j, key);
  if (!rows.is_array() || rows.empty()) throw ConfigError("field '" + key + "' must be a nonempty array of rows");
  const std::size_t n = rows.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n) throw ConfigError("field '" + key + "' must be square");
    for (std::size_t c = 0; c < n; ++c) {
      if (!rows[r][c].is_number()) throw ConfigError("field '" + key + "' has a non-numeric entry");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
    }
  }
  return m;
}

}  // namespace

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

nlohmann::json load_json_arg(const std::string& value) {
  if (!value.empty() && value.front() == '{') {
    try {
      return nlohmann::json::parse(value);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("inline JSON: ") + e.what());
    }
  }
  return load_json(value);
}

double json_double(const nlohmann::json& j, const std::string& key) {
  const auto& v = field(j, key);
  if (!v.is_number()) throw ConfigError("field '" + key + "' must be a number");
  return v.get<double>();
}

double json_double(const nlohmann::json& j, const std::string& key, double fallback) {
  return j.contains(key) ? json_double(j, key) : fallback;
}

std::uint64_t json_u64(const nlohmann::json& j, const std::string& key) {
  const auto& v = field(j, key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError("field '" + key + "' must be a nonnegative integer");
}

std::uint64_t json_u64(const nlohmann::json& j, const std::string& key, std::uint64_t fallback) {
  return j.contains(key) ? json_u64(j, key) : fallback;
}

Point json_point(const nlohmann::json& j, const std::string& key) {
  const auto& v = field(j, key);
  if (!v.is_array() || v.empty()) throw ConfigError("field '" + key + "' must be a nonempty array of numbers");
  Point p;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError("field '" + key + "' must hold numbers");
    p.push_back(e.get<double>());
  }
  return p;
}

ConvexBody body_from_json(const nlohmann::json& j) {
  const auto& type_v = field(j, "type");
  if (!type_v.is_string()) throw ConfigError("body field 'type' must be a string");
  const std::string type = type_v.get<std::string>();
  auto build = [&]() -> ConvexBody {
    if (type == "box") {
      Point lo = json_point(j, "lower");
      Point hi = json_point(j, "upper");
      const std::size_t n = lo.size();
      return ConvexBody::box(std::move(lo), std::move(hi), json_flags(j, "lower_closed", n),
                             json_flags(j, "upper_closed", n));
    }
    if (type == "half_open_box") return ConvexBody::half_open_box(json_point(j, "lower"), json_point(j, "upper"));
    if (type == "ball") {
      Point c = j.contains("center") ? json_point(j, "center") : Point(json_u64(j, "n"), 0.0);
      return ConvexBody::ball(std::move(c), json_double(j, "radius"));
    }
    if (type == "ellipsoid") return ConvexBody::ellipsoid(json_point(j, "center"), json_matrix(j, "form"));
    throw ConfigError("unknown body type '" + type + "'");
  };
  ConvexBody body = build();
  if (j.contains("scale")) body = body.dilate(json_double(j, "scale"));
  return body;
}

Lattice lattice_from_json(const nlohmann::json& j) {
  Lattice lattice = [&] {
    if (j.contains("basis")) return Lattice(json_matrix(j, "basis"));
    const auto& type_v = field(j, "type");
    if (!type_v.is_string() || type_v.get<std::string>() != "integer") {
      throw ConfigError("lattice needs 'basis' or type 'integer'");
    }
    return Lattice::integer(json_u64(j, "n"));
  }();
  if (j.contains("scale")) lattice = lattice.scaled(json_double(j, "scale"));
  return lattice;
}

}  // namespace smoothcover
