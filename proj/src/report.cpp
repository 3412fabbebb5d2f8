#include "smoothcover/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include "smoothcover/error.hpp"

namespace smoothcover {

namespace {

void emit(const nlohmann::json& v, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_double(d) : "null";
      return;
    }
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + ": ";
        emit(it.value(), depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(v[i], depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    default:
      out += v.dump();
  }
}

std::string csv_cell(const nlohmann::json& v) {
  switch (v.type()) {
    case nlohmann::json::value_t::null:
      return "";
    case nlohmann::json::value_t::number_float:
      return format_double(v.get<double>());
    case nlohmann::json::value_t::string: {
      const std::string s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + "\"";
    }
    default:
      return v.dump();
  }
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

void Table::add(nlohmann::json row) {
  if (!row.is_object() || row.size() != columns.size()) throw Error("table row does not match the columns");
  for (const std::string& c : columns) {
    if (!row.contains(c)) throw Error("table row is missing column " + c);
  }
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_text(const nlohmann::json& value) {
  std::string out;
  emit(value, 0, out);
  out += "\n";
  return out;
}

std::string csv_text(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ",";
    out += table.columns[i];
  }
  out += "\n";
  for (const nlohmann::json& row : table.rows) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      if (i) out += ",";
      out += csv_cell(row.at(table.columns[i]));
    }
    out += "\n";
  }
  return out;
}

nlohmann::json report_json(const Report& report) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["kind"] = report.kind;
  j["config"] = report.config;
  j["columns"] = report.table.columns;
  j["rows"] = report.table.rows;
  j["summary"] = report.summary;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing " + path);
}

void emit_report(const Report& report, Format format, const std::string& path) {
  write_text(path, format == Format::csv ? csv_text(report.table) : json_text(report_json(report)));
}

void validate_report(const nlohmann::json& r) {
  auto fail = [](const std::string& what) { throw ConfigError("invalid report: " + what); };
  if (!r.is_object()) fail("not an object");
  const std::set<std::string> keys{"schema_version", "kind", "config", "columns", "rows", "summary"};
  for (const std::string& k : keys) {
    if (!r.contains(k)) fail("missing key " + k);
  }
  for (auto it = r.begin(); it != r.end(); ++it) {
    if (!keys.count(it.key())) fail("unexpected key " + it.key());
  }
  if (!r["schema_version"].is_number_integer() || r["schema_version"].get<int>() != kReportSchemaVersion) {
    fail("unsupported schema_version");
  }
  if (!r["kind"].is_string()) fail("kind is not a string");
  if (!r["config"].is_object()) fail("config is not an object");
  if (!r["summary"].is_object()) fail("summary is not an object");
  if (!r["columns"].is_array()) fail("columns is not an array");
  std::set<std::string> columns;
  for (const auto& c : r["columns"]) {
    if (!c.is_string()) fail("column name is not a string");
    if (!columns.insert(c.get<std::string>()).second) fail("repeated column " + c.get<std::string>());
  }
  if (!r["rows"].is_array()) fail("rows is not an array");
  for (const auto& row : r["rows"]) {
    if (!row.is_object() || row.size() != columns.size()) fail("row does not match columns");
    for (const std::string& c : columns) {
      if (!row.contains(c)) fail("row missing column " + c);
      if (row[c].is_object() || row[c].is_array()) fail("row cell " + c + " is not a scalar");
    }
  }
  if (columns.count("stream_id")) {
    for (const auto& row : r["rows"]) {
      if (!row["stream_id"].is_number_unsigned() && !row["stream_id"].is_number_integer()) {
        fail("stream_id is not an integer");
      }
    }
  }
  if (r["summary"].contains("trials") && columns.count("trial")) {
    std::set<std::int64_t> trials;
    for (const auto& row : r["rows"]) trials.insert(row["trial"].get<std::int64_t>());
    if (trials.size() != r["summary"]["trials"].get<std::size_t>()) fail("trial count does not match summary");
  }
}

}  // namespace smoothcover
