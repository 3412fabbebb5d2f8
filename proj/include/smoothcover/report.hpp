#pragma once

// Tabular and JSON reports with byte-stable formatting: object keys sorted, floats
// with 17 significant digits, rows in insertion order.

#include <json.hpp>
#include <string>
#include <vector>

namespace smoothcover {

enum class Format { csv, json };

Format parse_format(const std::string& name);

struct Table {
  std::vector<std::string> columns;
  /// Each row is an object with exactly the keys in `columns`.
  std::vector<nlohmann::json> rows;

  void add(nlohmann::json row);
};

struct Report {
  /// Experiment mode or CLI command that produced the report.
  std::string kind;
  nlohmann::json config = nlohmann::json::object();
  Table table;
  nlohmann::json summary = nlohmann::json::object();
};

inline constexpr int kReportSchemaVersion = 1;

/// %.17g; non-finite values become "nan", "inf" or "-inf".
std::string format_double(double v);

/// Deterministic JSON text (two-space indent, trailing newline).
std::string json_text(const nlohmann::json& value);
std::string csv_text(const Table& table);

nlohmann::json report_json(const Report& report);

/// Writes text to `path`; "-" is standard output. Failures are Error with the path.
void write_text(const std::string& path, const std::string& text);

/// CSV writes the table only; JSON writes the whole report.
void emit_report(const Report& report, Format format, const std::string& path);

/// Structural check of a report produced by report_json; throws ConfigError.
void validate_report(const nlohmann::json& report);

}  // namespace smoothcover
