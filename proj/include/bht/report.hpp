#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bht/harness.hpp"

namespace bht {

using json = nlohmann::json;

// 17 significant digits; "0" for either zero, "nan" / "inf" / "-inf" for non-finite values
std::string format_double(double v);

// RFC 4180: comma separated, CRLF line ends, fields quoted when they contain , " CR or LF
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  void add_row(std::vector<std::string> row);  // must match the header width
  std::string str() const;
  // column index by name; throws when absent
  std::size_t column(const std::string& name) const;

  static CsvTable parse(const std::string& text);  // throws std::runtime_error on malformed input

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// write to a sibling temp file, then rename over path; throws std::runtime_error when unwritable
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// one assertion inside a report
struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "<", ">" or "within" (|value| <= threshold)
  bool pass = false;
};
Check make_check(const std::string& name, double value, const std::string& relation, double threshold);

// {"scan", "params", "cells": [{"axis", "value"}], "slope", "r2", "pass", "tolerance"} plus "checks"
struct ScanReport {
  std::string scan;
  json params = json::object();
  std::vector<double> axis;
  std::vector<double> values;
  std::optional<double> slope;  // absent when no fit was made
  std::optional<double> r2;
  double tolerance = 0.0;
  std::vector<Check> checks;

  bool pass() const;  // every check passes (and there is at least one)
  json to_json() const;
};
ScanReport scan_report(const DecayScanResult& scan, json params, double tolerance);

// standalone SVG of log2(value) against axis: axes, markers, least-squares line, slope label.
// Nonpositive values are left out. Throws std::invalid_argument on an empty scan.
std::string render_svg(const DecayScanResult& scan);
void emit_svg(const DecayScanResult& scan, const std::string& path);

}  // namespace bht
