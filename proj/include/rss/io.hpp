#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "json.hpp"

namespace rss::io {

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

/// Strict numeric CSV: one header row, comma separators, finite decimal or
/// scientific values. Parse failures report the offending row and column;
/// NaN/Inf tokens are rejected.
CsvTable read_numeric_csv(const std::string& path);

void write_numeric_csv(const std::string& path,
                       const std::vector<std::string>& header,
                       const Eigen::MatrixXd& values);

/// Serializes with floating-point numbers at 17 significant digits so values
/// survive a parse round-trip bit-exactly. Keys keep insertion order.
std::string dump_json(const nlohmann::ordered_json& value, int indent = 2);

/// dump_json to `path` via a temp file + rename.
void write_json(const std::string& path, const nlohmann::ordered_json& value);

/// Atomic text write (temp file + rename).
void write_text(const std::string& path, const std::string& content);

std::string format_double(double v);  // %.17g

}  // namespace rss::io
