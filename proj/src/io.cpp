#include "rss/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rss/errors.hpp"

namespace rss::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.push_back(trim(current));
  return fields;
}

}  // namespace

CsvTable read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw contract_error("CSV is empty: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  CsvTable table;
  table.header = split_csv_line(line);
  const std::size_t cols = table.header.size();
  if (cols == 0) throw contract_error("CSV has an empty header: " + path);

  std::vector<std::vector<double>> rows;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != cols) {
      std::ostringstream msg;
      msg << "CSV row " << line_number << " has " << fields.size()
          << " fields, expected " << cols;
      throw contract_error(msg.str());
    }
    std::vector<double> row(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string& tok = fields[c];
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      bool ok = ec == std::errc() && ptr == tok.data() + tok.size();
      if (!ok || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "CSV value '" << tok << "' at row " << line_number << ", column "
            << (c + 1) << " is not a finite number";
        throw contract_error(msg.str());
      }
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw contract_error("CSV has no data rows: " + path);

  table.values.resize(static_cast<int>(rows.size()), static_cast<int>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      table.values(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  return table;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw io_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("cannot rename " + tmp + " to " + path);
}

void write_numeric_csv(const std::string& path,
                       const std::vector<std::string>& header,
                       const Eigen::MatrixXd& values) {
  if (header.size() != static_cast<std::size_t>(values.cols()))
    throw contract_error("CSV header width does not match data");
  std::ostringstream out;
  for (std::size_t c = 0; c < header.size(); ++c)
    out << (c ? "," : "") << header[c];
  out << "\n";
  for (int r = 0; r < values.rows(); ++r) {
    for (int c = 0; c < values.cols(); ++c)
      out << (c ? "," : "") << format_double(values(r, c));
    out << "\n";
  }
  write_text(path, out.str());
}

namespace {

void dump_value(const nlohmann::ordered_json& value, std::ostringstream& out,
                int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (value.type()) {
    case nlohmann::json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << nlohmann::json(it.key()).dump() << ": ";
        dump_value(it.value(), out, indent, depth + 1);
      }
      out << "\n" << close_pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out << ",\n";
        first = false;
        out << pad;
        dump_value(item, out, indent, depth + 1);
      }
      out << "\n" << close_pad << "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      double v = value.get<double>();
      if (!std::isfinite(v))
        throw contract_error("cannot serialize non-finite number to JSON");
      out << format_double(v);
      return;
    }
    default:
      out << value.dump();
      return;
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& value, int indent) {
  std::ostringstream out;
  dump_value(value, out, indent, 0);
  out << "\n";
  return out.str();
}

void write_json(const std::string& path, const nlohmann::ordered_json& value) {
  write_text(path, dump_json(value));
}

}  // namespace rss::io
