#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "rss/errors.hpp"
#include "rss/mps.hpp"

namespace rss::mps {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

double parse_value(const std::string& tok, const std::string& context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
    throw io_error("bad numeric value '" + tok + "' in " + context);
  return v;
}

struct Index {
  std::unordered_map<std::string, int> map;
  int lookup(const std::string& name, const char* what) const {
    auto it = map.find(name);
    if (it == map.end())
      throw io_error(std::string("unknown ") + what + " name: " + name);
    return it->second;
  }
};

}  // namespace

int Model::row_index(const std::string& row_name) const {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].name == row_name) return static_cast<int>(i);
  return -1;
}

int Model::col_index(const std::string& col_name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == col_name) return static_cast<int>(i);
  return -1;
}

int Model::count_rows(char sense) const {
  int count = 0;
  for (const auto& r : rows)
    if (r.sense == sense) ++count;
  return count;
}

int Model::count_integer_columns() const {
  int count = 0;
  for (const auto& c : columns)
    if (c.integer) ++count;
  return count;
}

Model read_mps(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open MPS file: " + path);

  Model model;
  Index row_ix, col_ix;
  std::string objective_row;
  enum Section { none, rows, columns, rhs, ranges, bounds, qmatrix, done };
  Section section = none;
  bool integer_block = false;
  const double inf = std::numeric_limits<double>::infinity();

  auto ensure_column = [&](const std::string& name) {
    auto it = col_ix.map.find(name);
    if (it != col_ix.map.end()) return it->second;
    int idx = static_cast<int>(model.columns.size());
    Column col;
    col.name = name;
    col.integer = integer_block;
    model.columns.push_back(col);
    col_ix.map.emplace(name, idx);
    return idx;
  };

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    bool section_header = !std::isspace(static_cast<unsigned char>(line[0]));
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    if (section_header) {
      const std::string& head = tokens[0];
      if (head == "NAME") {
        if (tokens.size() > 1) model.name = tokens[1];
      } else if (head == "ROWS") {
        section = rows;
      } else if (head == "COLUMNS") {
        section = columns;
      } else if (head == "RHS") {
        section = rhs;
      } else if (head == "RANGES") {
        section = ranges;
      } else if (head == "BOUNDS") {
        section = bounds;
      } else if (head == "QMATRIX" || head == "QUADOBJ") {
        section = qmatrix;
      } else if (head == "ENDATA") {
        section = done;
        break;
      } else {
        throw io_error("unsupported MPS section: " + head);
      }
      continue;
    }

    switch (section) {
      case rows: {
        if (tokens.size() < 2) throw io_error("malformed ROWS line: " + line);
        char sense = static_cast<char>(std::toupper(tokens[0][0]));
        if (sense == 'N') {
          if (objective_row.empty()) objective_row = tokens[1];
          break;
        }
        if (sense != 'L' && sense != 'G' && sense != 'E')
          throw io_error("unknown row sense in line: " + line);
        Row r;
        r.name = tokens[1];
        r.sense = sense;
        row_ix.map.emplace(r.name, static_cast<int>(model.rows.size()));
        model.rows.push_back(r);
        break;
      }
      case columns: {
        if (tokens.size() >= 3 && tokens[1] == "'MARKER'") {
          if (tokens[2] == "'INTORG'") integer_block = true;
          else if (tokens[2] == "'INTEND'") integer_block = false;
          else throw io_error("unknown marker: " + line);
          break;
        }
        if (tokens.size() < 3 || tokens.size() % 2 == 0)
          throw io_error("malformed COLUMNS line: " + line);
        int col = ensure_column(tokens[0]);
        for (std::size_t t = 1; t + 1 < tokens.size(); t += 2) {
          double value = parse_value(tokens[t + 1], "COLUMNS");
          if (tokens[t] == objective_row) {
            model.objective_linear[col] += value;
          } else {
            int row = row_ix.lookup(tokens[t], "row");
            model.entries.push_back({row, col, value});
          }
        }
        break;
      }
      case rhs: {
        if (tokens.size() < 3 || tokens.size() % 2 == 0)
          throw io_error("malformed RHS line: " + line);
        for (std::size_t t = 1; t + 1 < tokens.size(); t += 2) {
          double value = parse_value(tokens[t + 1], "RHS");
          if (tokens[t] == objective_row) {
            model.objective_constant = -value;
          } else {
            model.rows[row_ix.lookup(tokens[t], "row")].rhs = value;
          }
        }
        break;
      }
      case ranges:
        throw io_error("RANGES section is not supported");
      case bounds: {
        if (tokens.size() < 3) throw io_error("malformed BOUNDS line: " + line);
        const std::string& type = tokens[0];
        int col = ensure_column(tokens[2]);
        Column& c = model.columns[col];
        double value =
            tokens.size() > 3 ? parse_value(tokens[3], "BOUNDS") : 0.0;
        if (type == "LO") c.lower = value;
        else if (type == "UP") c.upper = value;
        else if (type == "FX") c.lower = c.upper = value;
        else if (type == "FR") { c.lower = -inf; c.upper = inf; }
        else if (type == "MI") c.lower = -inf;
        else if (type == "PL") c.upper = inf;
        else if (type == "BV") { c.lower = 0.0; c.upper = 1.0; c.integer = true; }
        else if (type == "LI") { c.lower = value; c.integer = true; }
        else if (type == "UI") { c.upper = value; c.integer = true; }
        else throw io_error("unknown bound type: " + type);
        break;
      }
      case qmatrix: {
        if (tokens.size() != 3) throw io_error("malformed QMATRIX line: " + line);
        int a = ensure_column(tokens[0]);
        int b = ensure_column(tokens[1]);
        model.objective_quadratic.push_back(
            {a, b, parse_value(tokens[2], "QMATRIX")});
        break;
      }
      default:
        throw io_error("data line outside any section: " + line);
    }
  }
  if (section != done) throw io_error("missing ENDATA in " + path);
  if (objective_row.empty()) throw io_error("missing objective row in " + path);
  return model;
}

std::map<std::string, double> read_warm_start(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open warm-start file: " + path);
  std::map<std::string, double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*' || line[0] == '#') continue;
    auto tokens = tokenize(line);
    if (tokens.size() != 2)
      throw io_error("malformed warm-start line: " + line);
    values[tokens[0]] = parse_value(tokens[1], "warm start");
  }
  return values;
}

namespace {

double point_value(const Model& model,
                   const std::map<std::string, double>& point, int col) {
  auto it = point.find(model.columns[col].name);
  return it == point.end() ? 0.0 : it->second;
}

}  // namespace

bool is_feasible(const Model& model, const std::map<std::string, double>& point,
                 double tol, std::string* why) {
  auto fail = [&](const std::string& reason) {
    if (why) *why = reason;
    return false;
  };
  for (std::size_t c = 0; c < model.columns.size(); ++c) {
    const Column& col = model.columns[c];
    double v = point_value(model, point, static_cast<int>(c));
    if (v < col.lower - tol || v > col.upper + tol)
      return fail("bound violated for " + col.name);
    if (col.integer && std::abs(v - std::round(v)) > tol)
      return fail("integrality violated for " + col.name);
  }
  std::vector<double> activity(model.rows.size(), 0.0);
  for (const auto& e : model.entries)
    activity[e.row] += e.value * point_value(model, point, e.col);
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    const Row& row = model.rows[r];
    double a = activity[r];
    if (row.sense == 'L' && a > row.rhs + tol)
      return fail("row violated: " + row.name);
    if (row.sense == 'G' && a < row.rhs - tol)
      return fail("row violated: " + row.name);
    if (row.sense == 'E' && std::abs(a - row.rhs) > tol)
      return fail("row violated: " + row.name);
  }
  return true;
}

double eval_objective(const Model& model,
                      const std::map<std::string, double>& point) {
  double value = model.objective_constant;
  for (const auto& [col, coeff] : model.objective_linear)
    value += coeff * point_value(model, point, col);
  for (const auto& e : model.objective_quadratic)
    value += 0.5 * e.value * point_value(model, point, e.row) *
             point_value(model, point, e.col);
  return value;
}

}  // namespace rss::mps
