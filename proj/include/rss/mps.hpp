#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rss/core.hpp"

namespace rss::mps {

enum class Formulation {
  basic,     // quadratic objective over (beta, eta) directly
  improved,  // auxiliary fitted values xi = X beta + eta; quadratic in xi only
};

struct MioExport {
  Formulation formulation = Formulation::improved;
  double big_m_beta = 0.0;
  double big_m_eta = 0.0;  // required when h < n
  double big_m_xi = 0.0;   // required for the improved formulation
  std::optional<Solution> warm_start;
  double tau = std::numeric_limits<double>::quiet_NaN();  // recorded in header
};

/// Writes the mixed-integer quadratic program for the dataset and budgets as
/// an MPS file (QMATRIX extension, objective = c'x + (1/2) x'Qx + constant,
/// constant encoded as the negated RHS of the objective row). When h = n the
/// eta block and its binaries are omitted. A warm start, when present, is
/// written to `<path>.start` as `name value` lines.
void export_mps(const Dataset& dataset, const SparsityParams& params,
                const MioExport& mio, const std::string& path);

// ---- reader side (round-trips and feasibility checks) ----

struct Row {
  std::string name;
  char sense = 'N';  // N, L, G, E
  double rhs = 0.0;
};

struct Column {
  std::string name;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  bool integer = false;
};

struct Entry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct Model {
  std::string name;
  std::vector<Row> rows;  // excludes the objective row
  std::vector<Column> columns;
  std::vector<Entry> entries;              // constraint matrix
  std::map<int, double> objective_linear;  // col -> c
  std::vector<Entry> objective_quadratic;  // full Q, obj += (1/2) x'Qx
  double objective_constant = 0.0;

  int row_index(const std::string& name) const;
  int col_index(const std::string& name) const;
  int count_rows(char sense) const;
  int count_integer_columns() const;
};

Model read_mps(const std::string& path);

/// `name value` lines, as written next to an export.
std::map<std::string, double> read_warm_start(const std::string& path);

/// Checks bounds, integrality and every row at the given point. Missing
/// variables default to zero. On failure, `why` (if set) names the first
/// violated constraint.
bool is_feasible(const Model& model, const std::map<std::string, double>& point,
                 double tol = 1e-6, std::string* why = nullptr);

double eval_objective(const Model& model,
                      const std::map<std::string, double>& point);

}  // namespace rss::mps
