#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rss/exact.hpp"
#include "rss/mps.hpp"
#include "rss/search.hpp"

namespace rss {

struct CvConfig {
  int folds = 10;
  double trim_alpha = 0.25;
  std::uint64_t seed = 0;
  ParameterGrid grid;
  int threads = 1;
  double epsilon = 1e-8;
  int max_iterations = 10000;
  int max_sweeps = 50;
};

struct CvCell {
  SparsityParams params;
  double mean_error = 0.0;                // across folds where evaluated
  std::vector<double> fold_errors;        // NaN where skipped
  std::vector<std::uint8_t> fold_skipped; // infeasible for that fold
  bool evaluated = false;                 // at least one fold contributed
};

struct CvResult {
  std::vector<CvCell> cells;  // grid order, k outer
  SparsityParams chosen;
};

/// Mean of the squares of the floor((1-alpha)*n) absolutely-smallest errors
/// (at least one is always kept). alpha = 0 gives the plain mean square error.
double trimmed_prediction_error(const Eigen::VectorXd& errors, double alpha);

/// Deterministic fold labels in {0,...,folds-1} for each observation.
std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed);

/// K-fold cross-validation of the (k, h) grid with trimmed prediction error.
/// Each fold re-standardizes its training split with the dataset's mode and
/// scores held-out predictions on the original scale. Grid h values are
/// rescaled to the fold's training size so trimming fractions carry over;
/// cells infeasible after rescaling are skipped and flagged. Ties in mean
/// error (within 1e-9 relative) resolve to the smallest k, then largest h.
CvResult cross_validate(const Dataset& dataset, const CvConfig& config);

struct FitOptions {
  ParameterGrid grid;
  std::optional<CvConfig> cv;
  std::optional<SparsityParams> cell;  // target cell when not cross-validating
  double tau = 1.5;
  bool run_exact = false;
  std::optional<std::string> export_path;
  mps::Formulation formulation = mps::Formulation::improved;
  StandardizationMode mode = StandardizationMode::robust;
  double epsilon = 1e-8;
  int max_iterations = 10000;
  int max_sweeps = 50;
  int threads = 1;
  std::int64_t max_enumeration = 20'000'000;
};

struct FitResult {
  Solution solution;            // standardized scale
  double intercept = 0.0;       // original scale
  Eigen::VectorXd beta_original;
  SparsityParams chosen;
  std::optional<CvResult> cv;
  Dataset dataset;              // standardized working data
};

/// Full pipeline: standardize, optionally cross-validate (k, h), run
/// neighborhood search over the grid, take the chosen cell, optionally refine
/// it with the exact oracle and/or export the mixed-integer program with warm
/// start and tau-scaled bounds. Coefficients are returned on the original
/// scale. Without cv, the target cell must be given explicitly or the grid
/// must have exactly one valid cell.
FitResult fit(const Eigen::MatrixXd& raw_x, const Eigen::VectorXd& raw_y,
              const FitOptions& options);

/// K = {0,...,min(k_max, n-1, p)}, H = {75%, 80%, ..., 100% of n}
/// (round half up).
ParameterGrid default_parameter_grid(int n, int p, int k_max = 20);

int round_half_up(double x);

/// Heuristic big-M values for an export: tau-scaled norms of the warm-start
/// solution with positive fallbacks when a block is empty.
mps::MioExport make_export(const Dataset& dataset, const Solution& solution,
                           mps::Formulation formulation, double tau);

}  // namespace rss
