#include "rss/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "rss/errors.hpp"
#include "rss/parallel.hpp"
#include "rss/random.hpp"

namespace rss {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

double trimmed_prediction_error(const Eigen::VectorXd& errors, double alpha) {
  const int n = static_cast<int>(errors.size());
  if (n < 1) throw contract_error("trimmed prediction error of empty vector");
  if (alpha < 0.0 || alpha > 0.5)
    throw contract_error("alpha must lie in [0, 0.5]");
  int keep = std::max(1, static_cast<int>(std::floor((1.0 - alpha) * n)));
  std::vector<double> abs_errors(n);
  for (int i = 0; i < n; ++i) abs_errors[i] = std::abs(errors[i]);
  std::nth_element(abs_errors.begin(), abs_errors.begin() + (keep - 1),
                   abs_errors.end());
  double total = 0.0;
  for (int i = 0; i < keep; ++i) total += abs_errors[i] * abs_errors[i];
  return total / keep;
}

std::vector<int> fold_assignment(int n, int folds, std::uint64_t seed) {
  if (folds < 2) throw contract_error("cross-validation needs >= 2 folds");
  if (n < folds) throw contract_error("need at least one observation per fold");
  Rng rng(seed);
  std::vector<int> perm = rng.permutation(n);
  std::vector<int> assignment(n);
  for (int t = 0; t < n; ++t) assignment[perm[t]] = t % folds;
  return assignment;
}

namespace {

struct FoldGrid {
  ParameterGrid grid;                 // fold-feasible, deduplicated h values
  std::vector<int> h_map;             // original h index -> fold h index or -1
  std::vector<std::uint8_t> k_valid;  // original k feasible for fold size
};

// Original h values are fractions of n in disguise; rescale them to the
// training size so each fold trims the same share of its own observations.
FoldGrid map_grid(const ParameterGrid& grid, int n, int n_train, int p) {
  FoldGrid out;
  out.grid.k_values = grid.k_values;
  out.k_valid.assign(grid.k_values.size(), 1);
  for (std::size_t i = 0; i < grid.k_values.size(); ++i)
    if (grid.k_values[i] > std::min(n_train - 1, p)) out.k_valid[i] = 0;

  std::vector<int> mapped(grid.h_values.size());
  std::set<int> unique;
  for (std::size_t j = 0; j < grid.h_values.size(); ++j) {
    int h = round_half_up(static_cast<double>(grid.h_values[j]) * n_train / n);
    h = std::clamp(h, 0, n_train);
    mapped[j] = h;
    unique.insert(h);
  }
  out.grid.h_values.assign(unique.begin(), unique.end());
  out.h_map.resize(grid.h_values.size());
  for (std::size_t j = 0; j < grid.h_values.size(); ++j) {
    auto it = std::find(out.grid.h_values.begin(), out.grid.h_values.end(),
                        mapped[j]);
    out.h_map[j] = static_cast<int>(it - out.grid.h_values.begin());
  }
  return out;
}

}  // namespace

CvResult cross_validate(const Dataset& dataset, const CvConfig& config) {
  const int n = dataset.n();
  const int p = dataset.p();
  config.grid.validate(n, p);
  if (config.trim_alpha < 0.0 || config.trim_alpha > 0.5)
    throw contract_error("trim_alpha must lie in [0, 0.5]");

  const Eigen::MatrixXd raw_x = dataset.raw_x();
  const Eigen::VectorXd raw_y = dataset.raw_y();
  const std::vector<int> folds = fold_assignment(n, config.folds, config.seed);

  const int q = static_cast<int>(config.grid.k_values.size());
  const int r = static_cast<int>(config.grid.h_values.size());
  const int cells = q * r;

  std::vector<std::vector<double>> fold_errors(
      config.folds, std::vector<double>(cells, std::numeric_limits<double>::quiet_NaN()));

  parallel_for(static_cast<std::size_t>(config.folds), config.threads,
               [&](std::size_t f) {
    std::vector<int> train_rows, val_rows;
    for (int i = 0; i < n; ++i)
      (folds[i] == static_cast<int>(f) ? val_rows : train_rows).push_back(i);
    const int n_train = static_cast<int>(train_rows.size());

    Eigen::MatrixXd x_train(n_train, p);
    Eigen::VectorXd y_train(n_train);
    for (int t = 0; t < n_train; ++t) {
      x_train.row(t) = raw_x.row(train_rows[t]);
      y_train[t] = raw_y[train_rows[t]];
    }
    Dataset ds_train = dataset.scaling.mode == StandardizationMode::none
                           ? Dataset::raw(x_train, y_train)
                           : standardize(x_train, y_train, dataset.scaling.mode);

    FoldGrid fold_grid = map_grid(config.grid, n, n_train, p);
    DescentConfig descent;
    descent.epsilon = config.epsilon;
    descent.max_iterations = config.max_iterations;
    descent.lipschitz = estimate_lipschitz(ds_train);
    FitGrid fits = neighborhood_search(ds_train, fold_grid.grid, descent,
                                       config.max_sweeps);

    for (int i = 0; i < q; ++i) {
      if (!fold_grid.k_valid[i]) continue;
      for (int j = 0; j < r; ++j) {
        const Solution* sol = fits.cell(i, fold_grid.h_map[j]);
        if (!sol) continue;  // infeasible after rescaling (k > h)
        OriginalScaleFit orig = unstandardize_solution(*sol, ds_train);
        Eigen::VectorXd errs(val_rows.size());
        for (std::size_t v = 0; v < val_rows.size(); ++v) {
          double pred = orig.intercept + raw_x.row(val_rows[v]).dot(orig.beta);
          errs[static_cast<int>(v)] = raw_y[val_rows[v]] - pred;
        }
        fold_errors[f][i * r + j] =
            trimmed_prediction_error(errs, config.trim_alpha);
      }
    }
  });

  CvResult result;
  result.cells.resize(cells);
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < r; ++j) {
      CvCell& cell = result.cells[i * r + j];
      cell.params = {config.grid.k_values[i], config.grid.h_values[j]};
      cell.fold_errors.resize(config.folds);
      cell.fold_skipped.resize(config.folds);
      double total = 0.0;
      int used = 0;
      for (int f = 0; f < config.folds; ++f) {
        double e = fold_errors[f][i * r + j];
        cell.fold_errors[f] = e;
        cell.fold_skipped[f] = std::isnan(e) ? 1 : 0;
        if (!std::isnan(e)) {
          total += e;
          ++used;
        }
      }
      cell.evaluated = used > 0;
      cell.mean_error =
          used > 0 ? total / used : std::numeric_limits<double>::quiet_NaN();
    }
  }

  // smallest mean error; near-ties (1e-9 relative) go to the smallest k,
  // then the largest h, so exact-fit plateaus resolve to the sparser model
  const CvCell* best = nullptr;
  for (const auto& cell : result.cells) {
    if (!cell.evaluated) continue;
    if (!best) {
      best = &cell;
      continue;
    }
    double tol = 1e-9 * std::max(1.0, std::abs(best->mean_error));
    if (cell.mean_error < best->mean_error - tol) {
      best = &cell;
    } else if (std::abs(cell.mean_error - best->mean_error) <= tol) {
      if (cell.params.k < best->params.k ||
          (cell.params.k == best->params.k && cell.params.h > best->params.h))
        best = &cell;
    }
  }
  if (!best) throw contract_error("no grid cell was feasible in any fold");
  result.chosen = best->params;
  return result;
}

ParameterGrid default_parameter_grid(int n, int p, int k_max) {
  ParameterGrid grid;
  int top = std::min({k_max, n - 1, p});
  for (int k = 0; k <= top; ++k) grid.k_values.push_back(k);
  std::set<int> hs;
  for (double f : {0.75, 0.80, 0.85, 0.90, 0.95, 1.00})
    hs.insert(std::clamp(round_half_up(f * n), 0, n));
  grid.h_values.assign(hs.begin(), hs.end());
  return grid;
}

mps::MioExport make_export(const Dataset& dataset, const Solution& solution,
                           mps::Formulation formulation, double tau) {
  mps::MioExport mio;
  mio.formulation = formulation;
  mio.tau = tau;
  mio.warm_start = solution;
  double beta_inf =
      solution.beta.size() ? solution.beta.cwiseAbs().maxCoeff() : 0.0;
  double eta_inf =
      solution.eta.size() ? solution.eta.cwiseAbs().maxCoeff() : 0.0;
  Eigen::VectorXd residual = dataset.y - dataset.x * solution.beta;
  double residual_inf = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
  Eigen::VectorXd fitted = dataset.x * solution.beta + solution.eta;
  double fitted_inf = fitted.size() ? fitted.cwiseAbs().maxCoeff() : 0.0;
  double y_inf = dataset.y.size() ? dataset.y.cwiseAbs().maxCoeff() : 0.0;

  // positive fallbacks keep the export valid when a block is all-zero
  mio.big_m_beta = tau * (beta_inf > 0.0 ? beta_inf : 1.0);
  mio.big_m_eta = tau * (eta_inf > 0.0 ? eta_inf
                         : residual_inf > 0.0 ? residual_inf
                                              : 1.0);
  mio.big_m_xi = tau * std::max({fitted_inf, y_inf, 1.0});
  return mio;
}

FitResult fit(const Eigen::MatrixXd& raw_x, const Eigen::VectorXd& raw_y,
              const FitOptions& options) {
  Dataset dataset = options.mode == StandardizationMode::none
                        ? Dataset::raw(raw_x, raw_y)
                        : standardize(raw_x, raw_y, options.mode);
  const int n = dataset.n();
  const int p = dataset.p();
  options.grid.validate(n, p);

  FitResult result;
  result.dataset = dataset;

  if (options.cv) {
    CvConfig cv = *options.cv;
    if (cv.grid.k_values.empty()) cv.grid = options.grid;
    cv.epsilon = options.epsilon;
    cv.max_iterations = options.max_iterations;
    cv.max_sweeps = options.max_sweeps;
    cv.threads = options.threads;
    result.cv = cross_validate(dataset, cv);
    result.chosen = result.cv->chosen;
  } else if (options.cell) {
    result.chosen = *options.cell;
  } else {
    int valid = 0;
    SparsityParams only;
    for (int k : options.grid.k_values)
      for (int h : options.grid.h_values)
        if (k <= h) {
          only = {k, h};
          ++valid;
        }
    if (valid != 1)
      throw contract_error(
          "fit needs cross-validation, an explicit (k, h), or a single-cell "
          "grid");
    result.chosen = only;
  }
  result.chosen.validate(n, p);

  DescentConfig descent;
  descent.epsilon = options.epsilon;
  descent.max_iterations = options.max_iterations;
  descent.lipschitz = estimate_lipschitz(dataset);
  FitGrid fits = neighborhood_search(dataset, options.grid, descent,
                                     options.max_sweeps, options.threads);
  const Solution* cell = fits.find(result.chosen);
  if (!cell)
    throw contract_error("chosen cell is absent from the parameter grid");
  result.solution = *cell;

  if (options.run_exact) {
    ExactConfig exact;
    exact.max_support_enumeration = options.max_enumeration;
    exact.threads = options.threads;
    Solution refined = solve_exact(dataset, result.chosen, exact);
    if (refined.objective <= result.solution.objective)
      result.solution = std::move(refined);
  }

  if (options.export_path) {
    mps::MioExport mio =
        make_export(dataset, result.solution, options.formulation, options.tau);
    mps::export_mps(dataset, result.chosen, mio, *options.export_path);
  }

  OriginalScaleFit orig = unstandardize_solution(result.solution, dataset);
  result.intercept = orig.intercept;
  result.beta_original = std::move(orig.beta);
  return result;
}

}  // namespace rss
