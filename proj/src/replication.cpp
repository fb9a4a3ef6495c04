#include <chrono>

#include "rss/random.hpp"
#include "rss/synthetic.hpp"

namespace rss::sim {

namespace {

EstimatorRun fit_and_score(const SyntheticInstance& instance,
                           const ReplicationConfig& config,
                           const ParameterGrid& grid,
                           StandardizationMode mode, double trim_alpha,
                           std::uint64_t cv_seed, const char* name) {
  auto start = std::chrono::steady_clock::now();

  FitOptions options;
  options.mode = mode;
  options.grid = grid;
  options.epsilon = config.epsilon;
  options.max_sweeps = config.max_sweeps;
  options.max_iterations = config.max_iterations;
  options.threads = config.threads;
  CvConfig cv;
  cv.folds = config.folds;
  cv.trim_alpha = trim_alpha;
  cv.seed = cv_seed;
  options.cv = cv;

  FitResult fitted = fit(instance.x, instance.y, options);

  EstimatorRun run;
  run.estimator = name;
  run.chosen = fitted.chosen;
  run.metrics = f1_score(fitted.beta_original, instance.beta0);
  run.metrics.relative_prediction_error = relative_prediction_error(
      fitted.beta_original, fitted.intercept, instance);
  run.runtime_s = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return run;
}

}  // namespace

std::vector<EstimatorRun> run_replication(const ReplicationConfig& config,
                                          std::uint64_t seed) {
  SimDesign design = config.design;
  design.seed = seed;
  SyntheticInstance instance = generate(design);

  ParameterGrid best_subsets_grid;
  best_subsets_grid.k_values = config.grid.k_values;
  best_subsets_grid.h_values = {design.n};

  std::vector<EstimatorRun> runs;
  runs.push_back(fit_and_score(instance, config, config.grid,
                               StandardizationMode::robust, config.trim_alpha,
                               Rng::derive_seed(seed, 101), "robust-subsets"));
  runs.push_back(fit_and_score(instance, config, best_subsets_grid,
                               StandardizationMode::classical, 0.0,
                               Rng::derive_seed(seed, 102), "best-subsets"));
  return runs;
}

}  // namespace rss::sim
