#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rss/exact.hpp"

namespace rss::sim {

enum class Setting { clean, contam_y, contam_x, contam_xy };

struct SimDesign {
  int n = 100;
  int p = 10;
  int p0 = 5;        // nonzeros in the true coefficient vector
  double snr = 4.0;  // var(x'beta0) / sigma^2
  double rho = 0.35;
  double delta = 0.1;  // per-observation contamination probability
  Setting setting = Setting::clean;
  std::uint64_t seed = 0;
};

struct SyntheticInstance {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd beta0;  // entries in {-1, 0, +1}, exactly p0 nonzero
  double sigma2 = 0.0;
  std::vector<std::uint8_t> y_contaminated;
  std::vector<std::uint8_t> x_contaminated;
  std::vector<std::vector<int>> x_replaced_columns;  // per row
  SimDesign design;
};

/// Covariance with entry (i, j) = rho^|i-j|. Requires |rho| < 1.
Eigen::MatrixXd ar1_covariance(int p, double rho);

/// Draws X with N(0, Sigma) rows, beta0 with p0 random +-1 entries, noise
/// scaled so var(x'beta0)/sigma^2 equals the requested snr, then applies the
/// selected contamination: response noise shifted to N(10*sigma, sigma^2)
/// with probability delta, and/or floor(0.1*p) (>= 1) predictors per selected
/// row replaced by N(10, 1) draws. The response is always generated from the
/// clean predictors before rows are contaminated.
SyntheticInstance generate(const SimDesign& design);

struct MetricsReport {
  double relative_prediction_error = 0.0;
  double model_sparsity = 0.0;
  double f1 = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

/// ((beta0-beta)' Sigma (beta0-beta) + mu^2 + sigma^2) / sigma^2, the
/// population out-of-sample error relative to the noise floor. Equals 1 at
/// the truth and snr + 1 for the null model.
double relative_prediction_error(const Eigen::VectorXd& beta_hat,
                                 double mu_hat,
                                 const SyntheticInstance& instance);

/// Support-recovery metrics; the relative_prediction_error field is NaN
/// here since it needs the generating design.
MetricsReport f1_score(const Eigen::VectorXd& beta_hat,
                       const Eigen::VectorXd& beta0);

enum class BreakdownScheme {
  response_only,             // y of the chosen rows set to the magnitude
  response_and_predictors,   // y and every x entry set to the magnitude
};

struct BreakdownRow {
  double magnitude = 0.0;
  double objective = 0.0;
};

/// Replaces the first m observations with contamination at each magnitude and
/// re-solves exactly, so boundedness of the optimal objective can be read off
/// the table directly.
std::vector<BreakdownRow> breakdown_experiment(
    const Dataset& dataset, const SparsityParams& params, int m,
    const std::vector<double>& magnitudes, const ExactConfig& config = {},
    BreakdownScheme scheme = BreakdownScheme::response_only);

struct BreakdownPoint {
  int numerator = 0;
  int denominator = 1;
  double value() const { return static_cast<double>(numerator) / denominator; }
};

/// (n - h + 1) / n, the fraction of arbitrarily replaced observations needed
/// to drive the optimal objective unbounded.
BreakdownPoint breakdown_point(int n, int h);

/// CSV (x1..xp, y) plus a JSON sidecar holding the design, true
/// coefficients, noise variance and contamination masks.
void save_instance(const SyntheticInstance& instance,
                   const std::string& csv_path, const std::string& json_path);

struct InstanceTruth {
  SimDesign design;
  Eigen::VectorXd beta0;
  double sigma2 = 0.0;
};

InstanceTruth load_truth(const std::string& json_path);

}  // namespace rss::sim

#include "rss/model_select.hpp"

namespace rss::sim {

struct ReplicationConfig {
  SimDesign design;    // seed is replaced per replication
  ParameterGrid grid;  // robust estimator's grid
  int folds = 10;
  double trim_alpha = 0.25;
  double epsilon = 1e-8;
  int max_sweeps = 50;
  int max_iterations = 10000;
  int threads = 1;
};

struct EstimatorRun {
  std::string estimator;  // "robust-subsets" or "best-subsets"
  SparsityParams chosen;
  MetricsReport metrics;
  double runtime_s = 0.0;
};

/// One synthetic draw fitted by robust subsets (robust standardization,
/// trimmed CV) and by best subsets (classical standardization, H = {n},
/// plain CV), each scored against the generating truth.
std::vector<EstimatorRun> run_replication(const ReplicationConfig& config,
                                          std::uint64_t seed);

}  // namespace rss::sim
