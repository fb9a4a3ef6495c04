#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rss/core.hpp"

namespace rss {

struct DescentConfig {
  double epsilon = 1e-8;      // stop when the objective decrease falls below
  int max_iterations = 10000; // hard cap; the solution records which fired
  LipschitzBounds lipschitz;
};

/// Per-iteration details, recorded on request by pbgd.
struct IterationLog {
  std::vector<double> objective;      // f at each iterate, starting at the init
  std::vector<double> beta_step_sq;   // ||beta_{m+1} - beta_m||^2
  std::vector<double> eta_step_sq;
  std::vector<int> beta_nnz;          // nonzeros after each update
  std::vector<int> eta_nnz;
};

/// Squared fixed-point residuals of the projected-gradient map.
struct StationarityReport {
  double beta_residual = 0.0;
  double eta_residual = 0.0;
  bool is_epsilon_optimal = false;
};

/// Projected block-coordinate gradient descent: alternating hard-thresholded
/// gradient steps on beta (budget k) and eta (budget n-h) with fixed step
/// sizes 1/l_beta_bar and 1/l_eta_bar, followed by an active-set polish.
/// The init must already satisfy both sparsity budgets.
Solution pbgd(const Dataset& dataset, const SparsityParams& params,
              const Eigen::VectorXd& init_beta,
              const Eigen::VectorXd& init_eta, const DescentConfig& config,
              IterationLog* log = nullptr);

/// Least-squares refit on the active sets: beta restricted to its support is
/// fit on the rows where eta is zero, and eta absorbs the residuals on the
/// remaining rows. Rank-deficient or underdetermined systems fall back to the
/// minimum-norm solution and set polish_degenerate.
Solution polish(const Dataset& dataset, const Solution& solution);

StationarityReport check_stationarity(const Dataset& dataset,
                                      const Solution& solution,
                                      const DescentConfig& config);

}  // namespace rss
