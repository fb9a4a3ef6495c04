#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rss/dataset.hpp"

namespace rss {

/// Sparsity budgets: at most k nonzero coefficients, at least h untrimmed
/// observations. Valid when 0 <= k <= min(n-1, p) and k <= h <= n.
struct SparsityParams {
  int k = 0;
  int h = 0;

  void validate(int n, int p) const;
  bool operator==(const SparsityParams&) const = default;
};

enum class SolveStatus { heuristic, polished, exact_optimal };

struct Solution {
  Eigen::VectorXd beta;
  Eigen::VectorXd eta;
  double objective = 0.0;
  SparsityParams params;          // budgets the solve ran under
  std::vector<int> support_beta;  // { j : beta_j != 0 }
  std::vector<int> inlier_set;    // { i : eta_i == 0 }
  std::vector<double> trace;      // objective per iteration, nonincreasing
  SolveStatus status = SolveStatus::heuristic;
  bool hit_iteration_cap = false;
  bool polish_degenerate = false;
};

/// Builds a Solution with objective, support and inlier set derived from
/// (beta, eta). Throws on dimension mismatch or budget violations.
Solution make_solution(const Dataset& dataset, Eigen::VectorXd beta,
                       Eigen::VectorXd eta, const SparsityParams& params,
                       SolveStatus status = SolveStatus::heuristic);

/// Step-size bounds for the two coordinate blocks. l_beta_bar upper-bounds
/// the spectral norm of X'X; l_eta_bar upper-bounds 1.
struct LipschitzBounds {
  double l_beta_bar = 1.0;
  double l_eta_bar = 1.0;
};

/// (1/2) * || y - X beta - eta ||^2
double objective(const Dataset& dataset, const Eigen::VectorXd& beta,
                 const Eigen::VectorXd& eta);

/// Partial gradients (-X'(y - X beta - eta), -(y - X beta - eta)).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gradients(
    const Dataset& dataset, const Eigen::VectorXd& beta,
    const Eigen::VectorXd& eta);

/// Keeps the m largest-magnitude entries of c and zeroes the rest. Ties are
/// broken toward the lowest index so repeated runs are identical.
Eigen::VectorXd hard_threshold(const Eigen::VectorXd& c, int m);

/// Power-iteration estimate of ||X'X||_2, inflated by `safety` so the bound
/// stays strictly above the true constant; l_eta_bar gets the same inflation.
LipschitzBounds estimate_lipschitz(const Dataset& dataset,
                                   double safety = 1.01, double tol = 1e-8,
                                   int max_iterations = 1000);

struct OriginalScaleFit {
  double intercept = 0.0;
  Eigen::VectorXd beta;
};

/// Maps a standardized-scale solution back to the original data scale. The
/// intercept absorbs the centering of the response and predictors.
OriginalScaleFit unstandardize_solution(const Solution& solution,
                                        const Dataset& dataset);

}  // namespace rss
