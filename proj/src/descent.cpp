#include "rss/descent.hpp"

#include <cmath>

#include "rss/errors.hpp"

namespace rss {

namespace {

int nnz(const Eigen::VectorXd& v) {
  int count = 0;
  for (int i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) ++count;
  return count;
}

}  // namespace

Solution pbgd(const Dataset& dataset, const SparsityParams& params,
              const Eigen::VectorXd& init_beta,
              const Eigen::VectorXd& init_eta, const DescentConfig& config,
              IterationLog* log) {
  const int n = dataset.n();
  params.validate(n, dataset.p());
  if (config.epsilon <= 0.0) throw contract_error("epsilon must be positive");
  if (config.max_iterations < 1)
    throw contract_error("max_iterations must be at least 1");
  if (init_beta.size() != dataset.p() || init_eta.size() != n)
    throw contract_error("init dimensions do not match dataset");
  if (nnz(init_beta) > params.k)
    throw contract_error("initial beta violates the sparsity budget");
  if (nnz(init_eta) > n - params.h)
    throw contract_error("initial eta violates the trimming budget");

  const double step_beta = 1.0 / config.lipschitz.l_beta_bar;
  const double step_eta = 1.0 / config.lipschitz.l_eta_bar;
  const int eta_budget = n - params.h;

  Eigen::VectorXd beta = init_beta;
  Eigen::VectorXd eta = init_eta;
  Eigen::VectorXd residual = dataset.y - dataset.x * beta - eta;
  double f = 0.5 * residual.squaredNorm();

  std::vector<double> trace{f};
  if (log) log->objective.push_back(f);

  bool cap_hit = true;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    Eigen::VectorXd beta_next =
        hard_threshold(beta + step_beta * (dataset.x.transpose() * residual),
                       params.k);
    residual.noalias() = dataset.y - dataset.x * beta_next - eta;
    Eigen::VectorXd eta_next =
        hard_threshold(eta + step_eta * residual, eta_budget);
    residual -= eta_next - eta;
    double f_next = 0.5 * residual.squaredNorm();

    if (log) {
      log->objective.push_back(f_next);
      log->beta_step_sq.push_back((beta_next - beta).squaredNorm());
      log->eta_step_sq.push_back((eta_next - eta).squaredNorm());
      log->beta_nnz.push_back(nnz(beta_next));
      log->eta_nnz.push_back(nnz(eta_next));
    }

    beta.swap(beta_next);
    eta.swap(eta_next);
    trace.push_back(f_next);
    double decrease = f - f_next;
    f = f_next;
    if (decrease <= config.epsilon) {
      cap_hit = false;
      break;
    }
  }

  Solution converged =
      make_solution(dataset, std::move(beta), std::move(eta), params);
  converged.trace = std::move(trace);
  converged.hit_iteration_cap = cap_hit;
  Solution polished = polish(dataset, converged);
  polished.hit_iteration_cap = cap_hit;
  return polished;
}

Solution polish(const Dataset& dataset, const Solution& solution) {
  const int n = dataset.n();
  const int p = dataset.p();
  if (solution.beta.size() != p || solution.eta.size() != n)
    throw contract_error("solution does not match dataset dimensions");

  const std::vector<int>& support = solution.support_beta;
  const std::vector<int>& inliers = solution.inlier_set;
  const int s = static_cast<int>(support.size());
  const int m = static_cast<int>(inliers.size());

  bool degenerate = false;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  if (s > 0) {
    Eigen::MatrixXd a(m, s);
    Eigen::VectorXd b(m);
    for (int r = 0; r < m; ++r) {
      b[r] = dataset.y[inliers[r]];
      for (int c = 0; c < s; ++c) a(r, c) = dataset.x(inliers[r], support[c]);
    }
    if (m < s) degenerate = true;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    if (cod.rank() < s) degenerate = true;
    Eigen::VectorXd coef = cod.solve(b);
    for (int c = 0; c < s; ++c) beta[support[c]] = coef[c];
  }

  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd fitted = dataset.x * beta;
  std::vector<bool> is_inlier(n, false);
  for (int i : inliers) is_inlier[i] = true;
  for (int i = 0; i < n; ++i)
    if (!is_inlier[i]) eta[i] = dataset.y[i] - fitted[i];

  Solution out = make_solution(dataset, std::move(beta), std::move(eta),
                               solution.params, SolveStatus::polished);
  out.trace = solution.trace;
  out.trace.push_back(out.objective);
  out.polish_degenerate = degenerate;
  out.hit_iteration_cap = solution.hit_iteration_cap;
  return out;
}

StationarityReport check_stationarity(const Dataset& dataset,
                                      const Solution& solution,
                                      const DescentConfig& config) {
  auto [grad_beta, grad_eta] = gradients(dataset, solution.beta, solution.eta);
  const int eta_budget = dataset.n() - solution.params.h;

  Eigen::VectorXd beta_map = hard_threshold(
      solution.beta - grad_beta / config.lipschitz.l_beta_bar,
      solution.params.k);
  Eigen::VectorXd eta_map = hard_threshold(
      solution.eta - grad_eta / config.lipschitz.l_eta_bar, eta_budget);

  StationarityReport report;
  report.beta_residual = (solution.beta - beta_map).squaredNorm();
  report.eta_residual = (solution.eta - eta_map).squaredNorm();
  report.is_epsilon_optimal = report.beta_residual <= config.epsilon &&
                              report.eta_residual <= config.epsilon;
  return report;
}

}  // namespace rss
