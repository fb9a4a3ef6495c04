#include "rss/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rss/errors.hpp"

namespace rss {

void SparsityParams::validate(int n, int p) const {
  if (k < 0 || k > std::min(n - 1, p))
    throw contract_error("k must satisfy 0 <= k <= min(n-1, p)");
  if (h < k || h > n) throw contract_error("h must satisfy k <= h <= n");
}

namespace {

void check_dims(const Dataset& dataset, const Eigen::VectorXd& beta,
                const Eigen::VectorXd& eta) {
  if (beta.size() != dataset.p())
    throw contract_error("beta length does not match predictor count");
  if (eta.size() != dataset.n())
    throw contract_error("eta length does not match observation count");
}

}  // namespace

double objective(const Dataset& dataset, const Eigen::VectorXd& beta,
                 const Eigen::VectorXd& eta) {
  check_dims(dataset, beta, eta);
  return 0.5 * (dataset.y - dataset.x * beta - eta).squaredNorm();
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gradients(
    const Dataset& dataset, const Eigen::VectorXd& beta,
    const Eigen::VectorXd& eta) {
  check_dims(dataset, beta, eta);
  Eigen::VectorXd residual = dataset.y - dataset.x * beta - eta;
  return {-(dataset.x.transpose() * residual), -residual};
}

Eigen::VectorXd hard_threshold(const Eigen::VectorXd& c, int m) {
  const int d = static_cast<int>(c.size());
  if (m < 0 || m > d) throw contract_error("hard_threshold budget out of range");
  if (m == d) return c;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  if (m == 0) return out;
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  // total order: larger magnitude first, lowest index on ties
  auto before = [&c](int a, int b) {
    double ma = std::abs(c[a]), mb = std::abs(c[b]);
    return ma != mb ? ma > mb : a < b;
  };
  std::nth_element(idx.begin(), idx.begin() + (m - 1), idx.end(), before);
  for (int t = 0; t < m; ++t) out[idx[t]] = c[idx[t]];
  return out;
}

LipschitzBounds estimate_lipschitz(const Dataset& dataset, double safety,
                                   double tol, int max_iterations) {
  const int p = dataset.p();
  Eigen::VectorXd v(p);
  for (int j = 0; j < p; ++j) v[j] = 1.0 + 1e-3 * j;  // generic start
  v.normalize();
  double lambda = 0.0;
  double prev = -1.0;
  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::VectorXd w = dataset.x.transpose() * (dataset.x * v);
    lambda = v.dot(w);
    double norm = w.norm();
    if (norm == 0.0) {
      lambda = 0.0;
      break;
    }
    v = w / norm;
    if (iter > 0 && std::abs(lambda - prev) <= tol * std::max(1.0, lambda)) break;
    prev = lambda;
  }
  LipschitzBounds bounds;
  bounds.l_beta_bar = std::max(lambda, 0.0) * safety;
  if (bounds.l_beta_bar <= 0.0) bounds.l_beta_bar = 1e-12;
  bounds.l_eta_bar = safety;
  return bounds;
}

Solution make_solution(const Dataset& dataset, Eigen::VectorXd beta,
                       Eigen::VectorXd eta, const SparsityParams& params,
                       SolveStatus status) {
  check_dims(dataset, beta, eta);
  Solution s;
  s.objective = objective(dataset, beta, eta);
  for (int j = 0; j < beta.size(); ++j)
    if (beta[j] != 0.0) s.support_beta.push_back(j);
  for (int i = 0; i < eta.size(); ++i)
    if (eta[i] == 0.0) s.inlier_set.push_back(i);
  if (static_cast<int>(s.support_beta.size()) > params.k)
    throw contract_error("beta violates the sparsity budget");
  if (static_cast<int>(s.inlier_set.size()) < params.h)
    throw contract_error("eta violates the trimming budget");
  s.beta = std::move(beta);
  s.eta = std::move(eta);
  s.params = params;
  s.status = status;
  return s;
}

OriginalScaleFit unstandardize_solution(const Solution& solution,
                                        const Dataset& dataset) {
  if (static_cast<int>(dataset.scaling.columns.size()) != dataset.p())
    throw contract_error("dataset scaling record is incomplete");
  if (solution.beta.size() != dataset.p())
    throw contract_error("solution does not match dataset dimensions");
  OriginalScaleFit fit;
  fit.beta = Eigen::VectorXd::Zero(dataset.p());
  double shift = 0.0;
  for (int j = 0; j < dataset.p(); ++j) {
    const auto& c = dataset.scaling.columns[j];
    fit.beta[j] = solution.beta[j] / c.scale;
    shift += c.center * fit.beta[j];
  }
  fit.intercept = dataset.scaling.y_center - shift;
  return fit;
}

}  // namespace rss
