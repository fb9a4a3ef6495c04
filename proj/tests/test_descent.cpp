#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rss/descent.hpp"
#include "rss/errors.hpp"
#include "rss/exact.hpp"
#include "support/oracles.hpp"

using rss::Dataset;
using rss::DescentConfig;
using rss::Rng;

namespace {

DescentConfig config_for(const Dataset& d, double epsilon = 1e-10) {
  DescentConfig config;
  config.epsilon = epsilon;
  config.lipschitz = rss::estimate_lipschitz(d);
  return config;
}

rss::Solution zero_start(const Dataset& d, const rss::SparsityParams& params,
                         const DescentConfig& config,
                         rss::IterationLog* log = nullptr) {
  return rss::pbgd(d, params, Eigen::VectorXd::Zero(d.p()),
                   Eigen::VectorXd::Zero(d.n()), config, log);
}

}  // namespace

TEST_CASE("unconstrained case converges to least squares") {
  Rng rng(31);
  Eigen::MatrixXd x = oracle::random_matrix(rng, 30, 4);
  Eigen::VectorXd y = oracle::random_vector(rng, 30);
  Dataset d = Dataset::raw(x, y);
  rss::Solution sol = zero_start(d, {4, 30}, config_for(d));
  double ls = oracle::least_squares_objective(x, y);
  CHECK(sol.objective == doctest::Approx(ls).epsilon(1e-8));
  CHECK(sol.status == rss::SolveStatus::polished);
  CHECK_FALSE(sol.hit_iteration_cap);
}

TEST_CASE("zero response converges immediately") {
  Dataset d = Dataset::raw(Eigen::MatrixXd::Identity(3, 3),
                           Eigen::Vector3d::Zero());
  rss::Solution sol = zero_start(d, {1, 2}, config_for(d, 1e-8));
  CHECK(sol.objective == 0.0);
  CHECK(sol.beta.norm() == 0.0);
  // init value, a single no-op iteration, and the polish entry
  CHECK(sol.trace.size() <= 3);
}

TEST_CASE("contaminated instance stays above the exact optimum") {
  Rng rng(57);
  for (int rep = 0; rep < 10; ++rep) {
    Dataset d = oracle::contaminated_instance(rng, 12, 4, 2, 2);
    rss::SparsityParams params{2, 10};
    rss::IterationLog log;
    rss::Solution sol = zero_start(d, params, config_for(d), &log);
    double optimum = rss::solve_exact(d, params).objective;
    CHECK(sol.objective >= optimum - 1e-9 * std::max(1.0, optimum));

    // sufficient decrease with the certified bounds and the true constants
    rss::LipschitzBounds bounds = rss::estimate_lipschitz(d);
    double l_beta = oracle::max_eigenvalue(d.x.transpose() * d.x);
    for (std::size_t m = 0; m + 1 < log.objective.size(); ++m) {
      double lhs = log.objective[m] - log.objective[m + 1];
      double rhs = 0.5 * (bounds.l_beta_bar - l_beta) * log.beta_step_sq[m] +
                   0.5 * (bounds.l_eta_bar - 1.0) * log.eta_step_sq[m];
      CHECK(lhs >= rhs - 1e-9 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("objective trace is monotone and iterates stay feasible") {
  Rng rng(91);
  for (int rep = 0; rep < 50; ++rep) {
    int n = rng.uniform_int(6, 25);
    int p = rng.uniform_int(2, 8);
    int k = rng.uniform_int(1, std::min(p, n - 1));
    int h = rng.uniform_int(k, n);
    Dataset d = Dataset::raw(oracle::random_matrix(rng, n, p),
                             oracle::random_vector(rng, n, 2.0));
    rss::IterationLog log;
    rss::Solution sol = zero_start(d, {k, h}, config_for(d), &log);
    for (std::size_t m = 0; m + 1 < sol.trace.size(); ++m)
      CHECK(sol.trace[m + 1] <= sol.trace[m] + 1e-12);
    for (int nnz : log.beta_nnz) CHECK(nnz <= k);
    for (int nnz : log.eta_nnz) CHECK(nnz <= n - h);
  }
}

TEST_CASE("rate bound holds against the exact optimum") {
  Rng rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    Dataset d = oracle::contaminated_instance(rng, 10, 4, 2, 1);
    rss::SparsityParams params{2, 8};
    rss::IterationLog log;
    DescentConfig config = config_for(d, 1e-12);
    zero_start(d, params, config, &log);
    const int updates = static_cast<int>(log.beta_step_sq.size());
    if (updates < 2) continue;
    double f_star = rss::solve_exact(d, params).objective;
    double l_beta = oracle::max_eigenvalue(d.x.transpose() * d.x);
    double gap = std::min(config.lipschitz.l_beta_bar - l_beta,
                          config.lipschitz.l_eta_bar - 1.0);
    REQUIRE(gap > 0.0);
    // steps m = 1..M, with f(1) the objective after the first update
    const int capital_m = updates - 1;
    double min_step = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= capital_m; ++m)
      min_step = std::min(min_step, log.beta_step_sq[m] + log.eta_step_sq[m]);
    double bound = 2.0 * (log.objective[1] - f_star) / (capital_m * gap);
    CHECK(min_step <= bound + 1e-9 * std::max(1.0, bound));
  }
}

TEST_CASE("one eta update with unit step is an exact minimization") {
  Rng rng(44);
  for (int rep = 0; rep < 20; ++rep) {
    int n = rng.uniform_int(5, 12);
    int p = rng.uniform_int(1, 4);
    int h = rng.uniform_int(std::min(p, 2), n);
    Dataset d = Dataset::raw(oracle::random_matrix(rng, n, p),
                             oracle::random_vector(rng, n, 2.0));
    Eigen::VectorXd beta = oracle::random_vector(rng, p);
    Eigen::VectorXd eta0 = oracle::sparse_random(rng, n, n - h);

    // single update with l_eta_bar = 1
    Eigen::VectorXd residual = d.y - d.x * beta - eta0;
    Eigen::VectorXd eta1 = rss::hard_threshold(eta0 + residual, n - h);
    double attained = rss::objective(d, beta, eta1);

    // enumeration over every eta support of size n-h
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd r = d.y - d.x * beta;
    oracle::subsets(n, n - h, [&](const std::vector<int>& sup) {
      Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
      for (int i : sup) eta[i] = r[i];
      best = std::min(best, rss::objective(d, beta, eta));
    });
    CHECK(attained <= best + 1e-12 * std::max(1.0, best));
  }
}

TEST_CASE("infeasible inits and bad configs are rejected") {
  Dataset d = Dataset::raw(Eigen::MatrixXd::Identity(4, 4),
                           Eigen::Vector4d(1, 2, 3, 4));
  DescentConfig config = config_for(d);
  Eigen::VectorXd dense_beta = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(rss::pbgd(d, {1, 4}, dense_beta, Eigen::VectorXd::Zero(4),
                            config),
                  rss::contract_error);
  Eigen::VectorXd dense_eta = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(rss::pbgd(d, {1, 3}, Eigen::VectorXd::Zero(4), dense_eta,
                            config),
                  rss::contract_error);
  DescentConfig bad = config;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(rss::pbgd(d, {1, 4}, Eigen::VectorXd::Zero(4),
                            Eigen::VectorXd::Zero(4), bad),
                  rss::contract_error);
}

TEST_CASE("iteration cap is reported, not thrown") {
  Rng rng(3);
  Dataset d = oracle::contaminated_instance(rng, 20, 5, 3, 2);
  DescentConfig config = config_for(d, 1e-14);
  config.max_iterations = 1;
  rss::Solution sol = zero_start(d, {3, 17}, config);
  CHECK(sol.hit_iteration_cap);
}

TEST_CASE("polish is an idempotent least-squares refit") {
  Rng rng(63);
  Dataset d = oracle::contaminated_instance(rng, 15, 5, 2, 2);
  rss::Solution sol = zero_start(d, {3, 12}, config_for(d));
  rss::Solution again = rss::polish(d, sol);
  CHECK((again.beta - sol.beta).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((again.eta - sol.eta).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(again.objective == doctest::Approx(sol.objective).epsilon(1e-12));
}

TEST_CASE("polish fits the active set exactly") {
  // single predictor equal to the response: coefficient 1, objective 0
  Rng rng(8);
  Eigen::VectorXd col = oracle::random_vector(rng, 6);
  Eigen::MatrixXd x(6, 2);
  x.col(0) = col;
  x.col(1) = oracle::random_vector(rng, 6);
  Dataset d = Dataset::raw(x, col);
  rss::Solution start = rss::make_solution(
      d, Eigen::Vector2d(0.5, 0.0), Eigen::VectorXd::Zero(6), {1, 6});
  rss::Solution polished = rss::polish(d, start);
  CHECK(polished.beta[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(polished.objective < 1e-20);

  // random instances: objective never increases, normal equations hold
  for (int rep = 0; rep < 20; ++rep) {
    int n = rng.uniform_int(8, 16);
    int p = rng.uniform_int(2, 5);
    int k = rng.uniform_int(1, p);
    int h = rng.uniform_int(std::max(k, n - 3), n);
    Dataset inst = Dataset::raw(oracle::random_matrix(rng, n, p),
                                oracle::random_vector(rng, n, 2.0));
    rss::Solution rough = rss::make_solution(
        inst, oracle::sparse_random(rng, p, k),
        oracle::sparse_random(rng, n, n - h), {k, h});
    rss::Solution polished_rough = rss::polish(inst, rough);
    CHECK(polished_rough.objective <= rough.objective + 1e-12);

    const auto& support = polished_rough.support_beta;
    if (!support.empty()) {
      Eigen::VectorXd residual =
          inst.y - inst.x * polished_rough.beta - polished_rough.eta;
      for (int j : support) {
        double grad = 0.0;
        for (int i : rough.inlier_set) grad += inst.x(i, j) * residual[i];
        CHECK(std::abs(grad) < 1e-8);
      }
    }
  }
}

TEST_CASE("polish flags rank-deficient restricted systems") {
  Rng rng(15);
  Eigen::MatrixXd x(8, 3);
  x.col(0) = oracle::random_vector(rng, 8);
  x.col(1) = x.col(0);  // duplicate column
  x.col(2) = oracle::random_vector(rng, 8);
  Dataset d = Dataset::raw(x, oracle::random_vector(rng, 8));
  Eigen::VectorXd beta(3);
  beta << 1.0, 1.0, 0.0;
  rss::Solution start =
      rss::make_solution(d, beta, Eigen::VectorXd::Zero(8), {2, 8});
  rss::Solution polished = rss::polish(d, start);
  CHECK(polished.polish_degenerate);
  CHECK(polished.objective <= start.objective + 1e-12);
}

TEST_CASE("stationarity residuals vanish exactly at optima") {
  Rng rng(29);
  // unconstrained least squares is stationary
  Eigen::MatrixXd x = oracle::random_matrix(rng, 12, 3);
  Eigen::VectorXd y = oracle::random_vector(rng, 12);
  Dataset d = Dataset::raw(x, y);
  DescentConfig config = config_for(d);
  config.epsilon = 1e-10;
  rss::Solution ls = zero_start(d, {3, 12}, config);
  rss::StationarityReport at_ls = rss::check_stationarity(d, ls, config);
  CHECK(at_ls.beta_residual < 1e-10);
  CHECK(at_ls.eta_residual < 1e-10);
  CHECK(at_ls.is_epsilon_optimal);

  // the exact optimum of a trimmed instance is epsilon-optimal
  Dataset inst = oracle::contaminated_instance(rng, 10, 4, 2, 1);
  rss::Solution best = rss::solve_exact(inst, {2, 8});
  DescentConfig inst_config = config_for(inst);
  inst_config.epsilon = 1e-8;
  rss::StationarityReport at_opt =
      rss::check_stationarity(inst, best, inst_config);
  CHECK(at_opt.is_epsilon_optimal);

  // a generic point is not stationary
  rss::Solution rough = rss::make_solution(
      inst, oracle::sparse_random(rng, 4, 2),
      oracle::sparse_random(rng, 10, 2), {2, 8});
  rss::StationarityReport generic =
      rss::check_stationarity(inst, rough, inst_config);
  CHECK(generic.beta_residual + generic.eta_residual > 0.0);
}
