#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "rss/descent.hpp"
#include "rss/errors.hpp"
#include "rss/exact.hpp"
#include "support/oracles.hpp"

using rss::Dataset;
using rss::ExactConfig;
using rss::Rng;

TEST_CASE("k = 0 keeps the h smallest squared responses") {
  Rng rng(19);
  Eigen::VectorXd y = oracle::random_vector(rng, 9, 2.0);
  Dataset d = Dataset::raw(oracle::random_matrix(rng, 9, 3), y);
  rss::Solution sol = rss::solve_exact(d, {0, 6});

  std::vector<double> squares(9);
  for (int i = 0; i < 9; ++i) squares[i] = y[i] * y[i];
  std::sort(squares.begin(), squares.end());
  double expected = 0.0;
  for (int i = 0; i < 6; ++i) expected += squares[i];
  CHECK(sol.objective == doctest::Approx(0.5 * expected).epsilon(1e-12));
  CHECK(sol.beta.norm() == 0.0);
}

TEST_CASE("unconstrained cell equals least squares") {
  Rng rng(28);
  Eigen::MatrixXd x = oracle::random_matrix(rng, 9, 3);
  Eigen::VectorXd y = oracle::random_vector(rng, 9);
  Dataset d = Dataset::raw(x, y);
  rss::Solution sol = rss::solve_exact(d, {3, 9});
  CHECK(sol.objective ==
        doctest::Approx(oracle::least_squares_objective(x, y)).epsilon(1e-9));
  CHECK(sol.status == rss::SolveStatus::exact_optimal);
}

TEST_CASE("a gross outlier is trimmed, and forcing it in costs more") {
  Rng rng(35);
  Eigen::MatrixXd x = oracle::random_matrix(rng, 10, 4);
  Eigen::VectorXd beta0 = Eigen::VectorXd::Zero(4);
  beta0[0] = 2.0;
  beta0[2] = -1.0;
  Eigen::VectorXd y = x * beta0 + oracle::random_vector(rng, 10, 0.2);
  const int outlier = 3;
  y[outlier] += 40.0;
  Dataset d = Dataset::raw(x, y);

  rss::Solution sol = rss::solve_exact(d, {2, 8});
  CHECK(std::find(sol.inlier_set.begin(), sol.inlier_set.end(), outlier) ==
        sol.inlier_set.end());

  // best objective among inlier sets forced to contain the outlier
  double forced = std::numeric_limits<double>::infinity();
  for (int size = 0; size <= 2; ++size) {
    oracle::subsets(4, size, [&](const std::vector<int>& support) {
      Eigen::MatrixXd xs(10, size);
      for (int c = 0; c < size; ++c) xs.col(c) = x.col(support[c]);
      oracle::subsets(10, 8, [&](const std::vector<int>& rows) {
        if (std::find(rows.begin(), rows.end(), outlier) == rows.end()) return;
        Eigen::MatrixXd xr(8, size);
        Eigen::VectorXd yr(8);
        for (int t = 0; t < 8; ++t) {
          xr.row(t) = xs.row(rows[t]);
          yr[t] = y[rows[t]];
        }
        double obj = size == 0 ? 0.5 * yr.squaredNorm()
                               : oracle::least_squares_objective(xr, yr);
        forced = std::min(forced, obj);
      });
    });
  }
  CHECK(sol.objective < forced);
}

TEST_CASE("both enumeration modes find the same optimum") {
  Rng rng(46);
  for (int rep = 0; rep < 8; ++rep) {
    Dataset d = oracle::contaminated_instance(rng, 11, 4, 2, 2);
    ExactConfig full;
    full.mode = rss::EnumerationMode::full;
    ExactConfig lts;
    lts.mode = rss::EnumerationMode::support_lts;
    rss::Solution a = rss::solve_exact(d, {2, 9}, full);
    rss::Solution b = rss::solve_exact(d, {2, 9}, lts);
    CHECK(a.objective ==
          doctest::Approx(b.objective).epsilon(1e-9));
    CHECK(a.support_beta == b.support_beta);
    CHECK(a.inlier_set == b.inlier_set);
  }
}

TEST_CASE("exact matches the independent exhaustive oracle") {
  Rng rng(52);
  for (int rep = 0; rep < 6; ++rep) {
    Dataset d = oracle::contaminated_instance(rng, 10, 4, 2, 1);
    int k = rng.uniform_int(0, 2);
    int h = rng.uniform_int(std::max(k, 7), 10);
    double expected = oracle::robust_subsets_optimum(d.x, d.y, k, h);
    rss::Solution sol = rss::solve_exact(d, {k, h});
    CHECK(sol.objective == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("excluded residuals dominate included ones at the optimum") {
  Rng rng(58);
  for (int rep = 0; rep < 10; ++rep) {
    Dataset d = oracle::contaminated_instance(rng, 11, 4, 2, 2);
    rss::Solution sol = rss::solve_exact(d, {2, 9});
    Eigen::VectorXd residual = d.y - d.x * sol.beta;
    std::vector<bool> inlier(11, false);
    for (int i : sol.inlier_set) inlier[i] = true;
    double max_in = 0.0, min_out = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 11; ++i) {
      double r2 = residual[i] * residual[i];
      if (inlier[i])
        max_in = std::max(max_in, r2);
      else
        min_out = std::min(min_out, r2);
    }
    CHECK(min_out >= max_in - 1e-9 * std::max(1.0, max_in));
  }
}

TEST_CASE("enumeration cap refuses oversized instances by count") {
  Rng rng(70);
  Dataset d = Dataset::raw(oracle::random_matrix(rng, 30, 10),
                           oracle::random_vector(rng, 30));
  ExactConfig tiny;
  tiny.max_support_enumeration = 100;
  try {
    rss::solve_exact(d, {3, 20}, tiny);
    FAIL("expected enumeration_cap_error");
  } catch (const rss::enumeration_cap_error& e) {
    CHECK(e.required_combinations ==
          doctest::Approx(rss::enumeration_count(30, 10, 3, 20)));
    CHECK(std::string(e.what()).find("combinations") != std::string::npos);
  }
}

TEST_CASE("enumeration counts") {
  CHECK(rss::enumeration_count(10, 4, 2, 8) ==
        doctest::Approx((1 + 4 + 6) * 45.0));
  CHECK(rss::enumeration_count(12, 4, 0, 12) == doctest::Approx(1.0));
}

TEST_CASE("relative objective gap arithmetic and certification") {
  CHECK(rss::relative_objective_gap(1.0, 1.0) == 0.0);
  CHECK(rss::relative_objective_gap(1.1, 1.0) ==
        doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(rss::relative_objective_gap(1.0, 0.0), rss::contract_error);
  CHECK_THROWS_AS(rss::relative_objective_gap(1.0, -2.0), rss::contract_error);

  Rng rng(83);
  rss::DescentConfig config;
  for (int rep = 0; rep < 30; ++rep) {
    Dataset d = oracle::contaminated_instance(rng, 10, 4, 2, 1);
    config.lipschitz = rss::estimate_lipschitz(d);
    rss::SparsityParams params{2, 8};
    rss::Solution heuristic =
        rss::pbgd(d, params, Eigen::VectorXd::Zero(4),
                  Eigen::VectorXd::Zero(10), config);
    double optimum = rss::solve_exact(d, params).objective;
    if (optimum > 0.0)
      CHECK(rss::relative_objective_gap(heuristic.objective, optimum) >=
            -1e-9);
  }
}

TEST_CASE("threaded enumeration matches serial") {
  Rng rng(95);
  Dataset d = oracle::contaminated_instance(rng, 12, 5, 2, 2);
  ExactConfig serial;
  ExactConfig threaded;
  threaded.threads = 4;
  rss::Solution a = rss::solve_exact(d, {2, 10}, serial);
  rss::Solution b = rss::solve_exact(d, {2, 10}, threaded);
  CHECK(a.objective == b.objective);
  CHECK(a.support_beta == b.support_beta);
  CHECK(a.inlier_set == b.inlier_set);
}
