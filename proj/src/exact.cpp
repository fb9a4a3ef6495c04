#include "rss/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <vector>

#include "rss/errors.hpp"
#include "rss/parallel.hpp"

namespace rss {

namespace {

double choose(int n, int m) {
  if (m < 0 || m > n) return 0.0;
  m = std::min(m, n - m);
  double result = 1.0;
  for (int t = 1; t <= m; ++t) result *= static_cast<double>(n - m + t) / t;
  return result;
}

// Visits all size-m subsets of {0,...,n-1} in lexicographic order.
template <typename F>
void for_each_combination(int n, int m, F&& visit) {
  std::vector<int> c(m);
  for (int t = 0; t < m; ++t) c[t] = t;
  while (true) {
    visit(const_cast<const std::vector<int>&>(c));
    int t = m - 1;
    while (t >= 0 && c[t] == n - m + t) --t;
    if (t < 0) break;
    ++c[t];
    for (int u = t + 1; u < m; ++u) c[u] = c[u - 1] + 1;
  }
}

struct Candidate {
  double objective = std::numeric_limits<double>::infinity();
  std::int64_t ordinal = -1;  // enumeration position, for deterministic ties
  std::vector<int> support;
  std::vector<int> inliers;
  Eigen::VectorXd coef;  // dense over support

  bool better_than(const Candidate& other) const {
    if (objective != other.objective) return objective < other.objective;
    return ordinal < other.ordinal;
  }
};

// Restricted least squares on rows I and columns J of X.
double restricted_fit(const Eigen::MatrixXd& x_support,
                      const Eigen::VectorXd& y, const std::vector<int>& rows,
                      EnumerationMode mode, Eigen::VectorXd& coef) {
  const int h = static_cast<int>(rows.size());
  const int s = static_cast<int>(x_support.cols());
  if (s == 0) {
    coef.resize(0);
    double obj = 0.0;
    for (int i : rows) obj += y[i] * y[i];
    return 0.5 * obj;
  }
  Eigen::MatrixXd a(h, s);
  Eigen::VectorXd b(h);
  for (int t = 0; t < h; ++t) {
    a.row(t) = x_support.row(rows[t]);
    b[t] = y[rows[t]];
  }
  if (mode == EnumerationMode::support_lts) {
    // normal-equations route; falls back when the Gram factorization degrades
    Eigen::MatrixXd gram = a.transpose() * a;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() == Eigen::Success) {
      coef = ldlt.solve(a.transpose() * b);
      if (coef.allFinite()) return 0.5 * (b - a * coef).squaredNorm();
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  coef = cod.solve(b);
  return 0.5 * (b - a * coef).squaredNorm();
}

}  // namespace

double enumeration_count(int n, int p, int k, int h) {
  double supports = 0.0;
  for (int j = 0; j <= k; ++j) supports += choose(p, j);
  return supports * choose(n, h);
}

Solution solve_exact(const Dataset& dataset, const SparsityParams& params,
                     const ExactConfig& config) {
  const int n = dataset.n();
  const int p = dataset.p();
  params.validate(n, p);

  double combinations = enumeration_count(n, p, params.k, params.h);
  if (combinations > static_cast<double>(config.max_support_enumeration)) {
    std::ostringstream msg;
    msg << "exact enumeration refused: " << combinations
        << " combinations exceed the cap of " << config.max_support_enumeration;
    throw enumeration_cap_error(msg.str(), combinations);
  }

  const std::int64_t per_support = static_cast<std::int64_t>(choose(n, params.h));

  // best over all inlier sets for one support; ordinals keep ties deterministic
  auto scan_support = [&](const std::vector<int>& support, std::int64_t base,
                          Candidate& local) {
    Eigen::MatrixXd x_support(n, support.size());
    for (std::size_t c = 0; c < support.size(); ++c)
      x_support.col(c) = dataset.x.col(support[c]);
    std::int64_t ordinal = base;
    Eigen::VectorXd coef;
    for_each_combination(n, params.h, [&](const std::vector<int>& rows) {
      double obj = restricted_fit(x_support, dataset.y, rows, config.mode, coef);
      Candidate current;
      current.objective = obj;
      current.ordinal = ordinal;
      if (current.better_than(local)) {
        current.support = support;
        current.inliers = rows;
        current.coef = coef;
        local = std::move(current);
      }
      ++ordinal;
    });
  };

  Candidate best;
  double support_count = combinations / std::max(1.0, static_cast<double>(per_support));
  constexpr double kMaterializeLimit = 200'000;
  if (config.threads != 1 && support_count <= kMaterializeLimit) {
    std::vector<std::vector<int>> supports;
    supports.reserve(static_cast<std::size_t>(support_count) + 1);
    for (int size = 0; size <= params.k; ++size)
      for_each_combination(
          p, size, [&](const std::vector<int>& j) { supports.push_back(j); });
    int workers = resolve_threads(config.threads);
    std::vector<Candidate> per_worker(workers);
    parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t w) {
      Candidate local;
      for (std::size_t si = w; si < supports.size();
           si += static_cast<std::size_t>(workers))
        scan_support(supports[si], static_cast<std::int64_t>(si) * per_support,
                     local);
      per_worker[w] = std::move(local);
    });
    for (auto& candidate : per_worker)
      if (candidate.better_than(best)) best = std::move(candidate);
  } else {
    std::int64_t base = 0;
    for (int size = 0; size <= params.k; ++size)
      for_each_combination(p, size, [&](const std::vector<int>& support) {
        scan_support(support, base, best);
        base += per_support;
      });
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (std::size_t c = 0; c < best.support.size(); ++c)
    beta[best.support[c]] = best.coef[static_cast<int>(c)];
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd fitted = dataset.x * beta;
  std::vector<bool> kept(n, false);
  for (int i : best.inliers) kept[i] = true;
  for (int i = 0; i < n; ++i)
    if (!kept[i]) eta[i] = dataset.y[i] - fitted[i];

  Solution solution = make_solution(dataset, std::move(beta), std::move(eta),
                                    params, SolveStatus::exact_optimal);
  solution.trace = {solution.objective};
  return solution;
}

double relative_objective_gap(double attained, double best_known) {
  if (!(best_known > 0.0))
    throw contract_error(
        "relative objective gap needs best_known > 0 (a zero optimum is an "
        "exact fit and must be flagged separately)");
  return (attained - best_known) / best_known;
}

}  // namespace rss
