#include "rss/search.hpp"

#include <algorithm>
#include <cmath>

#include "rss/errors.hpp"
#include "rss/parallel.hpp"

namespace rss {

namespace {

constexpr double kAcceptTol = 1e-12;  // strict improvement, guards cycling

}  // namespace

void ParameterGrid::validate(int n, int p) const {
  if (k_values.empty() || h_values.empty())
    throw contract_error("parameter grid must not be empty");
  for (std::size_t i = 1; i < k_values.size(); ++i)
    if (k_values[i] <= k_values[i - 1])
      throw contract_error("k values must be strictly increasing");
  for (std::size_t j = 1; j < h_values.size(); ++j)
    if (h_values[j] <= h_values[j - 1])
      throw contract_error("h values must be strictly increasing");
  for (int k : k_values)
    if (k < 0 || k > std::min(n - 1, p))
      throw contract_error("grid k value out of range");
  for (int h : h_values)
    if (h < 0 || h > n) throw contract_error("grid h value out of range");
  bool any_valid = false;
  for (std::size_t i = 0; i < k_values.size() && !any_valid; ++i)
    for (std::size_t j = 0; j < h_values.size() && !any_valid; ++j)
      if (k_values[i] <= h_values[j]) any_valid = true;
  if (!any_valid)
    throw contract_error("parameter grid contains no valid (k, h) cell");
}

const Solution* FitGrid::find(const SparsityParams& params) const {
  auto ki = std::find(k_values.begin(), k_values.end(), params.k);
  auto hj = std::find(h_values.begin(), h_values.end(), params.h);
  if (ki == k_values.end() || hj == h_values.end()) return nullptr;
  return cell(static_cast<int>(ki - k_values.begin()),
              static_cast<int>(hj - h_values.begin()));
}

FitGrid neighborhood_search(const Dataset& dataset, const ParameterGrid& grid,
                            const DescentConfig& config, int max_sweeps,
                            int threads) {
  grid.validate(dataset.n(), dataset.p());
  if (max_sweeps < 0) throw contract_error("max_sweeps must be nonnegative");

  const int q = static_cast<int>(grid.k_values.size());
  const int r = static_cast<int>(grid.h_values.size());
  const int n = dataset.n();
  const int p = dataset.p();

  FitGrid out;
  out.k_values = grid.k_values;
  out.h_values = grid.h_values;
  out.solutions.assign(static_cast<std::size_t>(q) * r, std::nullopt);

  std::vector<int> valid_cells;
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < r; ++j)
      if (grid.cell_valid(i, j)) valid_cells.push_back(out.index(i, j));

  const Eigen::VectorXd zero_beta = Eigen::VectorXd::Zero(p);
  const Eigen::VectorXd zero_eta = Eigen::VectorXd::Zero(n);

  // cold starts, independent per cell
  parallel_for(valid_cells.size(), threads, [&](std::size_t t) {
    int idx = valid_cells[t];
    SparsityParams params{grid.k_values[idx / r], grid.h_values[idx % r]};
    out.solutions[idx] = pbgd(dataset, params, zero_beta, zero_eta, config);
  });

  auto total_objective = [&]() {
    double total = 0.0;
    for (int idx : valid_cells) total += out.solutions[idx]->objective;
    return total;
  };
  out.total_objective_trace.push_back(total_objective());

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < r; ++j) {
        if (!grid.cell_valid(i, j) || !out.solutions[out.index(i, j)]) continue;
        SparsityParams params{grid.k_values[i], grid.h_values[j]};
        const int neighbor_offsets[4][2] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
        std::optional<Solution> best;
        for (const auto& d : neighbor_offsets) {
          int a = i + d[0], b = j + d[1];
          if (a < 0 || a >= q || b < 0 || b >= r) continue;
          const Solution* neighbor = out.cell(a, b);
          if (!neighbor) continue;
          Eigen::VectorXd beta0 = hard_threshold(neighbor->beta, params.k);
          Eigen::VectorXd eta0 =
              hard_threshold(neighbor->eta, n - params.h);
          Solution candidate = pbgd(dataset, params, beta0, eta0, config);
          if (!best || candidate.objective < best->objective)
            best = std::move(candidate);
        }
        auto& incumbent = out.solutions[out.index(i, j)];
        if (best && incumbent->objective - best->objective > kAcceptTol)
          incumbent = std::move(best);
      }
    }
    double total = total_objective();
    double previous = out.total_objective_trace.back();
    out.total_objective_trace.push_back(total);
    out.sweeps_run = sweep;
    if (previous - total <= config.epsilon) break;
  }
  return out;
}

WarmStartBundle warm_start_bundle(const FitGrid& grid,
                                  const SparsityParams& params, double tau) {
  if (tau < 1.0) throw contract_error("tau must be at least 1");
  const Solution* cell = grid.find(params);
  if (!cell) throw contract_error("requested cell is not in the fitted grid");
  WarmStartBundle bundle;
  bundle.solution = *cell;
  bundle.big_m_beta =
      cell->beta.size() == 0 ? 0.0 : tau * cell->beta.cwiseAbs().maxCoeff();
  bundle.big_m_eta =
      cell->eta.size() == 0 ? 0.0 : tau * cell->eta.cwiseAbs().maxCoeff();
  return bundle;
}

}  // namespace rss
