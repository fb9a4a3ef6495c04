#pragma once

#include <optional>
#include <vector>

#include "rss/descent.hpp"

namespace rss {

/// Candidate sparsity/robustness levels. Both lists must be strictly
/// increasing; cells with k > h are invalid and skipped.
struct ParameterGrid {
  std::vector<int> k_values;
  std::vector<int> h_values;

  void validate(int n, int p) const;
  bool cell_valid(int i, int j) const { return k_values[i] <= h_values[j]; }
  int cells() const {
    return static_cast<int>(k_values.size() * h_values.size());
  }
};

struct FitGrid {
  std::vector<int> k_values;
  std::vector<int> h_values;
  std::vector<std::optional<Solution>> solutions;  // row-major, k outer
  std::vector<double> total_objective_trace;  // after cold starts, then per sweep
  int sweeps_run = 0;

  int index(int i, int j) const {
    return i * static_cast<int>(h_values.size()) + j;
  }
  const Solution* cell(int i, int j) const {
    const auto& s = solutions[index(i, j)];
    return s ? &*s : nullptr;
  }
  /// Cell lookup by parameter values; null when absent.
  const Solution* find(const SparsityParams& params) const;
};

/// Cold-starts every valid cell from zero, then sweeps the grid re-solving
/// each cell from its four axis-neighbors' solutions projected to the local
/// budgets, keeping strict improvements. Stops when a sweep improves the
/// total objective by at most config.epsilon or after max_sweeps sweeps.
/// max_sweeps = 0 runs the cold-start phase only.
FitGrid neighborhood_search(const Dataset& dataset, const ParameterGrid& grid,
                            const DescentConfig& config, int max_sweeps = 50,
                            int threads = 1);

struct WarmStartBundle {
  Solution solution;
  double big_m_beta = 0.0;
  double big_m_eta = 0.0;
};

/// A grid cell's solution plus tau-scaled variable bounds tau*||beta||_inf
/// and tau*||eta||_inf for seeding an exact solver.
WarmStartBundle warm_start_bundle(const FitGrid& grid,
                                  const SparsityParams& params, double tau);

}  // namespace rss
