#pragma once

#include <cstdint>

#include "rss/core.hpp"

namespace rss {

enum class EnumerationMode {
  full,         // flat loop over (support, inlier-set) pairs, orthogonal solve
  support_lts,  // per-support exact trimmed fit via normal equations
};

struct ExactConfig {
  std::int64_t max_support_enumeration = 20'000'000;  // cap on total combinations
  EnumerationMode mode = EnumerationMode::full;
  int threads = 1;
};

/// Total (support x inlier-subset) combinations the oracle would visit,
/// as a double to survive overflow.
double enumeration_count(int n, int p, int k, int h);

/// Global minimizer by combinatorial enumeration: every support of size <= k
/// against every inlier set of size h, restricted least squares on each.
/// Refuses instances whose combination count exceeds the cap.
Solution solve_exact(const Dataset& dataset, const SparsityParams& params,
                     const ExactConfig& config = {});

/// (attained - best_known) / best_known. Requires best_known > 0; a zero
/// optimum means an exact fit and must be flagged by the caller instead.
double relative_objective_gap(double attained, double best_known);

}  // namespace rss
