#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace rss {

/// Seeded random stream. One instance per logical task keeps runs
/// reproducible regardless of how work is scheduled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal(double mean = 0.0, double sd = 1.0) {
    return std::normal_distribution<double>(mean, sd)(engine_);
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  bool bernoulli(double p) { return std::bernoulli_distribution(p)(engine_); }

  /// m distinct indices from {0,...,n-1}, in draw order.
  std::vector<int> sample_without_replacement(int n, int m) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> out;
    out.reserve(m);
    for (int t = 0; t < m; ++t) {
      int j = uniform_int(t, n - 1);
      std::swap(pool[t], pool[j]);
      out.push_back(pool[t]);
    }
    return out;
  }

  std::vector<int> permutation(int n) { return sample_without_replacement(n, n); }

  std::mt19937_64& engine() { return engine_; }

  /// Decorrelated child seed for per-task streams (splitmix64 step).
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rss
