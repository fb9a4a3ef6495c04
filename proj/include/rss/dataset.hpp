#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rss {

enum class StandardizationMode { robust, classical, none };

struct ColumnScaling {
  double center = 0.0;
  double scale = 1.0;
  bool degenerate = false;  // zero spread; column left unscaled
};

struct ScalingRecord {
  std::vector<ColumnScaling> columns;
  double y_center = 0.0;
  StandardizationMode mode = StandardizationMode::none;

  bool any_degenerate() const {
    for (const auto& c : columns)
      if (c.degenerate) return true;
    return false;
  }
};

/// Regression sample on the working (standardized) scale together with the
/// scaling record needed to report fits on the original scale.
class Dataset {
 public:
  Eigen::MatrixXd x;  // n x p, standardized
  Eigen::VectorXd y;  // length n, centered
  ScalingRecord scaling;

  int n() const { return static_cast<int>(x.rows()); }
  int p() const { return static_cast<int>(x.cols()); }

  /// Original-scale data reconstructed from the scaling record.
  Eigen::MatrixXd raw_x() const;
  Eigen::VectorXd raw_y() const;

  /// Wraps data as-is (identity scaling). Accepts n >= 1.
  static Dataset raw(Eigen::MatrixXd x, Eigen::VectorXd y);
};

/// Centers/scales columns and centers the response. Robust mode uses the
/// median and the MAD normalized by 1.4826; classical mode uses the mean and
/// the sample standard deviation. Zero-spread columns are left unscaled and
/// flagged. Requires n >= 2 and finite inputs.
Dataset standardize(const Eigen::MatrixXd& raw_x, const Eigen::VectorXd& raw_y,
                    StandardizationMode mode);

double median(std::vector<double> values);

/// MAD scaled by 1.4826 for consistency at the normal distribution.
double normalized_mad(const std::vector<double>& values);

}  // namespace rss
