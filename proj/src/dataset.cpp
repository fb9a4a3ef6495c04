#include "rss/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "rss/errors.hpp"

namespace rss {

namespace {

constexpr double kMadConsistency = 1.4826;

void require_finite(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (!x.allFinite()) throw contract_error("predictor matrix has non-finite entries");
  if (!y.allFinite()) throw contract_error("response has non-finite entries");
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw contract_error("median of empty vector");
  std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  double lo = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lo + hi);
}

double normalized_mad(const std::vector<double>& values) {
  double center = median(values);
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    dev[i] = std::abs(values[i] - center);
  return kMadConsistency * median(std::move(dev));
}

Eigen::MatrixXd Dataset::raw_x() const {
  Eigen::MatrixXd out = x;
  for (int j = 0; j < out.cols(); ++j) {
    const auto& c = scaling.columns[j];
    out.col(j) = out.col(j) * c.scale + Eigen::VectorXd::Constant(out.rows(), c.center);
  }
  return out;
}

Eigen::VectorXd Dataset::raw_y() const {
  return y + Eigen::VectorXd::Constant(y.size(), scaling.y_center);
}

Dataset Dataset::raw(Eigen::MatrixXd x, Eigen::VectorXd y) {
  if (x.rows() < 1 || x.cols() < 1)
    throw contract_error("dataset needs at least one row and one column");
  if (y.size() != x.rows())
    throw contract_error("response length does not match row count");
  require_finite(x, y);
  Dataset d;
  d.x = std::move(x);
  d.y = std::move(y);
  d.scaling.columns.assign(d.x.cols(), ColumnScaling{});
  d.scaling.mode = StandardizationMode::none;
  return d;
}

Dataset standardize(const Eigen::MatrixXd& raw_x, const Eigen::VectorXd& raw_y,
                    StandardizationMode mode) {
  const int n = static_cast<int>(raw_x.rows());
  const int p = static_cast<int>(raw_x.cols());
  if (n < 2) throw contract_error("standardize needs n >= 2");
  if (p < 1) throw contract_error("standardize needs p >= 1");
  if (raw_y.size() != n)
    throw contract_error("response length does not match row count");
  require_finite(raw_x, raw_y);

  Dataset d;
  d.x = raw_x;
  d.y = raw_y;
  d.scaling.columns.assign(p, ColumnScaling{});
  d.scaling.mode = mode;
  if (mode == StandardizationMode::none) return d;

  std::vector<double> buffer(n);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) buffer[i] = raw_x(i, j);
    double center, spread;
    if (mode == StandardizationMode::robust) {
      center = median(buffer);
      spread = normalized_mad(buffer);
    } else {
      center = raw_x.col(j).mean();
      spread = std::sqrt((raw_x.col(j).array() - center).square().sum() / (n - 1));
    }
    ColumnScaling cs;
    cs.center = center;
    if (spread > 0.0) {
      cs.scale = spread;
    } else {
      cs.scale = 1.0;  // zero-spread column: unscaled, flagged
      cs.degenerate = true;
    }
    d.scaling.columns[j] = cs;
    d.x.col(j) = (raw_x.col(j).array() - cs.center) / cs.scale;
  }

  std::vector<double> ybuf(raw_y.data(), raw_y.data() + n);
  d.scaling.y_center = mode == StandardizationMode::robust
                           ? median(std::move(ybuf))
                           : raw_y.mean();
  d.y = raw_y.array() - d.scaling.y_center;
  return d;
}

}  // namespace rss
