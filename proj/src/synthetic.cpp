#include "rss/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "rss/errors.hpp"
#include "rss/io.hpp"
#include "rss/random.hpp"

namespace rss::sim {

Eigen::MatrixXd ar1_covariance(int p, double rho) {
  if (p < 1) throw contract_error("covariance needs p >= 1");
  if (std::abs(rho) >= 1.0)
    throw contract_error("|rho| must be < 1 for a positive definite covariance");
  Eigen::MatrixXd sigma(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) sigma(i, j) = std::pow(rho, std::abs(i - j));
  return sigma;
}

SyntheticInstance generate(const SimDesign& design) {
  if (design.n < 1 || design.p < 1) throw contract_error("need n, p >= 1");
  if (design.p0 < 0 || design.p0 > design.p)
    throw contract_error("p0 must lie in [0, p]");
  if (design.snr <= 0.0) throw contract_error("snr must be positive");
  if (design.delta < 0.0 || design.delta > 1.0)
    throw contract_error("delta must lie in [0, 1]");

  const int n = design.n, p = design.p;
  Rng rng(design.seed);

  SyntheticInstance inst;
  inst.design = design;

  inst.beta0 = Eigen::VectorXd::Zero(p);
  for (int j : rng.sample_without_replacement(p, design.p0))
    inst.beta0[j] = rng.bernoulli(0.5) ? 1.0 : -1.0;

  Eigen::MatrixXd sigma = ar1_covariance(p, design.rho);
  Eigen::LLT<Eigen::MatrixXd> chol(sigma);
  if (chol.info() != Eigen::Success)
    throw contract_error("covariance factorization failed");
  Eigen::MatrixXd chol_l = chol.matrixL();

  inst.x.resize(n, p);
  Eigen::VectorXd z(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z[j] = rng.normal();
    inst.x.row(i) = (chol_l * z).transpose();
  }

  double signal = inst.beta0.dot(sigma * inst.beta0);
  inst.sigma2 = signal / design.snr;
  double noise_sd = std::sqrt(inst.sigma2);

  const bool contaminate_y = design.setting == Setting::contam_y ||
                             design.setting == Setting::contam_xy;
  const bool contaminate_x = design.setting == Setting::contam_x ||
                             design.setting == Setting::contam_xy;

  inst.y_contaminated.assign(n, 0);
  Eigen::VectorXd noise(n);
  for (int i = 0; i < n; ++i) {
    if (contaminate_y && rng.bernoulli(design.delta)) {
      inst.y_contaminated[i] = 1;
      noise[i] = rng.normal(10.0 * noise_sd, noise_sd);
    } else {
      noise[i] = rng.normal(0.0, noise_sd);
    }
  }
  // the response always comes from the clean predictors
  inst.y = inst.x * inst.beta0 + noise;

  inst.x_contaminated.assign(n, 0);
  inst.x_replaced_columns.assign(n, {});
  if (contaminate_x) {
    int per_row = std::max(1, static_cast<int>(std::floor(0.1 * p)));
    for (int i = 0; i < n; ++i) {
      if (!rng.bernoulli(design.delta)) continue;
      inst.x_contaminated[i] = 1;
      std::vector<int> cols = rng.sample_without_replacement(p, per_row);
      std::sort(cols.begin(), cols.end());
      for (int j : cols) inst.x(i, j) = rng.normal(10.0, 1.0);
      inst.x_replaced_columns[i] = std::move(cols);
    }
  }
  return inst;
}

double relative_prediction_error(const Eigen::VectorXd& beta_hat,
                                 double mu_hat,
                                 const SyntheticInstance& instance) {
  if (beta_hat.size() != instance.beta0.size())
    throw contract_error("beta dimensions disagree");
  Eigen::MatrixXd sigma =
      ar1_covariance(instance.design.p, instance.design.rho);
  Eigen::VectorXd diff = instance.beta0 - beta_hat;
  return (diff.dot(sigma * diff) + mu_hat * mu_hat + instance.sigma2) /
         instance.sigma2;
}

MetricsReport f1_score(const Eigen::VectorXd& beta_hat,
                       const Eigen::VectorXd& beta0) {
  if (beta_hat.size() != beta0.size())
    throw contract_error("beta dimensions disagree");
  int true_pos = 0, selected = 0, relevant = 0;
  for (int j = 0; j < beta_hat.size(); ++j) {
    bool hat = beta_hat[j] != 0.0;
    bool truth = beta0[j] != 0.0;
    selected += hat;
    relevant += truth;
    true_pos += hat && truth;
  }
  MetricsReport report;
  report.relative_prediction_error = std::numeric_limits<double>::quiet_NaN();
  report.model_sparsity = selected;
  if (selected == 0 && relevant == 0) {
    report.recall = report.precision = report.f1 = 1.0;
    return report;
  }
  report.recall =
      relevant == 0 ? 0.0 : static_cast<double>(true_pos) / relevant;
  report.precision =
      selected == 0 ? 0.0 : static_cast<double>(true_pos) / selected;
  report.f1 = (report.recall > 0.0 && report.precision > 0.0)
                  ? 2.0 / (1.0 / report.recall + 1.0 / report.precision)
                  : 0.0;
  return report;
}

std::vector<BreakdownRow> breakdown_experiment(
    const Dataset& dataset, const SparsityParams& params, int m,
    const std::vector<double>& magnitudes, const ExactConfig& config,
    BreakdownScheme scheme) {
  const int n = dataset.n();
  if (m < 0 || m > n) throw contract_error("m must lie in [0, n]");
  params.validate(n, dataset.p());

  std::vector<BreakdownRow> table;
  table.reserve(magnitudes.size());
  for (double magnitude : magnitudes) {
    if (!std::isfinite(magnitude))
      throw contract_error("contamination magnitude must be finite");
    Dataset contaminated = dataset;
    for (int i = 0; i < m; ++i) {
      contaminated.y[i] = magnitude;
      if (scheme == BreakdownScheme::response_and_predictors)
        contaminated.x.row(i).setConstant(magnitude);
    }
    Solution solution = solve_exact(contaminated, params, config);
    table.push_back({magnitude, solution.objective});
  }
  return table;
}

BreakdownPoint breakdown_point(int n, int h) {
  if (n < 1) throw contract_error("n must be positive");
  if (h > n || h < 0) throw contract_error("h must lie in [0, n]");
  return {n - h + 1, n};
}

void save_instance(const SyntheticInstance& instance,
                   const std::string& csv_path, const std::string& json_path) {
  const int n = static_cast<int>(instance.x.rows());
  const int p = static_cast<int>(instance.x.cols());
  std::vector<std::string> header;
  for (int j = 0; j < p; ++j) header.push_back("x" + std::to_string(j + 1));
  header.push_back("y");
  Eigen::MatrixXd table(n, p + 1);
  table.leftCols(p) = instance.x;
  table.col(p) = instance.y;
  io::write_numeric_csv(csv_path, header, table);

  nlohmann::ordered_json j;
  j["design"] = {
      {"n", instance.design.n},
      {"p", instance.design.p},
      {"p0", instance.design.p0},
      {"snr", instance.design.snr},
      {"rho", instance.design.rho},
      {"delta", instance.design.delta},
      {"setting", static_cast<int>(instance.design.setting)},
      {"seed", instance.design.seed},
  };
  j["sigma2"] = instance.sigma2;
  j["beta0"] = std::vector<double>(instance.beta0.data(),
                                   instance.beta0.data() + p);
  j["y_contaminated"] = instance.y_contaminated;
  j["x_contaminated"] = instance.x_contaminated;
  j["x_replaced_columns"] = instance.x_replaced_columns;
  io::write_json(json_path, j);
}

InstanceTruth load_truth(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw io_error("cannot open sidecar: " + json_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("bad sidecar JSON: " + std::string(e.what()));
  }
  InstanceTruth truth;
  try {
    const auto& d = j.at("design");
    truth.design.n = d.at("n").get<int>();
    truth.design.p = d.at("p").get<int>();
    truth.design.p0 = d.at("p0").get<int>();
    truth.design.snr = d.at("snr").get<double>();
    truth.design.rho = d.at("rho").get<double>();
    truth.design.delta = d.at("delta").get<double>();
    truth.design.setting = static_cast<Setting>(d.at("setting").get<int>());
    truth.design.seed = d.at("seed").get<std::uint64_t>();
    std::vector<double> beta0 = j.at("beta0").get<std::vector<double>>();
    truth.beta0 =
        Eigen::Map<Eigen::VectorXd>(beta0.data(), static_cast<int>(beta0.size()));
    truth.sigma2 = j.at("sigma2").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw io_error("sidecar missing fields: " + std::string(e.what()));
  }
  return truth;
}

}  // namespace rss::sim
