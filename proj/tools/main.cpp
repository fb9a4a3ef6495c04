// Command-line front end: fit, cv, simulate, breakdown, export, score.
// Every run writes its fully resolved configuration next to its results so
// outputs are reproducible from themselves. Exit codes: 0 success,
// 2 validation/contract error, 3 I/O error, 4 enumeration-cap refusal.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rss/errors.hpp"
#include "rss/io.hpp"
#include "rss/model_select.hpp"
#include "rss/random.hpp"
#include "rss/synthetic.hpp"

namespace {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// flag parsing helpers

rss::StandardizationMode parse_mode(const std::string& name) {
  if (name == "robust") return rss::StandardizationMode::robust;
  if (name == "classical") return rss::StandardizationMode::classical;
  if (name == "none") return rss::StandardizationMode::none;
  throw rss::contract_error("unknown standardization mode: " + name);
}

std::string mode_name(rss::StandardizationMode mode) {
  switch (mode) {
    case rss::StandardizationMode::robust: return "robust";
    case rss::StandardizationMode::classical: return "classical";
    default: return "none";
  }
}

rss::mps::Formulation parse_formulation(const std::string& name) {
  if (name == "improved") return rss::mps::Formulation::improved;
  if (name == "basic") return rss::mps::Formulation::basic;
  throw rss::contract_error("unknown formulation: " + name);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

double parse_number(const std::string& tok) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw rss::contract_error("bad number in grid spec: '" + tok + "'");
  }
}

// Expands a comma list with ".." integer ranges and "..." arithmetic
// progressions, e.g. "0..4" or "0.75,0.80,...,1.00".
std::vector<double> expand_list(const std::string& text) {
  std::vector<double> values;
  bool pending_ellipsis = false;
  for (const std::string& tok : split(text, ',')) {
    if (tok.empty()) throw rss::contract_error("empty item in grid spec");
    if (tok == "...") {
      if (values.size() < 2)
        throw rss::contract_error("'...' needs two values before it");
      pending_ellipsis = true;
      continue;
    }
    auto range_pos = tok.find("..");
    if (range_pos != std::string::npos) {
      double lo = parse_number(tok.substr(0, range_pos));
      double hi = parse_number(tok.substr(range_pos + 2));
      if (lo != std::floor(lo) || hi != std::floor(hi) || hi < lo)
        throw rss::contract_error("bad integer range: '" + tok + "'");
      for (double v = lo; v <= hi; v += 1.0) values.push_back(v);
      continue;
    }
    double v = parse_number(tok);
    if (pending_ellipsis) {
      double step = values.back() - values[values.size() - 2];
      if (step <= 0.0)
        throw rss::contract_error("'...' needs an increasing progression");
      double next = values.back() + step;
      while (next < v - 1e-9 * std::max(1.0, std::abs(v))) {
        values.push_back(next);
        next += step;
      }
      pending_ellipsis = false;
    }
    values.push_back(v);
  }
  if (pending_ellipsis)
    throw rss::contract_error("'...' must be followed by an end value");
  return values;
}

// "k=0..20;h=0.75,0.80,...,1.00". h values containing a decimal point are
// fractions of n resolved by round half up; plain integers are absolute.
rss::ParameterGrid parse_grid(const std::string& spec, int n) {
  rss::ParameterGrid grid;
  for (const std::string& segment : split(spec, ';')) {
    if (segment.empty()) continue;
    auto eq = segment.find('=');
    if (eq == std::string::npos)
      throw rss::contract_error("grid segment needs name=list: '" + segment + "'");
    std::string name = segment.substr(0, eq);
    std::string list = segment.substr(eq + 1);
    std::vector<double> values = expand_list(list);
    if (name == "k") {
      std::set<int> ks;
      for (double v : values) {
        if (std::abs(v - std::round(v)) > 1e-9)
          throw rss::contract_error("k values must be integers");
        ks.insert(static_cast<int>(std::round(v)));
      }
      grid.k_values.assign(ks.begin(), ks.end());
    } else if (name == "h") {
      // any plain decimal token marks the whole list as fractions of n
      bool fractional = false;
      for (const auto& t : split(list, ',')) {
        if (t == "..." || t.find("..") != std::string::npos) continue;
        if (t.find('.') != std::string::npos) fractional = true;
      }
      std::set<int> hs;
      for (double v : values) {
        int h;
        if (fractional) {
          if (v <= 0.0 || v > 1.0)
            throw rss::contract_error("fractional h values must lie in (0, 1]");
          h = rss::round_half_up(v * n);
        } else {
          if (std::abs(v - std::round(v)) > 1e-9)
            throw rss::contract_error("absolute h values must be integers");
          h = static_cast<int>(std::round(v));
        }
        hs.insert(h);
      }
      grid.h_values.assign(hs.begin(), hs.end());
    } else {
      throw rss::contract_error("unknown grid dimension: '" + name + "'");
    }
  }
  if (grid.k_values.empty() || grid.h_values.empty())
    throw rss::contract_error("grid spec needs both k and h lists");
  return grid;
}

std::vector<double> parse_magnitudes(const std::string& spec) {
  std::vector<double> out;
  for (const std::string& tok : split(spec, ',')) {
    auto range_pos = tok.find("..");
    if (range_pos != std::string::npos) {
      double lo = parse_number(tok.substr(0, range_pos));
      double hi = parse_number(tok.substr(range_pos + 2));
      if (lo <= 0.0 || hi < lo)
        throw rss::contract_error("bad magnitude range: '" + tok + "'");
      for (double v = lo; v <= hi * (1.0 + 1e-12); v *= 10.0) out.push_back(v);
    } else {
      out.push_back(parse_number(tok));
    }
  }
  if (out.empty()) throw rss::contract_error("no magnitudes given");
  return out;
}

// ---------------------------------------------------------------------------
// data loading

struct LoadedData {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> predictors;
  std::string response;
};

LoadedData load_data(const std::string& path, const std::string& response) {
  rss::io::CsvTable table = rss::io::read_numeric_csv(path);
  int response_col = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c)
    if (table.header[c] == response) response_col = static_cast<int>(c);
  if (response_col < 0) {
    bool numeric = !response.empty() &&
                   response.find_first_not_of("0123456789") == std::string::npos;
    if (numeric) {
      int ix = std::stoi(response);  // 1-based column index
      if (ix >= 1 && ix <= static_cast<int>(table.header.size()))
        response_col = ix - 1;
    }
  }
  if (response_col < 0)
    throw rss::contract_error("response column '" + response + "' not found");

  LoadedData data;
  const int n = static_cast<int>(table.values.rows());
  const int p = static_cast<int>(table.values.cols()) - 1;
  if (p < 1) throw rss::contract_error("need at least one predictor column");
  data.x.resize(n, p);
  data.y = table.values.col(response_col);
  data.response = table.header[response_col];
  int out_col = 0;
  for (int c = 0; c < static_cast<int>(table.values.cols()); ++c) {
    if (c == response_col) continue;
    data.x.col(out_col) = table.values.col(c);
    data.predictors.push_back(table.header[c]);
    ++out_col;
  }
  return data;
}

// ---------------------------------------------------------------------------
// JSON assembly

ordered_json grid_json(const rss::ParameterGrid& grid) {
  return ordered_json{{"k_values", grid.k_values}, {"h_values", grid.h_values}};
}

std::string status_name(rss::SolveStatus status) {
  switch (status) {
    case rss::SolveStatus::heuristic: return "heuristic";
    case rss::SolveStatus::polished: return "polished";
    default: return "exact-optimal";
  }
}

ordered_json model_json(const rss::FitResult& result,
                        const std::vector<std::string>& predictors,
                        const ordered_json& config) {
  ordered_json j;
  j["schema"] = "rss-model/1";
  j["k"] = result.chosen.k;
  j["h"] = result.chosen.h;
  j["intercept"] = result.intercept;
  j["coefficients"] = std::vector<double>(
      result.beta_original.data(),
      result.beta_original.data() + result.beta_original.size());
  j["predictors"] = predictors;
  ordered_json support = ordered_json::array();
  for (int idx : result.solution.support_beta) support.push_back(predictors[idx]);
  j["support"] = support;
  j["support_indices"] = result.solution.support_beta;
  j["inlier_indices"] = result.solution.inlier_set;
  j["objective"] = result.solution.objective;
  j["status"] = status_name(result.solution.status);
  j["hit_iteration_cap"] = result.solution.hit_iteration_cap;
  j["trace"] = result.solution.trace;
  j["config"] = config;
  return j;
}

ordered_json cv_json(const rss::CvResult& cv, const ordered_json& config) {
  ordered_json j;
  j["schema"] = "rss-cv/1";
  j["chosen"] = ordered_json{{"k", cv.chosen.k}, {"h", cv.chosen.h}};
  ordered_json cells = ordered_json::array();
  for (const auto& cell : cv.cells) {
    ordered_json c;
    c["k"] = cell.params.k;
    c["h"] = cell.params.h;
    c["mean_error"] =
        cell.evaluated ? ordered_json(cell.mean_error) : ordered_json(nullptr);
    ordered_json fold_errors = ordered_json::array();
    for (std::size_t f = 0; f < cell.fold_errors.size(); ++f)
      fold_errors.push_back(cell.fold_skipped[f]
                                ? ordered_json(nullptr)
                                : ordered_json(cell.fold_errors[f]));
    c["fold_errors"] = fold_errors;
    c["fold_skipped"] = cell.fold_skipped;
    cells.push_back(c);
  }
  j["cells"] = cells;
  j["config"] = config;
  return j;
}

// ---------------------------------------------------------------------------
// shared options

struct CommonOpts {
  std::string data;
  std::string response = "y";
  std::string grid_spec;
  std::string standardize = "robust";
  double tau = 1.5;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  int threads = 1;
  int max_sweeps = 50;
  int max_iterations = 10000;
  std::string out;
};

std::int64_t enumeration_cap() {
  if (const char* env = std::getenv("RSS_MAX_ENUM")) {
    try {
      return std::stoll(env);
    } catch (const std::exception&) {
      throw rss::contract_error("RSS_MAX_ENUM is not an integer");
    }
  }
  return 20'000'000;
}

int run_fit(const CommonOpts& opts, int k, int h, int k_max, bool use_cv,
            int folds, double alpha, bool run_exact,
            const std::string& export_path, const std::string& formulation) {
  LoadedData data = load_data(opts.data, opts.response);
  const int n = static_cast<int>(data.x.rows());
  const int p = static_cast<int>(data.x.cols());

  rss::FitOptions options;
  options.mode = parse_mode(opts.standardize);
  options.tau = opts.tau;
  options.epsilon = opts.epsilon;
  options.max_sweeps = opts.max_sweeps;
  options.max_iterations = opts.max_iterations;
  options.threads = opts.threads;
  options.run_exact = run_exact;
  options.formulation = parse_formulation(formulation);
  options.max_enumeration = enumeration_cap();
  if (!export_path.empty()) options.export_path = export_path;

  if (!opts.grid_spec.empty()) {
    options.grid = parse_grid(opts.grid_spec, n);
  } else if (k_max >= 0) {
    for (int kk = 0; kk <= std::min({k_max, n - 1, p}); ++kk)
      options.grid.k_values.push_back(kk);
    options.grid.h_values = {h >= 0 ? h : n};
  } else if (k >= 0 && h >= 0) {
    options.grid.k_values = {k};
    options.grid.h_values = {h};
  } else if (use_cv) {
    options.grid = rss::default_parameter_grid(n, p);
  } else {
    throw rss::contract_error(
        "specify --grid, --k-max, or both --k and --h (or use --cv)");
  }
  if (k >= 0 && h >= 0) options.cell = rss::SparsityParams{k, h};

  if (use_cv) {
    rss::CvConfig cv;
    cv.folds = folds;
    cv.trim_alpha = alpha;
    cv.seed = opts.seed;
    options.cv = cv;
    options.cell.reset();
  }

  rss::FitResult result = rss::fit(data.x, data.y, options);

  ordered_json config;
  config["command"] = "fit";
  config["data"] = opts.data;
  config["response"] = data.response;
  config["grid"] = grid_json(options.grid);
  config["cv"] = use_cv ? ordered_json{{"folds", folds}, {"alpha", alpha}}
                        : ordered_json(nullptr);
  config["standardize"] = mode_name(options.mode);
  config["tau"] = opts.tau;
  config["epsilon"] = opts.epsilon;
  config["seed"] = opts.seed;
  config["threads"] = opts.threads;
  config["max_sweeps"] = opts.max_sweeps;
  config["max_iterations"] = opts.max_iterations;
  config["exact"] = run_exact;
  config["export"] = export_path.empty() ? ordered_json(nullptr)
                                         : ordered_json(export_path);
  config["max_enumeration"] = options.max_enumeration;
  config["out"] = opts.out;

  rss::io::write_json(opts.out, model_json(result, data.predictors, config));
  std::cout << "wrote " << opts.out << "\n";
  return 0;
}

int run_cv(const CommonOpts& opts, int folds, double alpha,
           const std::string& model_out) {
  LoadedData data = load_data(opts.data, opts.response);
  const int n = static_cast<int>(data.x.rows());
  const int p = static_cast<int>(data.x.cols());

  rss::FitOptions options;
  options.mode = parse_mode(opts.standardize);
  options.epsilon = opts.epsilon;
  options.max_sweeps = opts.max_sweeps;
  options.max_iterations = opts.max_iterations;
  options.threads = opts.threads;
  options.tau = opts.tau;
  options.grid = opts.grid_spec.empty()
                     ? rss::default_parameter_grid(n, p)
                     : parse_grid(opts.grid_spec, n);
  rss::CvConfig cv;
  cv.folds = folds;
  cv.trim_alpha = alpha;
  cv.seed = opts.seed;
  options.cv = cv;

  rss::FitResult result = rss::fit(data.x, data.y, options);

  ordered_json config;
  config["command"] = "cv";
  config["data"] = opts.data;
  config["response"] = data.response;
  config["grid"] = grid_json(options.grid);
  config["folds"] = folds;
  config["alpha"] = alpha;
  config["standardize"] = mode_name(options.mode);
  config["epsilon"] = opts.epsilon;
  config["seed"] = opts.seed;
  config["threads"] = opts.threads;
  config["max_sweeps"] = opts.max_sweeps;
  config["max_iterations"] = opts.max_iterations;
  config["out"] = opts.out;
  config["model_out"] = model_out;

  rss::io::write_json(opts.out, cv_json(*result.cv, config));
  rss::io::write_json(model_out, model_json(result, data.predictors, config));
  std::cout << "wrote " << opts.out << " and " << model_out << "\n";
  return 0;
}

rss::sim::Setting parse_setting(const std::string& name) {
  if (name == "clean") return rss::sim::Setting::clean;
  if (name == "y") return rss::sim::Setting::contam_y;
  if (name == "x") return rss::sim::Setting::contam_x;
  if (name == "xy") return rss::sim::Setting::contam_xy;
  throw rss::contract_error("unknown contamination setting: " + name);
}

int run_simulate(const CommonOpts& opts, const rss::sim::SimDesign& design,
                 int reps, int folds, double alpha, bool timings) {
  if (reps < 1) throw rss::contract_error("need at least one replication");

  rss::sim::ReplicationConfig rep_config;
  rep_config.design = design;
  rep_config.folds = folds;
  rep_config.trim_alpha = alpha;
  rep_config.epsilon = opts.epsilon;
  rep_config.max_sweeps = opts.max_sweeps;
  rep_config.threads = opts.threads;
  rep_config.grid = opts.grid_spec.empty()
                        ? rss::default_parameter_grid(design.n, design.p,
                                                      std::min(10, design.p))
                        : parse_grid(opts.grid_spec, design.n);

  std::ostringstream csv;
  csv << "rep,seed,estimator,k,h,relative_prediction_error,model_sparsity,"
         "f1,recall,precision,runtime_s\n";
  for (int rep = 0; rep < reps; ++rep) {
    std::uint64_t rep_seed = rss::Rng::derive_seed(opts.seed, rep);
    auto runs = rss::sim::run_replication(rep_config, rep_seed);
    for (const auto& run : runs) {
      csv << rep << "," << rep_seed << "," << run.estimator << ","
          << run.chosen.k << "," << run.chosen.h << ","
          << rss::io::format_double(run.metrics.relative_prediction_error)
          << "," << rss::io::format_double(run.metrics.model_sparsity) << ","
          << rss::io::format_double(run.metrics.f1) << ","
          << rss::io::format_double(run.metrics.recall) << ","
          << rss::io::format_double(run.metrics.precision) << ","
          << rss::io::format_double(timings ? run.runtime_s : 0.0) << "\n";
    }
  }
  rss::io::write_text(opts.out, csv.str());

  ordered_json config;
  config["command"] = "simulate";
  config["design"] = ordered_json{
      {"n", design.n},       {"p", design.p},
      {"p0", design.p0},     {"snr", design.snr},
      {"rho", design.rho},   {"delta", design.delta},
      {"setting", static_cast<int>(design.setting)},
  };
  config["reps"] = reps;
  config["folds"] = folds;
  config["alpha"] = alpha;
  config["grid"] = grid_json(rep_config.grid);
  config["epsilon"] = opts.epsilon;
  config["seed"] = opts.seed;
  config["threads"] = opts.threads;
  config["max_sweeps"] = opts.max_sweeps;
  config["timings"] = timings;
  config["out"] = opts.out;
  rss::io::write_json(opts.out + ".config.json", config);
  std::cout << "wrote " << opts.out << "\n";
  return 0;
}

int run_breakdown(const CommonOpts& opts, const rss::sim::SimDesign& design,
                  int k, int h, int m, const std::string& magnitudes_spec,
                  const std::string& scheme_name) {
  std::vector<double> magnitudes = parse_magnitudes(magnitudes_spec);
  rss::sim::BreakdownScheme scheme;
  if (scheme_name == "response")
    scheme = rss::sim::BreakdownScheme::response_only;
  else if (scheme_name == "both")
    scheme = rss::sim::BreakdownScheme::response_and_predictors;
  else
    throw rss::contract_error("unknown scheme: " + scheme_name);

  rss::Dataset dataset = [&]() {
    if (!opts.data.empty()) {
      LoadedData data = load_data(opts.data, opts.response);
      return rss::Dataset::raw(data.x, data.y);
    }
    rss::sim::SyntheticInstance inst = rss::sim::generate(design);
    return rss::Dataset::raw(inst.x, inst.y);
  }();

  rss::ExactConfig exact;
  exact.max_support_enumeration = enumeration_cap();
  exact.threads = opts.threads;
  auto table = rss::sim::breakdown_experiment(dataset, {k, h}, m, magnitudes,
                                              exact, scheme);
  auto point = rss::sim::breakdown_point(dataset.n(), h);

  std::ostringstream csv;
  csv << "magnitude,objective\n";
  for (const auto& row : table)
    csv << rss::io::format_double(row.magnitude) << ","
        << rss::io::format_double(row.objective) << "\n";
  rss::io::write_text(opts.out, csv.str());

  ordered_json config;
  config["command"] = "breakdown";
  config["data"] = opts.data.empty() ? ordered_json(nullptr)
                                     : ordered_json(opts.data);
  if (opts.data.empty())
    config["design"] = ordered_json{
        {"n", design.n},     {"p", design.p},   {"p0", design.p0},
        {"snr", design.snr}, {"rho", design.rho},
        {"seed", design.seed},
    };
  config["k"] = k;
  config["h"] = h;
  config["m"] = m;
  config["magnitudes"] = magnitudes;
  config["scheme"] = scheme_name;
  config["breakdown_point"] = ordered_json{{"numerator", point.numerator},
                                           {"denominator", point.denominator},
                                           {"value", point.value()}};
  config["out"] = opts.out;
  rss::io::write_json(opts.out + ".config.json", config);
  std::cout << "wrote " << opts.out << " (breakdown point " << point.numerator
            << "/" << point.denominator << ")\n";
  return 0;
}

int run_export(const CommonOpts& opts, int k, int h,
               const std::string& formulation) {
  LoadedData data = load_data(opts.data, opts.response);
  rss::FitOptions options;
  options.mode = parse_mode(opts.standardize);
  options.epsilon = opts.epsilon;
  options.max_sweeps = opts.max_sweeps;
  options.max_iterations = opts.max_iterations;
  options.threads = opts.threads;
  options.tau = opts.tau;
  options.grid.k_values = {k};
  options.grid.h_values = {h};
  options.cell = rss::SparsityParams{k, h};
  options.formulation = parse_formulation(formulation);
  options.export_path = opts.out;
  rss::fit(data.x, data.y, options);
  std::cout << "wrote " << opts.out << " and " << opts.out << ".start\n";
  return 0;
}

int run_score(const std::string& model_path, const std::string& truth_path,
              const std::string& out) {
  std::ifstream in(model_path);
  if (!in) throw rss::io_error("cannot open model: " + model_path);
  nlohmann::json model;
  try {
    in >> model;
  } catch (const nlohmann::json::exception& e) {
    throw rss::io_error("bad model JSON: " + std::string(e.what()));
  }
  std::vector<double> coef;
  double intercept = 0.0;
  try {
    coef = model.at("coefficients").get<std::vector<double>>();
    intercept = model.at("intercept").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw rss::contract_error("model JSON missing fields: " +
                              std::string(e.what()));
  }

  rss::sim::InstanceTruth truth = rss::sim::load_truth(truth_path);
  if (static_cast<int>(coef.size()) != truth.beta0.size())
    throw rss::contract_error("model and truth dimensions disagree");

  Eigen::VectorXd beta =
      Eigen::Map<Eigen::VectorXd>(coef.data(), static_cast<int>(coef.size()));
  rss::sim::SyntheticInstance shim;  // carries design/beta0/sigma2 for scoring
  shim.design = truth.design;
  shim.beta0 = truth.beta0;
  shim.sigma2 = truth.sigma2;
  rss::sim::MetricsReport metrics = rss::sim::f1_score(beta, truth.beta0);
  metrics.relative_prediction_error =
      rss::sim::relative_prediction_error(beta, intercept, shim);

  ordered_json j;
  j["schema"] = "rss-score/1";
  j["relative_prediction_error"] = metrics.relative_prediction_error;
  j["model_sparsity"] = metrics.model_sparsity;
  j["f1"] = metrics.f1;
  j["recall"] = metrics.recall;
  j["precision"] = metrics.precision;
  j["config"] = ordered_json{{"command", "score"},
                             {"model", model_path},
                             {"truth", truth_path},
                             {"out", out}};
  if (out.empty()) {
    std::cout << rss::io::dump_json(j);
  } else {
    rss::io::write_json(out, j);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust subset selection: sparse regression with trimming"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");

  CommonOpts opts;
  int k = -1, h = -1, k_max = -1;
  bool use_cv = false, run_exact = false, timings = false;
  int folds = 10, reps = 30, m = 0;
  double alpha = 0.25;
  std::string export_path, formulation = "improved", model_out = "model.json";
  std::string magnitudes = "1e2..1e8", scheme = "response";
  std::string model_path, truth_path, score_out;
  rss::sim::SimDesign design;
  std::string setting = "clean";

  auto add_common = [&](CLI::App* cmd, bool with_data) {
    cmd->set_help_flag("--help", "print help");
    if (with_data)
      cmd->add_option("data", opts.data, "input CSV with header")->required();
    cmd->add_option("--response", opts.response,
                    "response column name or 1-based index");
    cmd->add_option("--grid", opts.grid_spec,
                    "grid spec, e.g. k=0..20;h=0.75,0.80,...,1.00");
    cmd->add_option("--standardize", opts.standardize,
                    "robust | classical | none");
    cmd->add_option("--tau", opts.tau, "big-M inflation factor (>= 1)");
    cmd->add_option("--epsilon", opts.epsilon, "convergence tolerance");
    cmd->add_option("--seed", opts.seed, "random seed");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = auto)");
    cmd->add_option("--max-sweeps", opts.max_sweeps, "neighborhood sweeps cap");
    cmd->add_option("--max-iterations", opts.max_iterations,
                    "descent iteration cap");
  };

  CLI::App* fit = app.add_subcommand("fit", "fit a model to a CSV");
  add_common(fit, true);
  fit->add_option("--k", k, "sparsity budget for a single-cell fit");
  fit->add_option("--h", h, "untrimmed-observation budget");
  fit->add_option("--k-max", k_max, "grid K = {0..k_max} with H = {n}");
  fit->add_flag("--cv", use_cv, "choose (k, h) by cross-validation");
  fit->add_option("--folds", folds, "cross-validation folds");
  fit->add_option("--alpha", alpha, "trimming share for the CV metric");
  fit->add_flag("--exact", run_exact, "refine the chosen cell exactly");
  fit->add_option("--export", export_path, "write the MIQP as MPS here");
  fit->add_option("--formulation", formulation, "improved | basic");
  fit->add_option("--out", opts.out, "output model JSON")->required();

  CLI::App* cv = app.add_subcommand("cv", "cross-validate the (k, h) grid");
  add_common(cv, true);
  cv->add_option("--folds", folds, "cross-validation folds");
  cv->add_option("--alpha", alpha, "trimming share for the CV metric");
  cv->add_option("--out", opts.out, "output cv JSON")->required();
  cv->add_option("--model-out", model_out, "model JSON for the chosen cell");

  CLI::App* simulate =
      app.add_subcommand("simulate", "synthetic replications vs best subsets");
  add_common(simulate, false);
  simulate->add_option("--n", design.n, "observations");
  simulate->add_option("--p", design.p, "predictors");
  simulate->add_option("--p0", design.p0, "true nonzeros");
  simulate->add_option("--snr", design.snr, "signal-to-noise ratio");
  simulate->add_option("--rho", design.rho, "predictor correlation decay");
  simulate->add_option("--delta", design.delta, "contamination probability");
  simulate->add_option("--setting", setting, "clean | y | x | xy");
  simulate->add_option("--reps", reps, "replications");
  simulate->add_option("--folds", folds, "cross-validation folds");
  simulate->add_option("--alpha", alpha, "trimming share for the CV metric");
  simulate->add_flag("--timings", timings,
                     "record wall-clock runtimes (off keeps outputs "
                     "byte-reproducible)");
  simulate->add_option("--out", opts.out, "output results CSV")->required();

  CLI::App* breakdown =
      app.add_subcommand("breakdown", "contamination-magnitude sweep");
  add_common(breakdown, false);
  breakdown->add_option("--data", opts.data, "optional input CSV");
  breakdown->add_option("--n", design.n, "observations (synthetic source)");
  breakdown->add_option("--p", design.p, "predictors");
  breakdown->add_option("--p0", design.p0, "true nonzeros");
  breakdown->add_option("--snr", design.snr, "signal-to-noise ratio");
  breakdown->add_option("--rho", design.rho, "predictor correlation decay");
  breakdown->add_option("--k", k, "sparsity budget")->required();
  breakdown->add_option("--h", h, "untrimmed-observation budget")->required();
  breakdown->add_option("--m", m, "observations to contaminate")->required();
  breakdown->add_option("--magnitudes", magnitudes,
                        "comma list; a..b expands by decades");
  breakdown->add_option("--scheme", scheme, "response | both");
  breakdown->add_option("--out", opts.out, "output CSV")->required();

  CLI::App* exporter =
      app.add_subcommand("export", "write the MIQP for one (k, h) cell");
  add_common(exporter, true);
  exporter->add_option("--k", k, "sparsity budget")->required();
  exporter->add_option("--h", h, "untrimmed-observation budget")->required();
  exporter->add_option("--formulation", formulation, "improved | basic");
  exporter->add_option("--out", opts.out, "output MPS path")->required();

  CLI::App* score =
      app.add_subcommand("score", "score a model against a synthetic truth");
  score->set_help_flag("--help", "print help");
  score->add_option("--model", model_path, "model JSON from fit")->required();
  score->add_option("--truth", truth_path, "instance sidecar JSON")->required();
  score->add_option("--out", score_out, "metrics JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    design.setting = parse_setting(setting);
    design.seed = opts.seed;
    if (fit->parsed())
      return run_fit(opts, k, h, k_max, use_cv, folds, alpha, run_exact,
                     export_path, formulation);
    if (cv->parsed()) return run_cv(opts, folds, alpha, model_out);
    if (simulate->parsed())
      return run_simulate(opts, design, reps, folds, alpha, timings);
    if (breakdown->parsed())
      return run_breakdown(opts, design, k, h, m, magnitudes, scheme);
    if (exporter->parsed()) return run_export(opts, k, h, formulation);
    if (score->parsed()) return run_score(model_path, truth_path, score_out);
  } catch (const rss::enumeration_cap_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const rss::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const rss::contract_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
