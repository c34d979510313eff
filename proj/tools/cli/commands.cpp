#include "commands.hpp"

#include "csv.hpp"
#include "manifest.hpp"

#include "svmreg/baselines.hpp"
#include "svmreg/inference.hpp"
#include "svmreg/model.hpp"
#include "svmreg/optimizer.hpp"
#include "svmreg/report.hpp"
#include "svmreg/rng.hpp"
#include "svmreg/simulate.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

namespace svmreg::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kFoldStreamTag = 0x464F4C4453;  // "FOLDS"

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const std::string& out_path, const std::string& content, std::ostream& out) {
  if (out_path.empty()) {
    out << content;
  } else {
    write_file_atomic(out_path, content);
  }
}

RunManifest make_manifest(std::string command, json config, std::uint64_t seed,
                          const std::string& input) {
  RunManifest m;
  m.command = std::move(command);
  m.config = std::move(config);
  m.seed = seed;
  if (!input.empty()) m.input_digest = file_digest(input);
  m.version = std::string(artifact_version());
  m.timestamp = utc_timestamp();
  return m;
}

json schema_json(const CsvSchema& s) {
  return {{"label_column", s.label_column},
          {"feature_columns", s.feature_columns},
          {"label_encoding", std::string(to_string(s.label_encoding))}};
}

CsvSchema schema_from_json(const json& j) {
  CsvSchema s;
  s.label_column = j.at("label_column").get<std::string>();
  s.feature_columns = j.at("feature_columns").get<std::vector<std::string>>();
  s.label_encoding = parse_label_encoding(j.at("label_encoding").get<std::string>());
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

/// Label and, for the probabilistic models, P(Y = +1 | x) from a margin.
struct Prediction {
  Label label;
  std::optional<double> probability;
};

Prediction predict_from_margin(Method method, double t) {
  switch (method) {
    case Method::SvmReg: return {predict_map(t), density(Label::Positive, t)};
    case Method::Logistic: return {sign_label(t), logistic_probability(t)};
    case Method::Svm:
    case Method::Approx: return {sign_label(t), std::nullopt};
  }
  return {sign_label(t), std::nullopt};
}

double in_sample_accuracy(const Dataset& data, const Theta& theta, Method method) {
  const Eigen::VectorXd t = margins(data, theta);
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (predict_from_margin(method, t[i]).label == data.label(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

json coefficient_table(const std::vector<std::string>& names, const Theta& theta,
                       const InferenceReport* inf) {
  const Eigen::VectorXd est = theta.to_vector();
  json rows = json::array();
  for (Eigen::Index j = 0; j < est.size(); ++j) {
    json row = {{"name", j == 0 ? std::string("(Intercept)") : names[static_cast<std::size_t>(j - 1)]},
                {"estimate", est[j]}};
    if (inf != nullptr) {
      row["se"] = inf->se[j];
      row["z"] = inf->z[j];
      row["p"] = inf->p[j];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_coefficients(std::ostream& os, const json& rows) {
  os << std::left << std::setw(24) << "term" << std::right << std::setw(13) << "estimate";
  const bool with_se = !rows.empty() && rows[0].contains("se");
  if (with_se) os << std::setw(13) << "se" << std::setw(10) << "z" << std::setw(12) << "p";
  os << "\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(24) << r["name"].get<std::string>() << std::right
       << std::setw(13) << std::setprecision(6) << r["estimate"].get<double>();
    if (with_se) {
      os << std::setw(13) << r["se"].get<double>() << std::setw(10) << std::setprecision(4)
         << r["z"].get<double>() << std::setw(12) << r["p"].get<double>();
    }
    os << "\n";
  }
}

OptOptions make_opt(std::uint64_t seed, int starts, int max_iter) {
  OptOptions opt;
  opt.seed = seed;
  opt.n_starts = starts;
  opt.max_iter = max_iter;
  opt.validate();
  return opt;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string input;
  std::string model = "svmreg";
  std::uint64_t seed = 0;
  int starts = 10;
  int max_iter = 500;
  double lambda = -1.0;
  std::optional<double> poly_c;
  std::optional<int> poly_u;
  std::string label = "y";
  std::string features;
  std::string encoding = "auto";
  std::string out;
};

CsvSchema requested_schema(const std::string& label, const std::string& features,
                           const std::string& encoding) {
  CsvSchema s;
  s.label_column = label;
  s.feature_columns = split_list(features);
  s.label_encoding = parse_label_encoding(encoding);
  return s;
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const Method method = parse_method(a.model);
  const OptOptions opt = make_opt(a.seed, a.starts, a.max_iter);
  const CsvTable table = read_csv(a.input, requested_schema(a.label, a.features, a.encoding));

  Dataset data = table.data;
  std::vector<std::string> names = table.schema.feature_columns;
  json poly = nullptr;
  if (a.poly_u || a.poly_c) {
    const PolyFeatureMap map(data.dim(), a.poly_c.value_or(1.0), a.poly_u.value_or(2));
    data = map.apply(data);
    names = map.feature_names(names);
    poly = {{"c", map.c()}, {"u", a.poly_u.value_or(2)}};
  }

  json warnings = json::array();
  const ExistenceReport existence = check_existence(data);
  if (!existence.passes_gate()) warnings.push_back("existence gate: " + existence.details);

  json config = {{"model", a.model}, {"starts", a.starts}, {"max_iter", a.max_iter},
                 {"poly", poly},     {"schema", schema_json(table.schema)}};

  json report;
  Theta theta;
  std::optional<InferenceReport> inf;
  const auto try_inference = [&](auto&& compute) {
    try {
      inf = compute();
      if (inf->kink_warning()) {
        warnings.push_back(std::to_string(inf->kink_count) +
                           " samples lie within 1e-8 of a hinge kink; standard errors may be unreliable");
      }
    } catch (const NumericalError& e) {
      warnings.push_back(std::string("inference unavailable: ") + e.what());
    }
  };

  switch (method) {
    case Method::SvmReg: {
      const FitResult fit = fit_mle(data, opt);
      theta = fit.theta_hat;
      report["fit"] = to_json(fit);
      if (!fit.converged) warnings.push_back("optimiser did not converge");
      report["loglik_mean"] = fit.loglik;
      report["loglik_total"] = fit.total_loglik;
      try_inference([&] { return infer(data, theta); });
      break;
    }
    case Method::Logistic: {
      const LogisticFit fit = fit_logistic(data);
      theta = fit.theta_tilde;
      report["fit"] = to_json(fit);
      if (fit.separation) warnings.push_back("logistic fit diverged: data appear separable");
      if (!fit.converged) warnings.push_back("Newton iteration did not converge");
      report["loglik_mean"] = fit.loglik / static_cast<double>(data.size());
      report["loglik_total"] = fit.loglik;
      try_inference([&] { return logistic_sandwich(data, fit); });
      break;
    }
    case Method::Svm: {
      const double lambda = a.lambda >= 0.0 ? a.lambda : default_svm_lambda(data.size());
      config["lambda"] = lambda;
      const FitResult fit = fit_svm(data, lambda, opt);
      theta = fit.theta_hat;
      report["fit"] = to_json(fit);
      report["objective"] = -fit.loglik;
      break;
    }
    case Method::Approx: {
      const FitResult fit = fit_approximate(data, opt);
      theta = fit.theta_hat;
      report["fit"] = to_json(fit);
      report["objective"] = -fit.loglik;
      break;
    }
  }

  const json coefficients = coefficient_table(names, theta, inf ? &*inf : nullptr);
  const double acc = in_sample_accuracy(data, theta, method);

  report["manifest"] = to_json(make_manifest("fit", config, a.seed, a.input));
  report["model"] = std::string(to_string(method));
  report["schema"] = schema_json(table.schema);
  report["features"] = {{"poly", poly}, {"names", names}};
  report["n"] = data.size();
  report["class_counts"] = {{"positive", table.positives}, {"negative", table.negatives}};
  report["existence"] = to_json(existence);
  report["theta"] = to_json(theta);
  report["coefficients"] = coefficients;
  report["inference"] = inf ? to_json(*inf) : json(nullptr);
  report["in_sample_accuracy"] = acc;
  report["warnings"] = warnings;

  if (a.out.empty()) {
    out << dump(report);
    return kExitOk;
  }
  write_file_atomic(a.out, dump(report));
  out << "model " << to_string(method) << ", n = " << data.size() << ", d = " << data.dim() << "\n";
  print_coefficients(out, coefficients);
  if (report.contains("loglik_total")) {
    out << std::setprecision(8) << "log-likelihood: mean " << report["loglik_mean"].get<double>()
        << ", total " << report["loglik_total"].get<double>() << "\n";
  } else {
    out << std::setprecision(8) << "objective: " << report["objective"].get<double>() << "\n";
  }
  out << std::setprecision(6) << "in-sample accuracy: " << acc << "\n";
  for (const auto& w : warnings) out << "warning: " << w.get<std::string>() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PredictArgs {
  std::string model_path;
  std::string input;
  std::string out;
};

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  json report;
  try {
    report = json::parse(read_file(a.model_path));
  } catch (const json::parse_error& e) {
    throw DataError("model report '" + a.model_path + "' is not valid JSON: " + e.what());
  }
  Method method{};
  CsvSchema schema;
  Theta theta;
  json poly;
  try {
    method = parse_method(report.at("model").get<std::string>());
    schema = schema_from_json(report.at("schema"));
    const json& th = report.at("theta");
    theta.alpha = th.at("alpha").get<double>();
    const auto beta = th.at("beta").get<std::vector<double>>();
    theta.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
    poly = report.at("features").at("poly");
  } catch (const json::exception& e) {
    throw DataError("model report '" + a.model_path + "' lacks a fitted model: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError("model report '" + a.model_path + "': " + e.what());
  }

  const CsvFeatures feats = read_csv_features(a.input, schema);
  CovariateMatrix x = feats.x;
  if (!poly.is_null()) {
    const PolyFeatureMap map(x.cols(), poly.at("c").get<double>(), poly.at("u").get<int>());
    CovariateMatrix z(x.rows(), map.output_dim());
    for (Eigen::Index i = 0; i < x.rows(); ++i) z.row(i) = map.apply(x.row(i).transpose()).transpose();
    x = std::move(z);
  }
  if (x.cols() != theta.beta.size()) {
    throw DataError("feature count " + std::to_string(x.cols()) + " does not match the fitted model (" +
                    std::to_string(theta.beta.size()) + ")");
  }

  std::ostringstream csv;
  csv << std::setprecision(17);
  const bool with_prob = method == Method::SvmReg || method == Method::Logistic;
  csv << "row,label" << (with_prob ? ",probability" : "") << "\n";
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Prediction p = predict_from_margin(method, margin(x.row(i).transpose(), theta));
    csv << i + 1 << "," << encode_label(p.label, schema.label_encoding);
    if (with_prob) csv << "," << *p.probability;
    csv << "\n";
    if (feats.y && ((*feats.y)[i] > 0) == (p.label == Label::Positive)) ++hits;
  }
  emit(a.out, csv.str(), out);
  if (feats.y) {
    std::ostream& os = a.out.empty() ? err : out;
    os << std::setprecision(6)
       << "accuracy: " << static_cast<double>(hits) / static_cast<double>(x.rows()) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string study;
  std::string config_file;
  std::vector<int> n_grid;
  std::vector<int> d_grid;
  std::vector<double> omega_grid;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::optional<int> test_size;
  std::optional<double> theta0;
  std::optional<int> starts;
  std::optional<int> max_iter;
  std::string out;
};

template <class T>
void take(const json& cfg, const char* key, T& dst) {
  if (cfg.contains(key)) dst = cfg.at(key).get<T>();
}

int cmd_simulate(SimulateArgs a, std::ostream& out) {
  json file_cfg = json::object();
  if (!a.config_file.empty()) {
    try {
      file_cfg = json::parse(read_file(a.config_file));
    } catch (const json::parse_error& e) {
      throw UsageError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!file_cfg.is_object()) throw UsageError("config file must hold a JSON object");
    if (a.study.empty()) take(file_cfg, "study", a.study);
  }
  if (a.study != "mse" && a.study != "acc") throw UsageError("--study must be mse or acc");

  OptOptions opt;
  try {
    take(file_cfg, "starts", opt.n_starts);
    take(file_cfg, "max_iter", opt.max_iter);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  if (a.starts) opt.n_starts = *a.starts;
  if (a.max_iter) opt.max_iter = *a.max_iter;

  json config;
  ExperimentReport rep;
  try {
    if (a.study == "mse") {
      MseConfig cfg;
      take(file_cfg, "n_grid", cfg.n_grid);
      take(file_cfg, "d_grid", cfg.d_grid);
      take(file_cfg, "reps", cfg.replications);
      take(file_cfg, "seed", cfg.seed);
      take(file_cfg, "theta0", cfg.theta0_fill);
      if (!a.n_grid.empty()) cfg.n_grid = a.n_grid;
      if (!a.d_grid.empty()) cfg.d_grid = a.d_grid;
      if (a.reps) cfg.replications = *a.reps;
      if (a.seed) cfg.seed = *a.seed;
      if (a.theta0) cfg.theta0_fill = *a.theta0;
      cfg.opt = opt;
      cfg.validate();
      config = {{"study", "mse"},         {"n_grid", cfg.n_grid},       {"d_grid", cfg.d_grid},
                {"reps", cfg.replications}, {"theta0", cfg.theta0_fill}, {"starts", opt.n_starts},
                {"max_iter", opt.max_iter}};
      rep = run_mse_experiment(cfg);
    } else {
      AccConfig cfg;
      take(file_cfg, "n_grid", cfg.n_grid);
      take(file_cfg, "d_grid", cfg.d_grid);
      take(file_cfg, "omega_grid", cfg.omega_grid);
      take(file_cfg, "test_size", cfg.test_size);
      take(file_cfg, "reps", cfg.replications);
      take(file_cfg, "seed", cfg.seed);
      if (!a.n_grid.empty()) cfg.n_grid = a.n_grid;
      if (!a.d_grid.empty()) cfg.d_grid = a.d_grid;
      if (!a.omega_grid.empty()) cfg.omega_grid = a.omega_grid;
      if (a.test_size) cfg.test_size = *a.test_size;
      if (a.reps) cfg.replications = *a.reps;
      if (a.seed) cfg.seed = *a.seed;
      cfg.opt = opt;
      cfg.validate();
      config = {{"study", "acc"},           {"n_grid", cfg.n_grid},       {"d_grid", cfg.d_grid},
                {"omega_grid", cfg.omega_grid}, {"test_size", cfg.test_size}, {"reps", cfg.replications},
                {"starts", opt.n_starts},       {"max_iter", opt.max_iter}};
      rep = run_accuracy_experiment(cfg);
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  json report = to_json(rep);
  report["manifest"] = to_json(make_manifest("simulate", config, rep.seed, ""));
  const std::string table = rep.study == "mse" ? format_mse_table(rep) : format_accuracy_table(rep);
  if (a.out.empty()) {
    out << dump(report);
  } else {
    write_file_atomic(a.out, dump(report));
    out << table;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CvArgs {
  std::string input;
  int k = 5;
  std::string methods = "svmreg,svm";
  std::uint64_t seed = 0;
  int starts = 10;
  int max_iter = 500;
  double lambda = -1.0;
  std::string label = "y";
  std::string features;
  std::string encoding = "auto";
  std::string out;
};

int cmd_cv(const CvArgs& a, std::ostream& out) {
  std::vector<Method> methods;
  for (const auto& name : split_list(a.methods)) methods.push_back(parse_method(name));
  if (methods.empty()) throw UsageError("--methods is empty");
  const OptOptions opt = make_opt(a.seed, a.starts, a.max_iter);
  const CsvTable table = read_csv(a.input, requested_schema(a.label, a.features, a.encoding));
  if (a.k < 2 || a.k > table.data.size()) throw UsageError("--k must lie between 2 and the number of rows");

  Rng rng = make_stream({a.seed, kFoldStreamTag});
  const FoldPlan folds = make_folds(table.data.size(), a.k, rng);

  json results = json::object();
  std::ostringstream text;
  text << std::setprecision(4) << std::fixed;
  for (Method m : methods) {
    const CvResult cv = kfold_cv(table.data, folds, make_trainer(m, opt, a.lambda));
    results[std::string(to_string(m))] = to_json(cv);
    text << std::left << std::setw(10) << to_string(m) << cv.mean << " (" << cv.sd << ")";
    if (!cv.excluded_folds.empty()) text << "  [" << cv.excluded_folds.size() << " folds excluded]";
    text << "\n";
  }

  std::vector<std::string> method_names;
  for (Method m : methods) method_names.emplace_back(to_string(m));
  const json config = {{"k", a.k},           {"methods", method_names}, {"starts", a.starts},
                       {"max_iter", a.max_iter}, {"lambda", a.lambda},      {"schema", schema_json(table.schema)}};
  json report = {{"manifest", to_json(make_manifest("cv", config, a.seed, a.input))},
                 {"schema", schema_json(table.schema)},
                 {"k", a.k},
                 {"n", table.data.size()},
                 {"fold_of", folds.fold_of},
                 {"methods", results}};
  if (a.out.empty()) {
    out << dump(report);
  } else {
    write_file_atomic(a.out, dump(report));
    out << text.str();
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string input;
  std::string label = "y";
  std::string features;
  std::string encoding = "auto";
  std::string out;
};

int cmd_check(const CheckArgs& a, std::ostream& out) {
  const CsvTable table = read_csv(a.input, requested_schema(a.label, a.features, a.encoding));
  const ExistenceReport rep = check_existence(table.data);
  const json report = {
      {"manifest", to_json(make_manifest("check", {{"schema", schema_json(table.schema)}}, 0, a.input))},
      {"schema", schema_json(table.schema)},
      {"n", table.data.size()},
      {"class_counts", {{"positive", table.positives}, {"negative", table.negatives}}},
      {"existence", to_json(rep)}};
  if (a.out.empty()) {
    out << dump(report);
  } else {
    write_file_atomic(a.out, dump(report));
    out << "both labels present: " << (rep.both_labels_present ? "yes" : "no") << "\n"
        << "augmented rank: " << rep.augmented_rank << " of " << table.data.dim() + 1 << "\n"
        << "duplicate covariates with opposite labels: " << (rep.remark2_pair_found ? "yes" : "no") << "\n"
        << "gate: " << (rep.passes_gate() ? "pass" : "fail") << "\n";
    if (!rep.details.empty()) out << rep.details << "\n";
  }
  return kExitOk;
}

void add_schema_flags(CLI::App* sub, std::string& label, std::string& features, std::string& encoding) {
  sub->add_option("--label", label, "Label column name")->capture_default_str();
  sub->add_option("--features", features, "Comma-separated feature columns (default: all others)");
  sub->add_option("--label-encoding", encoding, "auto, pm1 or 01")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hinge-likelihood binary regression: fit, predict, simulate, cross-validate, check", "svmreg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(artifact_version()));

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model to a labelled CSV file");
  fit_cmd->add_option("input", fit.input, "Input CSV")->required();
  fit_cmd->add_option("--model", fit.model, "svmreg, logistic, svm or approx")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Seed for the random restarts")->capture_default_str();
  fit_cmd->add_option("--starts", fit.starts, "Optimiser starting points")->capture_default_str();
  fit_cmd->add_option("--max-iter", fit.max_iter, "BFGS iterations per start")->capture_default_str();
  fit_cmd->add_option("--lambda", fit.lambda, "SVM ridge weight (default 1/n)");
  fit_cmd->add_option("--poly-c", fit.poly_c, "Polynomial feature offset c (default 1)");
  fit_cmd->add_option("--poly-u", fit.poly_u, "Polynomial feature degree u (default 2)");
  add_schema_flags(fit_cmd, fit.label, fit.features, fit.encoding);
  fit_cmd->add_option("--out", fit.out, "Write the JSON report here");

  PredictArgs pred;
  auto* pred_cmd = app.add_subcommand("predict", "Predict labels with a fitted report");
  pred_cmd->add_option("--model", pred.model_path, "Report written by fit")->required();
  pred_cmd->add_option("input", pred.input, "Input CSV")->required();
  pred_cmd->add_option("--out", pred.out, "Write predictions CSV here");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo study");
  sim_cmd->add_option("--study", sim.study, "mse or acc");
  sim_cmd->add_option("--config", sim.config_file, "JSON file with study settings");
  sim_cmd->add_option("--n-grid", sim.n_grid, "Sample sizes")->delimiter(',');
  sim_cmd->add_option("--d-grid", sim.d_grid, "Covariate dimensions")->delimiter(',');
  sim_cmd->add_option("--omega-grid", sim.omega_grid, "Mixture overlaps (acc)")->delimiter(',');
  sim_cmd->add_option("--reps", sim.reps, "Replications per cell");
  sim_cmd->add_option("--seed", sim.seed, "Master seed");
  sim_cmd->add_option("--test-size", sim.test_size, "Test sample size (acc)");
  sim_cmd->add_option("--theta0", sim.theta0, "Value of every true coefficient (mse)");
  sim_cmd->add_option("--starts", sim.starts, "Optimiser starting points");
  sim_cmd->add_option("--max-iter", sim.max_iter, "BFGS iterations per start");
  sim_cmd->add_option("--out", sim.out, "Write the JSON report here");

  CvArgs cv;
  auto* cv_cmd = app.add_subcommand("cv", "K-fold cross-validated accuracy on a shared partition");
  cv_cmd->add_option("input", cv.input, "Input CSV")->required();
  cv_cmd->add_option("--k", cv.k, "Number of folds")->capture_default_str();
  cv_cmd->add_option("--methods", cv.methods, "Comma-separated methods")->capture_default_str();
  cv_cmd->add_option("--seed", cv.seed, "Seed for folds and restarts")->capture_default_str();
  cv_cmd->add_option("--starts", cv.starts, "Optimiser starting points")->capture_default_str();
  cv_cmd->add_option("--max-iter", cv.max_iter, "BFGS iterations per start")->capture_default_str();
  cv_cmd->add_option("--lambda", cv.lambda, "SVM ridge weight (default 1/n of each training set)");
  add_schema_flags(cv_cmd, cv.label, cv.features, cv.encoding);
  cv_cmd->add_option("--out", cv.out, "Write the JSON report here");

  CheckArgs chk;
  auto* chk_cmd = app.add_subcommand("check", "Existence diagnostics for the maximum likelihood estimate");
  chk_cmd->add_option("input", chk.input, "Input CSV")->required();
  add_schema_flags(chk_cmd, chk.label, chk.features, chk.encoding);
  chk_cmd->add_option("--out", chk.out, "Write the JSON report here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    for (auto* sub : app.get_subcommands()) out << sub->help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << artifact_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (pred_cmd->parsed()) return cmd_predict(pred, out, err);
    if (sim_cmd->parsed()) return cmd_simulate(sim, out);
    if (cv_cmd->parsed()) return cmd_cv(cv, out);
    if (chk_cmd->parsed()) return cmd_check(chk, out);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnexpected;
  }
  return kExitUsage;
}

}  // namespace svmreg::cli
