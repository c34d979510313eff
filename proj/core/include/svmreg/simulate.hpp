#pragma once

#include "svmreg/dataset.hpp"
#include "svmreg/optimizer.hpp"
#include "svmreg/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace svmreg {

// ---------------------------------------------------------------------------
// Generators

/// Standard-normal covariates; labels drawn from the hinge-likelihood model at theta0.
Dataset gen_model_data(Eigen::Index n, Eigen::Index d, const Theta& theta0, Rng& rng);

/// Distance between the component means that gives pairwise overlap omega_bar
/// for two equal-weight unit-covariance Gaussians: -2 * Phi^-1(omega_bar / 2).
double mixture_separation(double omega_bar);

/// Accuracy of the Bayes rule for the mixture: 1 - omega_bar / 2.
inline double mixture_bayes_accuracy(double omega_bar) { return 1.0 - 0.5 * omega_bar; }

/// Equal-weight two-component spherical Gaussian mixture with means +-(Delta/2) e_1;
/// the label is the component. Throws std::invalid_argument unless 0 < omega_bar < 1.
Dataset gen_mixture_data(Eigen::Index n, Eigen::Index d, double omega_bar, Rng& rng);

// ---------------------------------------------------------------------------
// Classifiers and cross-validation

enum class Method { SvmReg, Logistic, Svm, Approx };

std::string_view to_string(Method m);
/// Accepts svmreg, logistic, svm, approx. Throws std::invalid_argument otherwise.
Method parse_method(std::string_view name);

using Predictor = std::function<Label(const Eigen::Ref<const Eigen::VectorXd>&)>;
using Trainer = std::function<Predictor(const Dataset&)>;

/// Fits `method` and returns its sign/MAP rule. Svm uses lambda = 1/n unless `svm_lambda` >= 0.
Trainer make_trainer(Method method, const OptOptions& opts, double svm_lambda = -1.0);

double accuracy(const Dataset& test, const Predictor& predict);

/// Fold index per sample; sizes differ by at most one.
struct FoldPlan {
  int k = 0;
  std::vector<int> fold_of;
};

/// Throws std::invalid_argument unless 2 <= k <= n.
FoldPlan make_folds(Eigen::Index n, int k, Rng& rng);

struct CvResult {
  double mean = 0.0;
  double sd = 0.0;
  std::vector<double> fold_accuracy;  ///< NaN for excluded folds
  std::vector<int> excluded_folds;    ///< training complement lacked a label class
};

CvResult kfold_cv(const Dataset& data, const FoldPlan& folds, const Trainer& train);
CvResult kfold_cv(const Dataset& data, int k, const Trainer& train, Rng& rng);

// ---------------------------------------------------------------------------
// Experiments

struct MseConfig {
  std::vector<int> n_grid{100, 200, 500, 1000, 2000};
  std::vector<int> d_grid{1, 5, 10};
  int replications = 100;
  double theta0_fill = 1.0;  ///< theta0 = theta0_fill * (1, ..., 1) in every dimension
  std::uint64_t seed = 1;
  OptOptions opt{};

  void validate() const;
};

struct AccConfig {
  std::vector<int> n_grid{100, 1000};
  std::vector<int> d_grid{2, 5};
  std::vector<double> omega_grid{0.05, 0.5};
  int test_size = 1000;
  int replications = 100;
  std::uint64_t seed = 1;
  OptOptions opt{};

  void validate() const;
};

struct CellSummary {
  int n = 0;
  int d = 0;
  std::string scenario;
  std::string method;
  double mean = 0.0;  ///< MSE or mean accuracy
  double sd = 0.0;
  int r_effective = 0;
  int nonconverged = 0;
  int failures = 0;
  std::vector<double> values;  ///< per replication; NaN where the fit failed
  double runtime_s = 0.0;      ///< wall clock for the cell (shared by the methods of a cell)
};

struct ExperimentReport {
  std::string study;  ///< "mse" or "acc"
  std::uint64_t seed = 0;
  std::vector<CellSummary> cells;

  /// nullptr when absent.
  const CellSummary* find(int n, int d, std::string_view scenario, std::string_view method) const;
};

std::string mse_scenario(double theta0_fill);
std::string acc_scenario(double omega_bar);

/// R replications per (n, d) of: simulate, fit_mle, record |theta_hat - theta0|^2.
/// Replication r of cell (n, d) draws from make_stream({seed, n, d, r}).
ExperimentReport run_mse_experiment(const MseConfig& cfg);

/// Per (n, d, omega_bar): train the MAP rule, logistic regression and the SVM on n
/// mixture samples and score each on test_size fresh samples.
ExperimentReport run_accuracy_experiment(const AccConfig& cfg);

/// Mean and sample standard deviation (n - 1 denominator) of the finite entries.
struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  int count = 0;
};
Moments moments(const std::vector<double>& values);

}  // namespace svmreg
