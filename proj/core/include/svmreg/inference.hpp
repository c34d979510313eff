#pragma once

#include "svmreg/dataset.hpp"

#include <Eigen/Core>

#include <string>

namespace svmreg {

/// Condition numbers of A above this are refused by sandwich_cov.
inline constexpr double kMaxConditionNumber = 1e12;

/// Share of kink-proximate samples above which a report carries a warning.
inline constexpr double kKinkWarningFraction = 0.01;

struct InferenceReport {
  Eigen::MatrixXd a_hat;  ///< mean Hessian of the per-sample log-density
  Eigen::MatrixXd b_hat;  ///< mean outer product of per-sample scores
  Eigen::MatrixXd cov;    ///< A^-1 B A^-1 / n
  Eigen::VectorXd se;
  Eigen::VectorXd z;
  Eigen::VectorXd p;
  Eigen::Index n = 0;
  Eigen::Index kink_count = 0;

  bool kink_warning() const {
    return n > 0 && static_cast<double>(kink_count) > kKinkWarningFraction * static_cast<double>(n);
  }
};

struct HessianEstimate {
  Eigen::MatrixXd matrix;
  Eigen::Index kink_count = 0;
};

/// (1/n) sum of per-sample Hessians of log f at theta, with the kink count.
HessianEstimate estimate_A(const Dataset& data, const Theta& theta);

/// (1/n) sum g_i g_i^T with g_i the per-sample score at theta.
Eigen::MatrixXd estimate_B(const Dataset& data, const Theta& theta);

/// A^-1 B A^-1 / n. Throws NumericalError when A is singular or its condition
/// number exceeds kMaxConditionNumber.
Eigen::MatrixXd sandwich_cov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::Index n);

/// Standard normal CDF via erfc.
double normal_cdf(double z);

struct WaldResult {
  Eigen::VectorXd z;
  Eigen::VectorXd p;  ///< two-sided
};

/// Throws std::invalid_argument if any standard error is not strictly positive.
WaldResult wald_test(const Eigen::VectorXd& estimate, const Eigen::VectorXd& se);

/// Sandwich inference for any model whose log-density depends on theta only
/// through the margin: dl and d2l hold the first and second t-derivatives per sample.
/// Throws NumericalError when the sandwich is undefined or a variance vanishes.
InferenceReport margin_model_inference(const Dataset& data, const Theta& theta,
                                       const Eigen::VectorXd& dl, const Eigen::VectorXd& d2l,
                                       Eigen::Index kink_count);

/// Full report for the hinge-likelihood model at theta.
InferenceReport infer(const Dataset& data, const Theta& theta);

struct ExistenceReport {
  bool both_labels_present = false;
  Eigen::Index augmented_rank = 0;
  bool full_rank = false;
  bool remark2_pair_found = false;  ///< duplicate covariates carrying opposite labels
  std::string details;

  /// Labels and rank conditions that the optimiser relies on.
  bool passes_gate() const { return both_labels_present && full_rank; }
};

/// Existence diagnostics for the MLE:
///  - both labels observed;
///  - the n x (d+1) design with a leading column of ones has rank d+1
///    (singular values above max(n, d+1) * eps * sigma_max);
///  - some positive and some negative sample share proportional augmented
///    covariates, which with the leading 1 means equal covariates up to a
///    relative tolerance of 1e-9.
ExistenceReport check_existence(const Dataset& data);

}  // namespace svmreg
