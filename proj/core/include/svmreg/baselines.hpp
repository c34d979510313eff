#pragma once

#include "svmreg/dataset.hpp"
#include "svmreg/inference.hpp"

#include <Eigen/Core>

namespace svmreg {

struct LogisticFit {
  Theta theta_tilde;
  double loglik = 0.0;  ///< total, natural log
  bool converged = false;
  bool separation = false;  ///< |theta| passed 1e3, or the final fit separates the classes
  int n_iter = 0;
  double grad_norm = 0.0;
};

struct LogisticOptions {
  int max_iter = 100;
  double grad_tol = 1e-10;  ///< on the mean gradient
  double divergence_norm = 1e3;
};

/// Maximises sum log sigma(y t) by Newton steps, halving any step that lowers the
/// likelihood. Throws NumericalError when the Newton system is singular.
LogisticFit fit_logistic(const Dataset& data, const LogisticOptions& opts = {});

double logistic_probability(double t);  ///< P(Y = +1 | t)

/// Robust (sandwich) standard errors, z and p for a logistic fit.
InferenceReport logistic_sandwich(const Dataset& data, const LogisticFit& fit);

Label predict_logistic(const Eigen::Ref<const Eigen::VectorXd>& x, const LogisticFit& fit);
Label predict_svm(const Eigen::Ref<const Eigen::VectorXd>& x, const Theta& theta);

/// Default ridge weight for the SVM comparator.
inline double default_svm_lambda(Eigen::Index n) { return 1.0 / static_cast<double>(n); }

}  // namespace svmreg
