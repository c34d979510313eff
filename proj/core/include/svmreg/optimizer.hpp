#pragma once

#include "svmreg/dataset.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace svmreg {

struct OptOptions {
  int max_iter = 500;
  double grad_tol = 1e-8;
  double f_tol = 1e-12;  ///< relative objective change counted as a stall
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int n_starts = 10;
  double init_scale = 1.0;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when the documented ranges are violated.
  void validate() const;
};

/// Objective value; writes the gradient into the second argument.
using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

enum class Termination {
  GradientTolerance,
  ObjectiveStall,
  MaxIterations,
  LineSearchFailed,
};

std::string_view to_string(Termination t);

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd grad;
  double grad_norm = 0.0;
  int n_iter = 0;
  int n_evals = 0;
  int update_skips = 0;
  bool converged = false;
  Termination reason = Termination::MaxIterations;
};

/// BFGS on the inverse Hessian with a weak Wolfe bracketing line search.
///
/// Suited to objectives that are only piecewise smooth: the line search only
/// asks for sufficient decrease and a one-sided curvature increase, and the
/// update is skipped when s.y <= 1e-12 (three skips in a row reset the
/// approximation to the identity). Convergence is a small gradient or a
/// relative objective stall below f_tol; a line search that cannot satisfy
/// both conditions within 50 steps stops the run with converged = false at the
/// best point seen. Throws NumericalError if the objective is not finite at x0.
BfgsResult minimize_bfgs(const Objective& objective, const Eigen::VectorXd& x0,
                         const OptOptions& opts);

struct FitResult {
  Theta theta_hat;
  double loglik = 0.0;        ///< mean objective at the optimum (log-likelihood for fit_mle)
  double total_loglik = 0.0;  ///< n * loglik
  bool converged = false;
  int n_iter = 0;
  double grad_norm = 0.0;
  int start_index = 0;
  std::vector<double> all_start_logliks;
  Termination reason = Termination::MaxIterations;
};

/// Starting points: the zero vector first, then standard-normal draws scaled
/// by init_scale, each start using its own stream derived from (seed, index).
std::vector<Eigen::VectorXd> start_points(Eigen::Index n_params, const OptOptions& opts);

/// Maximum likelihood for the hinge-likelihood model, best of opts.n_starts runs.
/// Data lacking one of the labels is fitted anyway and reported as not converged.
FitResult fit_mle(const Dataset& data, const OptOptions& opts);

/// Minimises the mean hinge loss (1/n) sum [1 - y t]_+; loglik holds minus that mean.
FitResult fit_approximate(const Dataset& data, const OptOptions& opts);

/// Minimises (1/n) sum [1 - y t]_+ + lambda * |beta|^2 (alpha is not penalised).
/// loglik holds minus the penalised objective. Throws std::invalid_argument for lambda < 0.
FitResult fit_svm(const Dataset& data, double lambda, const OptOptions& opts);

/// Objectives as minimised by the fitters above, exposed for testing and diagnostics.
double neg_log_likelihood_objective(const Dataset& data, const Eigen::VectorXd& packed,
                                    Eigen::VectorXd& grad);
double hinge_objective(const Dataset& data, double lambda, const Eigen::VectorXd& packed,
                       Eigen::VectorXd& grad);

}  // namespace svmreg
