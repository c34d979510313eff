#include "svmreg/baselines.hpp"

#include "svmreg/model.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace svmreg {

namespace {

// log sigma(u) without overflow
double log_sigmoid(double u) { return u >= 0.0 ? -std::log1p(std::exp(-u)) : u - std::log1p(std::exp(u)); }

double total_loglik(const Dataset& data, const Eigen::VectorXd& t) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) ll += log_sigmoid(data.y()[i] * t[i]);
  return ll;
}

}  // namespace

double logistic_probability(double t) {
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

LogisticFit fit_logistic(const Dataset& data, const LogisticOptions& opts) {
  const Eigen::Index n = data.size();
  const Eigen::Index d = data.dim();
  const double inv_n = 1.0 / static_cast<double>(n);

  Eigen::MatrixXd design(n, d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = data.x();

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd t = design * theta;
  double ll = total_loglik(data, t);

  LogisticFit fit;
  for (fit.n_iter = 0; fit.n_iter < opts.max_iter; ++fit.n_iter) {
    Eigen::VectorXd score(n);
    Eigen::VectorXd weight(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double y = data.y()[i];
      score[i] = y * logistic_probability(-y * t[i]);
      const double p = logistic_probability(t[i]);
      weight[i] = p * (1.0 - p);
    }
    const Eigen::VectorXd grad = design.transpose() * score * inv_n;
    fit.grad_norm = grad.norm();
    if (fit.grad_norm <= opts.grad_tol) {
      fit.converged = true;
      break;
    }
    const Eigen::MatrixXd info = design.transpose() * weight.asDiagonal() * design * inv_n;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-14 * ldlt.vectorD().maxCoeff()) {
      throw NumericalError("singular Newton system in logistic regression");
    }
    const Eigen::VectorXd step = ldlt.solve(grad);

    double scale = 1.0;
    Eigen::VectorXd next = theta + step;
    Eigen::VectorXd t_next = design * next;
    double ll_next = total_loglik(data, t_next);
    for (int halving = 0; halving < 30 && !(ll_next >= ll); ++halving) {
      scale *= 0.5;
      next = theta + scale * step;
      t_next = design * next;
      ll_next = total_loglik(data, t_next);
    }
    if (!(ll_next >= ll)) break;  // no ascent along the Newton direction

    const bool stalled = std::abs(ll_next - ll) <= 1e-15 * std::max(1.0, std::abs(ll));
    theta = std::move(next);
    t = std::move(t_next);
    ll = ll_next;
    if (theta.norm() > opts.divergence_norm) {
      fit.separation = true;
      ++fit.n_iter;
      break;
    }
    if (stalled) {
      ++fit.n_iter;
      fit.converged = true;
      break;
    }
  }
  // Every sample strictly on its own side: the likelihood has no maximiser.
  if ((data.y().array() * t.array() > 0.0).all()) {
    fit.separation = true;
    fit.converged = false;
  }
  fit.theta_tilde = Theta::from_vector(theta);
  fit.loglik = ll;
  return fit;
}

InferenceReport logistic_sandwich(const Dataset& data, const LogisticFit& fit) {
  const Eigen::VectorXd t = margins(data, fit.theta_tilde);
  Eigen::VectorXd dl(t.size());
  Eigen::VectorXd d2l(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double y = data.y()[i];
    const double p = logistic_probability(t[i]);
    dl[i] = y * logistic_probability(-y * t[i]);
    d2l[i] = -p * (1.0 - p);
  }
  return margin_model_inference(data, fit.theta_tilde, dl, d2l, 0);
}

Label predict_logistic(const Eigen::Ref<const Eigen::VectorXd>& x, const LogisticFit& fit) {
  return sign_label(margin(x, fit.theta_tilde));
}

Label predict_svm(const Eigen::Ref<const Eigen::VectorXd>& x, const Theta& theta) {
  return sign_label(margin(x, theta));
}

}  // namespace svmreg
