#include "support.hpp"

#include "svmreg/baselines.hpp"
#include "svmreg/model.hpp"

#include <Eigen/LU>
#include <gtest/gtest.h>

#include <cmath>

namespace svmreg {
namespace {

Dataset logistic_data(Eigen::Index n, const Theta& theta, Rng& rng) {
  CovariateMatrix x = testing::normal_matrix(n, theta.dim(), rng);
  std::uniform_real_distribution<double> u;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = u(rng) < logistic_probability(margin(x.row(i).transpose(), theta)) ? 1.0 : -1.0;
  }
  return Dataset(std::move(x), std::move(y));
}

TEST(LogisticProbability, StableAndSymmetric) {
  EXPECT_DOUBLE_EQ(logistic_probability(0.0), 0.5);
  EXPECT_NEAR(logistic_probability(800.0), 1.0, 1e-300);
  EXPECT_GT(logistic_probability(-800.0), -1e-300);
  for (double t = -30.0; t <= 30.0; t += 0.5) {
    EXPECT_NEAR(logistic_probability(t) + logistic_probability(-t), 1.0, 1e-15);
  }
}

TEST(FitLogistic, InterceptZeroOnBalancedUninformativeData) {
  CovariateMatrix x = CovariateMatrix::Zero(6, 1);
  x(0, 0) = 1.0;
  x(1, 0) = 1.0;
  Eigen::VectorXd y(6);
  y << 1, -1, 1, -1, 1, -1;
  const LogisticFit fit = fit_logistic(Dataset(x, y));
  EXPECT_TRUE(fit.converged);
  EXPECT_NEAR(fit.theta_tilde.alpha, 0.0, 1e-10);
  EXPECT_NEAR(fit.theta_tilde.beta[0], 0.0, 1e-10);
  EXPECT_NEAR(fit.loglik, -6.0 * std::log(2.0), 1e-10);
}

TEST(FitLogistic, RecoversCoefficientsAtLargeN) {
  Rng rng = make_stream({41});
  Eigen::VectorXd beta(2);
  beta << 1.0, -0.5;
  const Theta theta0(0.3, beta);
  const Dataset data = logistic_data(100000, theta0, rng);
  const LogisticFit fit = fit_logistic(data);
  ASSERT_TRUE(fit.converged);
  const InferenceReport rep = logistic_sandwich(data, fit);
  const Eigen::VectorXd err = fit.theta_tilde.to_vector() - theta0.to_vector();
  for (Eigen::Index j = 0; j < 3; ++j) EXPECT_LT(std::abs(err[j]), 3.0 * rep.se[j]) << j;
  // Correct specification: the sandwich matches the inverse information.
  const Eigen::MatrixXd info_inv = -rep.a_hat.inverse() / static_cast<double>(data.size());
  EXPECT_LT(((rep.cov - info_inv).cwiseAbs().array() / info_inv.cwiseAbs().array()).maxCoeff(), 0.1);
  EXPECT_GT(rep.se.minCoeff(), 0.0);
  EXPECT_LE(fit.loglik, 0.0);
}

TEST(FitLogistic, EquivariantUnderRescaling) {
  Rng rng = make_stream({42});
  const Dataset data = logistic_data(500, Theta(0.2, testing::normal_vector(3, rng)), rng);
  const LogisticFit base = fit_logistic(data);
  CovariateMatrix scaled = data.x();
  scaled.col(1) *= 7.5;
  const Dataset data2(scaled, data.y());
  const LogisticFit fit2 = fit_logistic(data2);
  EXPECT_NEAR(fit2.theta_tilde.beta[1], base.theta_tilde.beta[1] / 7.5, 1e-8);
  EXPECT_NEAR(fit2.theta_tilde.beta[0], base.theta_tilde.beta[0], 1e-8);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    EXPECT_NEAR(logistic_probability(margin(data2.x().row(i).transpose(), fit2.theta_tilde)),
                logistic_probability(margin(data.x().row(i).transpose(), base.theta_tilde)), 1e-8);
  }
}

TEST(FitLogistic, FlagsSeparation) {
  CovariateMatrix x(4, 1);
  x << -2.0, -1.0, 1.0, 2.0;
  Eigen::VectorXd y(4);
  y << -1, -1, 1, 1;
  const LogisticFit fit = fit_logistic(Dataset(x, y));
  EXPECT_TRUE(fit.separation);
  EXPECT_FALSE(fit.converged);
}

TEST(FitLogistic, MonotoneLikelihoodAlongIterations) {
  Rng rng = make_stream({43});
  const Dataset data = logistic_data(300, Theta(-0.4, testing::normal_vector(2, rng)), rng);
  double prev = -std::numeric_limits<double>::infinity();
  for (int iters = 1; iters <= 8; ++iters) {
    LogisticOptions o;
    o.max_iter = iters;
    const double ll = fit_logistic(data, o).loglik;
    EXPECT_GE(ll, prev - 1e-12);
    prev = ll;
  }
}

TEST(SignRules, TieAndScaleInvariance) {
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  EXPECT_EQ(predict_svm(x, Theta::zeros(2)), Label::Positive);
  LogisticFit fit;
  fit.theta_tilde = Theta::zeros(2);
  EXPECT_EQ(predict_logistic(x, fit), Label::Positive);

  Rng rng = make_stream({44});
  for (int i = 0; i < 500; ++i) {
    const Eigen::VectorXd xi = testing::normal_vector(2, rng);
    const Theta theta(testing::normal_vector(1, rng)[0], testing::normal_vector(2, rng));
    const Theta scaled(3.0 * theta.alpha, 3.0 * theta.beta);
    fit.theta_tilde = theta;
    EXPECT_EQ(predict_svm(xi, theta), predict_svm(xi, scaled));
    EXPECT_EQ(predict_logistic(xi, fit), predict_svm(xi, theta));
    EXPECT_EQ(predict_map(xi, theta), predict_svm(xi, theta));
  }
}

TEST(SvmLambda, Default) { EXPECT_DOUBLE_EQ(default_svm_lambda(200), 0.005); }

}  // namespace
}  // namespace svmreg
