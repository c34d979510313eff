#include "support.hpp"

#include "svmreg/model.hpp"
#include "svmreg/parallel.hpp"
#include "svmreg/report.hpp"
#include "svmreg/simulate.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace svmreg {
namespace {

TEST(GenModelData, FairCoinAtZeroTheta) {
  Rng rng = make_stream({51});
  const Dataset data = gen_model_data(10000, 3, Theta::zeros(3), rng);
  EXPECT_LT(std::abs(data.y().mean()), 4.0 / std::sqrt(10000.0));
}

TEST(GenModelData, Deterministic) {
  const Theta theta(1.0, Eigen::VectorXd::Ones(2));
  Rng a = make_stream({52, 7});
  Rng b = make_stream({52, 7});
  const Dataset da = gen_model_data(100, 2, theta, a);
  const Dataset db = gen_model_data(100, 2, theta, b);
  EXPECT_EQ(da.x(), db.x());
  EXPECT_EQ(da.y(), db.y());
}

TEST(GenModelData, CalibratedChiSquare) {
  Rng rng = make_stream({53});
  const Theta theta(0.5, Eigen::VectorXd::Constant(1, 1.5));
  const Dataset data = gen_model_data(100000, 1, theta, rng);
  const Eigen::VectorXd t = margins(data, theta);
  constexpr int kBins = 20;
  std::vector<double> observed(kBins, 0.0);
  std::vector<double> expected(kBins, 0.0);
  std::vector<double> count(kBins, 0.0);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double u = normal_cdf((t[i] - 0.5) / 1.5);  // t ~ N(0.5, 1.5^2): equal-mass bins
    const int b = std::min(kBins - 1, static_cast<int>(u * kBins));
    const double p = density(Label::Positive, t[i]);
    count[b] += 1.0;
    expected[b] += p;
    if (data.y()[i] > 0) observed[b] += 1.0;
  }
  double chi2 = 0.0;
  for (int b = 0; b < kBins; ++b) {
    const double e1 = expected[b];
    const double e0 = count[b] - expected[b];
    chi2 += (observed[b] - e1) * (observed[b] - e1) / e1;
    chi2 += ((count[b] - observed[b]) - e0) * ((count[b] - observed[b]) - e0) / e0;
  }
  const boost::math::chi_squared dist(kBins);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 1e-3) << "chi2 = " << chi2;
}

TEST(Mixture, SeparationAndBayesAccuracy) {
  EXPECT_NEAR(mixture_separation(0.05), 3.919927969080109, 1e-12);
  EXPECT_NEAR(mixture_separation(0.5), 1.3489795003921634, 1e-12);
  EXPECT_LT(mixture_separation(0.999), 0.01);
  EXPECT_DOUBLE_EQ(mixture_bayes_accuracy(0.05), 0.975);
  EXPECT_DOUBLE_EQ(mixture_bayes_accuracy(0.5), 0.75);
  Rng rng = make_stream({54});
  EXPECT_THROW(gen_mixture_data(10, 2, 0.0, rng), std::invalid_argument);
  EXPECT_THROW(gen_mixture_data(10, 2, 1.0, rng), std::invalid_argument);
}

TEST(Mixture, BayesRuleAccuracyMatchesOverlap) {
  Rng rng = make_stream({55});
  for (double omega : {0.05, 0.5}) {
    const Dataset data = gen_mixture_data(200000, 3, omega, rng);
    Eigen::Index hits = 0;
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      if ((data.x()(i, 0) >= 0.0) == (data.y()[i] > 0)) ++hits;
    }
    const double acc = static_cast<double>(hits) / 200000.0;
    EXPECT_NEAR(acc, mixture_bayes_accuracy(omega), 4.0 * std::sqrt(0.25 / 200000.0));
    EXPECT_LT(std::abs(data.y().mean()), 4.0 / std::sqrt(200000.0));
  }
}

TEST(Methods, ParseRoundTrip) {
  for (Method m : {Method::SvmReg, Method::Logistic, Method::Svm, Method::Approx}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_method("lasso"), std::invalid_argument);
}

TEST(Folds, NearEqualSizes) {
  Rng rng = make_stream({56});
  const FoldPlan plan = make_folds(23, 5, rng);
  std::vector<int> sizes(5, 0);
  for (int f : plan.fold_of) ++sizes[static_cast<std::size_t>(f)];
  EXPECT_EQ(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1);
  Rng again = make_stream({56});
  EXPECT_EQ(make_folds(23, 5, again).fold_of, plan.fold_of);
  EXPECT_THROW(make_folds(3, 4, rng), std::invalid_argument);
  EXPECT_THROW(make_folds(3, 1, rng), std::invalid_argument);
}

TEST(KfoldCv, ConstantClassifier) {
  Rng rng = make_stream({57});
  CovariateMatrix x = testing::normal_matrix(100, 1, rng);
  Eigen::VectorXd y = -Eigen::VectorXd::Ones(100);
  y.head(60).setOnes();
  const Trainer constant = [](const Dataset&) -> Predictor {
    return [](const Eigen::Ref<const Eigen::VectorXd>&) { return Label::Positive; };
  };
  const CvResult cv = kfold_cv(Dataset(x, y), 5, constant, rng);
  EXPECT_NEAR(cv.mean, 0.6, 1e-12);
}

TEST(KfoldCv, LeaveOneOutSeparable) {
  CovariateMatrix x(4, 1);
  x << -2.0, -1.0, 1.0, 2.0;
  Eigen::VectorXd y(4);
  y << -1, -1, 1, 1;
  Rng rng = make_stream({58});
  const CvResult cv = kfold_cv(Dataset(x, y), 4, make_trainer(Method::SvmReg, OptOptions{}), rng);
  EXPECT_DOUBLE_EQ(cv.mean, 1.0);
  EXPECT_TRUE(cv.excluded_folds.empty());
}

TEST(KfoldCv, TwoFoldsHandTrace) {
  // Five points at x = -2 labelled -1 and five at x = +2 labelled +1. Every
  // training half holds both clusters, the hinge loss reaches zero only when
  // -alpha + 2 beta >= 1 and alpha + 2 beta >= 1, which puts the boundary
  // strictly inside (-2, 2), so each held-out point is classified correctly.
  CovariateMatrix x(10, 1);
  Eigen::VectorXd y(10);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = i < 5 ? -2.0 : 2.0;
    y[i] = i < 5 ? -1.0 : 1.0;
  }
  const FoldPlan plan{2, {0, 1, 0, 1, 0, 1, 0, 1, 0, 1}};
  const CvResult cv = kfold_cv(Dataset(x, y), plan, make_trainer(Method::Approx, OptOptions{}));
  ASSERT_TRUE(cv.excluded_folds.empty());
  EXPECT_DOUBLE_EQ(cv.fold_accuracy[0], 1.0);
  EXPECT_DOUBLE_EQ(cv.fold_accuracy[1], 1.0);
  EXPECT_DOUBLE_EQ(cv.mean, 1.0);

  Rng rng = make_stream({59});
  const FoldPlan random_plan = make_folds(10, 2, rng);
  EXPECT_EQ(std::count(random_plan.fold_of.begin(), random_plan.fold_of.end(), 0), 5);
}

TEST(KfoldCv, ExcludesSingleClassTrainingFolds) {
  CovariateMatrix x(6, 1);
  x << 0.0, 1.0, 2.0, 3.0, 4.0, 0.5;
  Eigen::VectorXd y(6);
  y << -1, -1, 1, 1, 1, 1;
  FoldPlan plan{2, {1, 1, 0, 0, 0, 1}};
  const CvResult cv = kfold_cv(Dataset(x, y), plan, make_trainer(Method::Logistic, OptOptions{}));
  ASSERT_EQ(cv.excluded_folds.size(), 1u);
  EXPECT_EQ(cv.excluded_folds[0], 1);
  EXPECT_TRUE(std::isnan(cv.fold_accuracy[1]));
  EXPECT_FALSE(std::isnan(cv.fold_accuracy[0]));
}

TEST(Moments, SampleSd) {
  const Moments m = moments({1.0, 2.0, 3.0, std::nan("")});
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_DOUBLE_EQ(m.sd, 1.0);
  EXPECT_EQ(m.count, 3);
}

TEST(Experiments, ConfigValidation) {
  MseConfig m;
  m.replications = 0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = MseConfig{};
  m.n_grid = {100, -1};
  EXPECT_THROW(m.validate(), std::invalid_argument);
  AccConfig a;
  a.omega_grid = {1.5};
  EXPECT_THROW(a.validate(), std::invalid_argument);
}

TEST(Experiments, MseReproducibleAndComplete) {
  MseConfig cfg;
  cfg.n_grid = {100, 400};
  cfg.d_grid = {1, 2};
  cfg.replications = 4;
  const ExperimentReport a = run_mse_experiment(cfg);
  const ExperimentReport b = run_mse_experiment(cfg);
  ASSERT_EQ(a.cells.size(), 4u);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  for (int n : cfg.n_grid) {
    for (int d : cfg.d_grid) ASSERT_NE(a.find(n, d, mse_scenario(1.0), "svmreg"), nullptr);
  }
  const CellSummary* c = a.find(100, 1, mse_scenario(1.0), "svmreg");
  EXPECT_EQ(c->values.size(), 4u);
  EXPECT_EQ(c->r_effective, 4);
}

TEST(Experiments, AccuracyBelowBayesBound) {
  AccConfig cfg;
  cfg.n_grid = {200};
  cfg.d_grid = {2};
  cfg.replications = 10;
  cfg.test_size = 500;
  const ExperimentReport rep = run_accuracy_experiment(cfg);
  ASSERT_EQ(rep.cells.size(), 6u);
  for (const auto& c : rep.cells) {
    const double omega = c.scenario == acc_scenario(0.05) ? 0.05 : 0.5;
    EXPECT_LE(c.mean, mixture_bayes_accuracy(omega) + 3.0 * c.sd) << c.method << " " << c.scenario;
  }
}

TEST(Parallel, EachIndexOnceAndExceptionsPropagate) {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, 4);
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
    if (i == 3) throw std::runtime_error("boom");
  }, 3), std::runtime_error);
}

TEST(Parallel, ThreadCountFromEnvironment) {
  ::setenv("SVMREG_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3u);
  ::unsetenv("SVMREG_THREADS");
  EXPECT_GE(thread_count(), 1u);
}

}  // namespace
}  // namespace svmreg
