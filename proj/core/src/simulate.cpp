#include "svmreg/simulate.hpp"

#include "svmreg/baselines.hpp"
#include "svmreg/model.hpp"
#include "svmreg/parallel.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace svmreg {

namespace {

CovariateMatrix standard_normal_matrix(Eigen::Index n, Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CovariateMatrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = normal(rng);
  }
  return x;
}

double elapsed_seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

void require_positive(const std::vector<int>& grid, const char* name) {
  if (grid.empty()) throw std::invalid_argument(std::string(name) + " must not be empty");
  for (int v : grid) {
    if (v < 1) throw std::invalid_argument(std::string(name) + " values must be positive");
  }
}

std::uint64_t omega_key(double omega) { return std::bit_cast<std::uint64_t>(omega); }

}  // namespace

Dataset gen_model_data(Eigen::Index n, Eigen::Index d, const Theta& theta0, Rng& rng) {
  if (n < 1 || d < 1) throw std::invalid_argument("n and d must be positive");
  if (theta0.dim() != d) throw std::invalid_argument("theta0 dimension does not match d");
  CovariateMatrix x = standard_normal_matrix(n, d, rng);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = theta0.alpha + x.row(i).dot(theta0.beta);
    y[i] = uniform(rng) < density(Label::Positive, t) ? 1.0 : -1.0;
  }
  return Dataset(std::move(x), std::move(y));
}

double mixture_separation(double omega_bar) {
  if (!(omega_bar > 0.0 && omega_bar < 1.0)) {
    throw std::invalid_argument("omega_bar must lie strictly inside (0, 1)");
  }
  const boost::math::normal_distribution<double> std_normal;
  return -2.0 * boost::math::quantile(std_normal, 0.5 * omega_bar);
}

Dataset gen_mixture_data(Eigen::Index n, Eigen::Index d, double omega_bar, Rng& rng) {
  if (n < 1 || d < 1) throw std::invalid_argument("n and d must be positive");
  const double half_gap = 0.5 * mixture_separation(omega_bar);
  std::bernoulli_distribution coin(0.5);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = coin(rng) ? 1.0 : -1.0;
  CovariateMatrix x = standard_normal_matrix(n, d, rng);
  x.col(0) += half_gap * y;
  return Dataset(std::move(x), std::move(y));
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::SvmReg: return "svmreg";
    case Method::Logistic: return "logistic";
    case Method::Svm: return "svm";
    case Method::Approx: return "approx";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::SvmReg, Method::Logistic, Method::Svm, Method::Approx}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected svmreg, logistic, svm or approx)");
}

Trainer make_trainer(Method method, const OptOptions& opts, double svm_lambda) {
  switch (method) {
    case Method::SvmReg:
      return [opts](const Dataset& train) -> Predictor {
        const Theta theta = fit_mle(train, opts).theta_hat;
        return [theta](const Eigen::Ref<const Eigen::VectorXd>& x) { return predict_map(x, theta); };
      };
    case Method::Logistic:
      return [](const Dataset& train) -> Predictor {
        const LogisticFit fit = fit_logistic(train);
        return [fit](const Eigen::Ref<const Eigen::VectorXd>& x) { return predict_logistic(x, fit); };
      };
    case Method::Svm:
      return [opts, svm_lambda](const Dataset& train) -> Predictor {
        const double lambda = svm_lambda >= 0.0 ? svm_lambda : default_svm_lambda(train.size());
        const Theta theta = fit_svm(train, lambda, opts).theta_hat;
        return [theta](const Eigen::Ref<const Eigen::VectorXd>& x) { return predict_svm(x, theta); };
      };
    case Method::Approx:
      return [opts](const Dataset& train) -> Predictor {
        const Theta theta = fit_approximate(train, opts).theta_hat;
        return [theta](const Eigen::Ref<const Eigen::VectorXd>& x) { return predict_svm(x, theta); };
      };
  }
  throw std::invalid_argument("unknown method");
}

double accuracy(const Dataset& test, const Predictor& predict) {
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    if (predict(test.x().row(i).transpose()) == test.label(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

FoldPlan make_folds(Eigen::Index n, int k, Rng& rng) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (n < k) throw std::invalid_argument("k must not exceed the number of samples");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  FoldPlan plan{k, std::vector<int>(static_cast<std::size_t>(n), 0)};
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    plan.fold_of[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos % static_cast<std::size_t>(k));
  }
  return plan;
}

CvResult kfold_cv(const Dataset& data, const FoldPlan& folds, const Trainer& train) {
  if (static_cast<Eigen::Index>(folds.fold_of.size()) != data.size()) {
    throw std::invalid_argument("fold plan does not match the data size");
  }
  CvResult res;
  res.fold_accuracy.assign(static_cast<std::size_t>(folds.k),
                           std::numeric_limits<double>::quiet_NaN());
  for (int f = 0; f < folds.k; ++f) {
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> test_rows;
    for (Eigen::Index i = 0; i < data.size(); ++i) {
      (folds.fold_of[static_cast<std::size_t>(i)] == f ? test_rows : train_rows).push_back(i);
    }
    if (test_rows.empty() || train_rows.empty()) {
      res.excluded_folds.push_back(f);
      continue;
    }
    const Dataset train_set = data.subset(train_rows);
    if (train_set.count(Label::Positive) == 0 || train_set.count(Label::Negative) == 0) {
      res.excluded_folds.push_back(f);
      continue;
    }
    const Predictor predict = train(train_set);
    res.fold_accuracy[static_cast<std::size_t>(f)] = accuracy(data.subset(test_rows), predict);
  }
  const Moments m = moments(res.fold_accuracy);
  res.mean = m.count > 0 ? m.mean : std::numeric_limits<double>::quiet_NaN();
  res.sd = m.sd;
  return res;
}

CvResult kfold_cv(const Dataset& data, int k, const Trainer& train, Rng& rng) {
  return kfold_cv(data, make_folds(data.size(), k, rng), train);
}

Moments moments(const std::vector<double>& values) {
  Moments m;
  double sum = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) {
      sum += v;
      ++m.count;
    }
  }
  if (m.count == 0) return m;
  m.mean = sum / m.count;
  if (m.count > 1) {
    double ss = 0.0;
    for (double v : values) {
      if (std::isfinite(v)) ss += (v - m.mean) * (v - m.mean);
    }
    m.sd = std::sqrt(ss / (m.count - 1));
  }
  return m;
}

void MseConfig::validate() const {
  require_positive(n_grid, "n_grid");
  require_positive(d_grid, "d_grid");
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (!std::isfinite(theta0_fill)) throw std::invalid_argument("theta0 must be finite");
  opt.validate();
}

void AccConfig::validate() const {
  require_positive(n_grid, "n_grid");
  require_positive(d_grid, "d_grid");
  if (omega_grid.empty()) throw std::invalid_argument("omega_grid must not be empty");
  for (double w : omega_grid) {
    if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("omega_bar values must lie in (0, 1)");
  }
  if (test_size < 1) throw std::invalid_argument("test_size must be positive");
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  opt.validate();
}

const CellSummary* ExperimentReport::find(int n, int d, std::string_view scenario,
                                          std::string_view method) const {
  for (const auto& c : cells) {
    if (c.n == n && c.d == d && c.scenario == scenario && c.method == method) return &c;
  }
  return nullptr;
}

std::string mse_scenario(double theta0_fill) {
  std::ostringstream s;
  s << "theta0=" << theta0_fill;
  return s.str();
}

std::string acc_scenario(double omega_bar) {
  std::ostringstream s;
  s << "omega=" << omega_bar;
  return s.str();
}

ExperimentReport run_mse_experiment(const MseConfig& cfg) {
  cfg.validate();
  struct Task {
    int n, d, r;
    std::size_t cell;
  };
  std::vector<Task> tasks;
  ExperimentReport rep;
  rep.study = "mse";
  rep.seed = cfg.seed;
  for (int n : cfg.n_grid) {
    for (int d : cfg.d_grid) {
      CellSummary cell;
      cell.n = n;
      cell.d = d;
      cell.scenario = mse_scenario(cfg.theta0_fill);
      cell.method = "svmreg";
      cell.values.assign(static_cast<std::size_t>(cfg.replications), 0.0);
      rep.cells.push_back(std::move(cell));
      for (int r = 0; r < cfg.replications; ++r) tasks.push_back({n, d, r, rep.cells.size() - 1});
    }
  }

  std::vector<char> converged(tasks.size(), 0);
  std::vector<double> seconds(tasks.size(), 0.0);
  parallel_for(tasks.size(), [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    const Task& task = tasks[k];
    Rng rng = make_stream({cfg.seed, static_cast<std::uint64_t>(task.n),
                           static_cast<std::uint64_t>(task.d), static_cast<std::uint64_t>(task.r)});
    const Theta theta0(cfg.theta0_fill, Eigen::VectorXd::Constant(task.d, cfg.theta0_fill));
    const Dataset data = gen_model_data(task.n, task.d, theta0, rng);
    OptOptions opt = cfg.opt;
    opt.seed = rng();
    const FitResult fit = fit_mle(data, opt);
    rep.cells[task.cell].values[static_cast<std::size_t>(task.r)] =
        (fit.theta_hat.to_vector() - theta0.to_vector()).squaredNorm();
    converged[k] = fit.converged ? 1 : 0;
    seconds[k] = elapsed_seconds(start);
  });

  for (std::size_t k = 0; k < tasks.size(); ++k) {
    CellSummary& cell = rep.cells[tasks[k].cell];
    if (!converged[k]) ++cell.nonconverged;
    cell.runtime_s += seconds[k];
  }
  for (auto& cell : rep.cells) {
    const Moments m = moments(cell.values);
    cell.mean = m.mean;
    cell.sd = m.sd;
    cell.r_effective = m.count;
  }
  return rep;
}

ExperimentReport run_accuracy_experiment(const AccConfig& cfg) {
  cfg.validate();
  constexpr Method kMethods[] = {Method::SvmReg, Method::Logistic, Method::Svm};
  constexpr std::size_t kNumMethods = std::size(kMethods);

  struct Task {
    int n, d, r;
    double omega;
    std::size_t first_cell;
  };
  std::vector<Task> tasks;
  ExperimentReport rep;
  rep.study = "acc";
  rep.seed = cfg.seed;
  for (int n : cfg.n_grid) {
    for (int d : cfg.d_grid) {
      for (double omega : cfg.omega_grid) {
        const std::size_t first = rep.cells.size();
        for (Method m : kMethods) {
          CellSummary cell;
          cell.n = n;
          cell.d = d;
          cell.scenario = acc_scenario(omega);
          cell.method = std::string(to_string(m));
          cell.values.assign(static_cast<std::size_t>(cfg.replications), 0.0);
          rep.cells.push_back(std::move(cell));
        }
        for (int r = 0; r < cfg.replications; ++r) tasks.push_back({n, d, r, omega, first});
      }
    }
  }

  std::vector<std::array<char, kNumMethods>> nonconverged(tasks.size());
  std::vector<double> seconds(tasks.size(), 0.0);
  parallel_for(tasks.size(), [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    const Task& task = tasks[k];
    Rng rng = make_stream({cfg.seed, static_cast<std::uint64_t>(task.n),
                           static_cast<std::uint64_t>(task.d), omega_key(task.omega),
                           static_cast<std::uint64_t>(task.r)});
    const Dataset train = gen_mixture_data(task.n, task.d, task.omega, rng);
    const Dataset test = gen_mixture_data(cfg.test_size, task.d, task.omega, rng);
    OptOptions opt = cfg.opt;
    opt.seed = rng();
    nonconverged[k].fill(0);

    for (std::size_t m = 0; m < kNumMethods; ++m) {
      double acc = std::numeric_limits<double>::quiet_NaN();
      try {
        Predictor predict;
        switch (kMethods[m]) {
          case Method::SvmReg: {
            const FitResult fit = fit_mle(train, opt);
            nonconverged[k][m] = fit.converged ? 0 : 1;
            predict = [theta = fit.theta_hat](const Eigen::Ref<const Eigen::VectorXd>& x) {
              return predict_map(x, theta);
            };
            break;
          }
          case Method::Logistic: {
            const LogisticFit fit = fit_logistic(train);
            nonconverged[k][m] = fit.converged ? 0 : 1;
            predict = [fit](const Eigen::Ref<const Eigen::VectorXd>& x) {
              return predict_logistic(x, fit);
            };
            break;
          }
          default: {
            const FitResult fit = fit_svm(train, default_svm_lambda(train.size()), opt);
            nonconverged[k][m] = fit.converged ? 0 : 1;
            predict = [theta = fit.theta_hat](const Eigen::Ref<const Eigen::VectorXd>& x) {
              return predict_svm(x, theta);
            };
            break;
          }
        }
        acc = accuracy(test, predict);
      } catch (const std::exception&) {
        // recorded as a failed replication (NaN)
      }
      rep.cells[task.first_cell + m].values[static_cast<std::size_t>(task.r)] = acc;
    }
    seconds[k] = elapsed_seconds(start);
  });

  for (std::size_t k = 0; k < tasks.size(); ++k) {
    for (std::size_t m = 0; m < kNumMethods; ++m) {
      CellSummary& cell = rep.cells[tasks[k].first_cell + m];
      if (nonconverged[k][m]) ++cell.nonconverged;
      cell.runtime_s += seconds[k];
    }
  }
  for (auto& cell : rep.cells) {
    const Moments m = moments(cell.values);
    cell.mean = m.mean;
    cell.sd = m.sd;
    cell.r_effective = m.count;
    cell.failures = static_cast<int>(cell.values.size()) - m.count;
  }
  return rep;
}

}  // namespace svmreg
