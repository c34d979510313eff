#include "svmreg/optimizer.hpp"

#include "svmreg/model.hpp"
#include "svmreg/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace svmreg {

namespace {

constexpr int kMaxLineSearchSteps = 50;
constexpr double kCurvatureFloor = 1e-12;
constexpr int kSkipsBeforeReset = 3;

struct LineSearchOutcome {
  bool accepted = false;
  double step = 0.0;
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd grad;
};

// Weak Wolfe bracketing: double the step until the bracket closes, then bisect.
LineSearchOutcome weak_wolfe(const Objective& objective, const Eigen::VectorXd& x, double f,
                             double slope, const Eigen::VectorXd& dir, const OptOptions& opts,
                             int& evals) {
  const double inf = std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = inf;
  double t = 1.0;

  LineSearchOutcome best;  // lowest value among points with sufficient decrease
  best.value = f;

  Eigen::VectorXd xn(x.size());
  Eigen::VectorXd gn(x.size());
  for (int step = 0; step < kMaxLineSearchSteps; ++step) {
    xn = x + t * dir;
    const double fn = objective(xn, gn);
    ++evals;
    const bool finite = std::isfinite(fn) && gn.allFinite();
    if (!finite || fn > f + opts.wolfe_c1 * t * slope) {
      hi = t;
    } else {
      if (fn < best.value) {
        best.step = t;
        best.x = xn;
        best.value = fn;
        best.grad = gn;
      }
      if (gn.dot(dir) < opts.wolfe_c2 * slope) {
        lo = t;
      } else {
        return {true, t, xn, fn, gn};
      }
    }
    t = std::isinf(hi) ? 2.0 * t : 0.5 * (lo + hi);
  }
  best.accepted = false;
  return best;
}

}  // namespace

void OptOptions::validate() const {
  if (!(wolfe_c1 > 0.0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0)) {
    throw std::invalid_argument("Wolfe constants must satisfy 0 < c1 < c2 < 1");
  }
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (n_starts < 1) throw std::invalid_argument("n_starts must be at least 1");
  if (!(grad_tol >= 0.0) || !(f_tol >= 0.0)) {
    throw std::invalid_argument("tolerances must be nonnegative");
  }
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale)) {
    throw std::invalid_argument("init_scale must be finite and nonnegative");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::GradientTolerance: return "gradient_tolerance";
    case Termination::ObjectiveStall: return "objective_stall";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::LineSearchFailed: return "line_search_failed";
  }
  return "unknown";
}

BfgsResult minimize_bfgs(const Objective& objective, const Eigen::VectorXd& x0,
                         const OptOptions& opts) {
  opts.validate();
  const Eigen::Index n = x0.size();

  BfgsResult res;
  res.x = x0;
  res.grad.resize(n);
  res.value = objective(res.x, res.grad);
  res.n_evals = 1;
  if (!std::isfinite(res.value) || !res.grad.allFinite()) {
    throw NumericalError("objective or gradient is not finite at the starting point");
  }

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool h_is_identity = true;
  bool scaled = false;
  int consecutive_skips = 0;

  res.reason = Termination::MaxIterations;
  while (res.n_iter < opts.max_iter) {
    res.grad_norm = res.grad.norm();
    if (res.grad_norm <= opts.grad_tol) {
      res.reason = Termination::GradientTolerance;
      res.converged = true;
      break;
    }

    Eigen::VectorXd dir = -h * res.grad;
    double slope = res.grad.dot(dir);
    if (!(slope < 0.0)) {
      h.setIdentity();
      h_is_identity = true;
      dir = -res.grad;
      slope = -res.grad.squaredNorm();
    }

    auto ls = weak_wolfe(objective, res.x, res.value, slope, dir, opts, res.n_evals);
    if (!ls.accepted && !h_is_identity) {
      // Retry once along steepest descent before giving up.
      h.setIdentity();
      h_is_identity = true;
      dir = -res.grad;
      slope = -res.grad.squaredNorm();
      ls = weak_wolfe(objective, res.x, res.value, slope, dir, opts, res.n_evals);
    }
    if (!ls.accepted) {
      if (ls.x.size() == n && ls.value < res.value) {
        res.x = ls.x;
        res.value = ls.value;
        res.grad = ls.grad;
        ++res.n_iter;
      }
      res.reason = Termination::LineSearchFailed;
      res.converged = false;
      break;
    }

    const Eigen::VectorXd s = ls.x - res.x;
    const Eigen::VectorXd yv = ls.grad - res.grad;
    const double f_old = res.value;
    res.x = ls.x;
    res.value = ls.value;
    res.grad = ls.grad;
    ++res.n_iter;

    const double sy = s.dot(yv);
    if (sy > kCurvatureFloor) {
      if (!scaled) {
        h *= sy / yv.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = h * yv;
      h += rho * ((1.0 + rho * yv.dot(hy)) * (s * s.transpose()) -
                  (hy * s.transpose() + s * hy.transpose()));
      h_is_identity = false;
      consecutive_skips = 0;
    } else {
      ++res.update_skips;
      if (++consecutive_skips >= kSkipsBeforeReset) {
        h.setIdentity();
        h_is_identity = true;
        consecutive_skips = 0;
      }
    }

    if (std::abs(f_old - res.value) <= opts.f_tol * std::max(1.0, std::abs(f_old))) {
      res.reason = Termination::ObjectiveStall;
      res.converged = true;
      break;
    }
  }
  res.grad_norm = res.grad.norm();
  if (res.reason == Termination::MaxIterations && res.grad_norm <= opts.grad_tol) {
    res.reason = Termination::GradientTolerance;
    res.converged = true;
  }
  return res;
}

std::vector<Eigen::VectorXd> start_points(Eigen::Index n_params, const OptOptions& opts) {
  std::vector<Eigen::VectorXd> starts;
  starts.reserve(static_cast<std::size_t>(opts.n_starts));
  starts.push_back(Eigen::VectorXd::Zero(n_params));
  for (int s = 1; s < opts.n_starts; ++s) {
    Rng rng = make_stream({opts.seed, 0x5354415254ull, static_cast<std::uint64_t>(s)});
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd x(n_params);
    for (Eigen::Index j = 0; j < n_params; ++j) x[j] = opts.init_scale * normal(rng);
    starts.push_back(std::move(x));
  }
  return starts;
}

double neg_log_likelihood_objective(const Dataset& data, const Eigen::VectorXd& packed,
                                    Eigen::VectorXd& grad) {
  const double ll = log_likelihood_and_gradient(data, Theta::from_vector(packed), grad);
  grad = -grad;
  return -ll;
}

double hinge_objective(const Dataset& data, double lambda, const Eigen::VectorXd& packed,
                       Eigen::VectorXd& grad) {
  const Theta theta = Theta::from_vector(packed);
  const Eigen::VectorXd t = margins(data, theta);
  const Eigen::Index n = data.size();
  Eigen::VectorXd dt(n);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double y = data.y()[i];
    const double u = 1.0 - y * t[i];
    if (u > 0.0) {
      sum += u;
      dt[i] = -y;
    } else {
      dt[i] = 0.0;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  grad.resize(packed.size());
  grad[0] = dt.sum() * inv_n;
  grad.tail(data.dim()).noalias() = data.x().transpose() * dt * inv_n;
  grad.tail(data.dim()) += 2.0 * lambda * theta.beta;
  return sum * inv_n + lambda * theta.beta.squaredNorm();
}

namespace {

FitResult multi_start(const Dataset& data, const Objective& objective, const OptOptions& opts) {
  opts.validate();
  const auto starts = start_points(data.dim() + 1, opts);
  const double n = static_cast<double>(data.size());

  FitResult fit;
  fit.all_start_logliks.reserve(starts.size());
  bool have_best = false;
  BfgsResult best;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    BfgsResult r = minimize_bfgs(objective, starts[s], opts);
    fit.all_start_logliks.push_back(-r.value);
    if (!have_best || r.value < best.value) {
      best = std::move(r);
      fit.start_index = static_cast<int>(s);
      have_best = true;
    }
  }
  fit.theta_hat = Theta::from_vector(best.x);
  fit.loglik = -best.value;
  fit.total_loglik = n * fit.loglik;
  fit.converged = best.converged;
  fit.n_iter = best.n_iter;
  fit.grad_norm = best.grad_norm;
  fit.reason = best.reason;
  return fit;
}

}  // namespace

FitResult fit_mle(const Dataset& data, const OptOptions& opts) {
  const Objective objective = [&data](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    return neg_log_likelihood_objective(data, x, g);
  };
  FitResult fit = multi_start(data, objective, opts);
  if (data.count(Label::Positive) == 0 || data.count(Label::Negative) == 0) {
    // The likelihood has no maximiser; whatever the optimiser stopped at is not an MLE.
    fit.converged = false;
  }
  return fit;
}

FitResult fit_approximate(const Dataset& data, const OptOptions& opts) {
  const Objective objective = [&data](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    return hinge_objective(data, 0.0, x, g);
  };
  return multi_start(data, objective, opts);
}

FitResult fit_svm(const Dataset& data, double lambda, const OptOptions& opts) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be finite and nonnegative");
  }
  const Objective objective = [&data, lambda](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    return hinge_objective(data, lambda, x, g);
  };
  return multi_start(data, objective, opts);
}

}  // namespace svmreg
