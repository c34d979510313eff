#pragma once

#include "svmreg/dataset.hpp"
#include "svmreg/rng.hpp"

#include <Eigen/Core>

#include <functional>
#include <random>

namespace svmreg::testing {

inline Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[j] += h;
    xm[j] -= h;
    g[j] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd central_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                       const Eigen::VectorXd& x, double h = 1e-4) {
  const Eigen::Index m = x.size();
  Eigen::MatrixXd hess(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      auto at = [&](double di, double dj) {
        Eigen::VectorXd z = x;
        z[i] += di;
        z[j] += dj;
        return f(z);
      };
      hess(i, j) = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
    }
  }
  return hess;
}

inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

inline Eigen::VectorXd normal_vector(Eigen::Index d, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  Eigen::VectorXd v(d);
  for (Eigen::Index j = 0; j < d; ++j) v[j] = z(rng);
  return v;
}

inline CovariateMatrix normal_matrix(Eigen::Index n, Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> z;
  CovariateMatrix x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = z(rng);
  }
  return x;
}

/// Labels from a fair coin.
inline Eigen::VectorXd coin_labels(Eigen::Index n, Rng& rng) {
  std::bernoulli_distribution b(0.5);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = b(rng) ? 1.0 : -1.0;
  return y;
}

}  // namespace svmreg::testing
