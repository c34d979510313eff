#include "svmreg/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace svmreg {

namespace {

void require_dim(Eigen::Index x_dim, const Theta& theta) {
  if (x_dim != theta.dim()) {
    throw std::invalid_argument("covariate dimension " + std::to_string(x_dim) +
                                " does not match theta dimension " + std::to_string(theta.dim()));
  }
}

Eigen::VectorXd augmented(const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::VectorXd xt(x.size() + 1);
  xt[0] = 1.0;
  xt.tail(x.size()) = x;
  return xt;
}

}  // namespace

double margin(const Eigen::Ref<const Eigen::VectorXd>& x, const Theta& theta) {
  require_dim(x.size(), theta);
  return theta.alpha + x.dot(theta.beta);
}

double log_normalizer(double t) {
  const double a = -hinge(1.0 - t);
  const double b = -hinge(1.0 + t);
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

MarginDerivatives log_density_derivatives(Label label, double t) {
  const double y = to_double(label);
  const double a = -hinge(1.0 - t);
  const double b = -hinge(1.0 + t);
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  const double log_z = hi + std::log1p(std::exp(lo - hi));
  const double wa = std::exp(a - log_z);
  const double wb = std::exp(b - log_z);
  // t-derivatives of a and b; piecewise constant
  const double da = (1.0 - t > 0.0) ? 1.0 : 0.0;
  const double db = (1.0 + t > 0.0) ? -1.0 : 0.0;
  const double dloss = (1.0 - y * t > 0.0) ? y : 0.0;

  MarginDerivatives out;
  out.value = -hinge(1.0 - y * t) - log_z;
  out.first = dloss - (wa * da + wb * db);
  // Only the normaliser has curvature: minus the weighted variance of (da, db).
  out.second = -wa * wb * (da - db) * (da - db);
  out.near_kink = std::abs(t - 1.0) < kKinkProximity || std::abs(t + 1.0) < kKinkProximity;
  return out;
}

double log_density(Label y, double t) {
  return -hinge(1.0 - to_double(y) * t) - log_normalizer(t);
}

double log_density(Label y, const Eigen::Ref<const Eigen::VectorXd>& x, const Theta& theta) {
  return log_density(y, margin(x, theta));
}

double density(Label y, double t) { return std::exp(log_density(y, t)); }

double density(Label y, const Eigen::Ref<const Eigen::VectorXd>& x, const Theta& theta) {
  return density(y, margin(x, theta));
}

double log_likelihood(const Dataset& data, const Theta& theta) {
  const Eigen::VectorXd t = margins(data, theta);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) sum += log_density(data.label(i), t[i]);
  return sum / static_cast<double>(data.size());
}

Eigen::VectorXd grad_log_density(Label y, const Eigen::Ref<const Eigen::VectorXd>& x,
                                 const Theta& theta) {
  const double t = margin(x, theta);
  return log_density_derivatives(y, t).first * augmented(x);
}

HessianResult hessian_log_density(Label y, const Eigen::Ref<const Eigen::VectorXd>& x,
                                  const Theta& theta) {
  const double t = margin(x, theta);
  const auto deriv = log_density_derivatives(y, t);
  const Eigen::VectorXd xt = augmented(x);
  return {deriv.second * xt * xt.transpose(), deriv.near_kink};
}

double log_likelihood_and_gradient(const Dataset& data, const Theta& theta, Eigen::VectorXd& grad) {
  const Eigen::VectorXd t = margins(data, theta);
  const Eigen::Index n = data.size();
  Eigen::VectorXd dl(n);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto d = log_density_derivatives(data.label(i), t[i]);
    sum += d.value;
    dl[i] = d.first;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  grad.resize(data.dim() + 1);
  grad[0] = dl.sum() * inv_n;
  grad.tail(data.dim()).noalias() = data.x().transpose() * dl * inv_n;
  return sum * inv_n;
}

Label predict_map(double t) {
  // density(+1 | t) is increasing in t and equals 1/2 at t = 0.
  return sign_label(t);
}

Label predict_map(const Eigen::Ref<const Eigen::VectorXd>& x, const Theta& theta) {
  return predict_map(margin(x, theta));
}

CoercivityTerms expected_neg_log_density(double p, double t) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie strictly inside (0, 1)");
  CoercivityTerms out;
  out.h1 = p * hinge(1.0 - t) + (1.0 - p) * hinge(1.0 + t);
  out.h2 = log_normalizer(t);
  out.h = out.h1 + out.h2;
  return out;
}

// ---------------------------------------------------------------------------
// Polynomial feature map

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

// Number of exponent vectors over d variables with total degree exactly k.
double count_degree(Eigen::Index d, int k) {
  return binomial(static_cast<int>(d) + k - 1, k);
}

void enumerate_degree(Eigen::Index d, int remaining, Eigen::Index pos, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (pos == d - 1) {
    cur[static_cast<std::size_t>(pos)] = remaining;
    out.push_back(cur);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[static_cast<std::size_t>(pos)] = k;
    enumerate_degree(d, remaining - k, pos + 1, cur, out);
  }
}

}  // namespace

PolyFeatureMap::PolyFeatureMap(Eigen::Index d, double c, int u, std::size_t max_features)
    : d_(d), c_(c), u_(u) {
  if (u < 1) throw std::invalid_argument("polynomial degree must be at least 1");
  if (d < 1) throw std::invalid_argument("input dimension must be at least 1");
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("polynomial offset c must be finite and nonnegative");
  }
  const int lowest = (c == 0.0) ? u : 1;
  double total = 0.0;
  for (int k = lowest; k <= u; ++k) total += count_degree(d, k);
  if (total > static_cast<double>(max_features)) {
    throw std::invalid_argument("polynomial expansion has " + std::to_string(total) +
                                " features, above the cap of " + std::to_string(max_features));
  }

  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  for (int k = lowest; k <= u; ++k) enumerate_degree(d, k, 0, cur, exponents_);

  weights_.reserve(exponents_.size());
  for (const auto& e : exponents_) {
    int degree = 0;
    for (int k : e) degree += k;
    const int k0 = u - degree;
    // multinomial(u; k0, e_1..e_d) as a product of binomials
    double coef = binomial(u, k0);
    int left = u - k0;
    for (int k : e) {
      coef *= binomial(left, k);
      left -= k;
    }
    weights_.push_back(std::sqrt(coef * std::pow(c, k0)));
  }
}

Eigen::VectorXd PolyFeatureMap::apply(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != d_) {
    throw std::invalid_argument("feature map expects dimension " + std::to_string(d_) + ", got " +
                                std::to_string(x.size()));
  }
  Eigen::VectorXd out(output_dim());
  for (std::size_t m = 0; m < exponents_.size(); ++m) {
    double v = weights_[m];
    for (Eigen::Index j = 0; j < d_; ++j) {
      for (int p = 0; p < exponents_[m][static_cast<std::size_t>(j)]; ++p) v *= x[j];
    }
    out[static_cast<Eigen::Index>(m)] = v;
  }
  return out;
}

Dataset PolyFeatureMap::apply(const Dataset& data) const {
  CovariateMatrix expanded(data.size(), output_dim());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    expanded.row(i) = apply(data.x().row(i).transpose()).transpose();
  }
  return Dataset(std::move(expanded), data.y());
}

std::vector<std::string> PolyFeatureMap::feature_names(
    const std::vector<std::string>& input_names) const {
  if (static_cast<Eigen::Index>(input_names.size()) != d_) {
    throw std::invalid_argument("feature name count does not match input dimension");
  }
  std::vector<std::string> names;
  names.reserve(exponents_.size());
  for (const auto& e : exponents_) {
    std::string name;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      if (!name.empty()) name += '*';
      name += input_names[j];
      if (e[j] > 1) name += '^' + std::to_string(e[j]);
    }
    names.push_back(std::move(name));
  }
  return names;
}

Eigen::VectorXd poly_features(const Eigen::Ref<const Eigen::VectorXd>& x, double c, int u,
                              std::size_t max_features) {
  return PolyFeatureMap(x.size(), c, u, max_features).apply(x);
}

}  // namespace svmreg
