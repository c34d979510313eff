#pragma once

#include "svmreg/dataset.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <vector>

namespace svmreg {

/// |t - 1| or |t + 1| below this marks a sample as sitting on a kink of the normaliser.
inline constexpr double kKinkProximity = 1e-8;

double margin(const Eigen::Ref<const Eigen::VectorXd>& x, const Theta& theta);

inline constexpr double hinge(double u) { return u > 0.0 ? u : 0.0; }

// The hinge-likelihood model
//
//   f(y | x; theta) = exp(-[1 - y t]_+) / (exp(-[1 - t]_+) + exp(-[1 + t]_+)),  t = alpha + x.beta
//
// depends on (x, theta) only through the margin t, so everything below is
// first written as a scalar function of (y, t) and lifted by the chain rule.
// Derivatives use the indicator {u > 0} for d[u]_+/du, i.e. at a kink the flat
// branch is taken.

/// log of the normaliser exp(-[1 - t]_+) + exp(-[1 + t]_+), evaluated without overflow.
double log_normalizer(double t);

/// Value and first two t-derivatives of log f(y | t).
struct MarginDerivatives {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
  bool near_kink = false;  ///< |t -+ 1| < kKinkProximity
};

MarginDerivatives log_density_derivatives(Label y, double t);

double log_density(Label y, double t);
double log_density(Label y, const Eigen::Ref<const Eigen::VectorXd>& x, const Theta& theta);

/// f(y | x; theta), strictly inside (0, 1).
double density(Label y, double t);
double density(Label y, const Eigen::Ref<const Eigen::VectorXd>& x, const Theta& theta);

/// Mean per-sample log-density over the data.
double log_likelihood(const Dataset& data, const Theta& theta);

/// Gradient of log f(y | x; theta) with respect to (alpha, beta); length d+1.
Eigen::VectorXd grad_log_density(Label y, const Eigen::Ref<const Eigen::VectorXd>& x,
                                 const Theta& theta);

struct HessianResult {
  Eigen::MatrixXd matrix;  ///< (d+1) x (d+1)
  bool near_kink = false;
};

HessianResult hessian_log_density(Label y, const Eigen::Ref<const Eigen::VectorXd>& x,
                                  const Theta& theta);

/// Mean log-likelihood and its gradient in one pass; the optimiser's hot path.
double log_likelihood_and_gradient(const Dataset& data, const Theta& theta, Eigen::VectorXd& grad);

/// Most probable label; the tie t = 0 goes to +1. Coincides with the sign rule.
Label predict_map(const Eigen::Ref<const Eigen::VectorXd>& x, const Theta& theta);
Label predict_map(double t);

/// Sign rule with sign(0) = +1.
inline constexpr Label sign_label(double t) { return t >= 0.0 ? Label::Positive : Label::Negative; }

/// h = h1 + h2 where h(t) = -E[log f(1 | t)] when P(Y = 1) = p.
struct CoercivityTerms {
  double h = 0.0;
  double h1 = 0.0;  ///< p [1 - t]_+ + (1 - p) [1 + t]_+, coercive
  double h2 = 0.0;  ///< log normaliser, |h2| <= 1 - log 2
};

/// Throws std::invalid_argument unless 0 < p < 1.
CoercivityTerms expected_neg_log_density(double p, double t);

/// Explicit feature map for the polynomial kernel (x.x' + c)^u.
///
/// Monomials of total degree 1..u are emitted in graded order, each scaled by
/// sqrt(multinomial(u; k0, k) * c^k0) where k0 = u - |k|. The constant
/// monomial (weight c^u) is dropped because the model carries its own intercept,
/// and monomials whose weight is exactly zero (every degree below u when c = 0)
/// are dropped too, so that the expanded design keeps full column rank. Hence
///
///   phi(x).phi(x') + c^u = (x.x' + c)^u.
class PolyFeatureMap {
 public:
  static constexpr std::size_t kDefaultMaxFeatures = 10'000;

  /// Throws std::invalid_argument for u = 0, c < 0, d = 0, or an expansion above max_features.
  PolyFeatureMap(Eigen::Index d, double c, int u, std::size_t max_features = kDefaultMaxFeatures);

  Eigen::Index input_dim() const { return d_; }
  Eigen::Index output_dim() const { return static_cast<Eigen::Index>(weights_.size()); }
  double c() const { return c_; }
  int degree() const { return u_; }

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Dataset apply(const Dataset& data) const;

  /// e.g. "x1^2*x3"; names index into input_names.
  std::vector<std::string> feature_names(const std::vector<std::string>& input_names) const;

 private:
  Eigen::Index d_;
  double c_;
  int u_;
  std::vector<std::vector<int>> exponents_;
  std::vector<double> weights_;
};

Eigen::VectorXd poly_features(const Eigen::Ref<const Eigen::VectorXd>& x, double c, int u,
                              std::size_t max_features = PolyFeatureMap::kDefaultMaxFeatures);

}  // namespace svmreg
