#include "svmreg/dataset.hpp"

#include <cmath>
#include <string>

namespace svmreg {

Theta::Theta(double a, Eigen::VectorXd b) : alpha(a), beta(std::move(b)) {}

Theta Theta::zeros(Eigen::Index d) { return Theta(0.0, Eigen::VectorXd::Zero(d)); }

Theta Theta::from_vector(const Eigen::Ref<const Eigen::VectorXd>& packed) {
  if (packed.size() < 2) {
    throw std::invalid_argument("packed parameter vector needs at least 2 entries");
  }
  return Theta(packed[0], packed.tail(packed.size() - 1));
}

Eigen::VectorXd Theta::to_vector() const {
  Eigen::VectorXd v(beta.size() + 1);
  v[0] = alpha;
  v.tail(beta.size()) = beta;
  return v;
}

Dataset::Dataset(CovariateMatrix x, Eigen::VectorXd y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() < 1) throw DataError("dataset must contain at least one sample");
  if (x_.cols() < 1) throw DataError("dataset must have at least one covariate");
  if (y_.size() != x_.rows()) {
    throw DataError("label count " + std::to_string(y_.size()) + " does not match row count " +
                    std::to_string(x_.rows()));
  }
  if (!x_.allFinite()) throw DataError("covariates contain non-finite values");
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    if (y_[i] != 1.0 && y_[i] != -1.0) {
      throw DataError("label at row " + std::to_string(i) + " is not -1 or +1");
    }
  }
}

namespace {
Eigen::VectorXd labels_to_vector(std::span<const Label> y) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v[static_cast<Eigen::Index>(i)] = to_double(y[i]);
  return v;
}
}  // namespace

Dataset::Dataset(CovariateMatrix x, std::span<const Label> y)
    : Dataset(std::move(x), labels_to_vector(y)) {}

Dataset Dataset::subset(std::span<const Eigen::Index> rows) const {
  CovariateMatrix xs(static_cast<Eigen::Index>(rows.size()), dim());
  Eigen::VectorXd ys(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto r = rows[k];
    if (r < 0 || r >= size()) throw std::out_of_range("subset row index out of range");
    xs.row(static_cast<Eigen::Index>(k)) = x_.row(r);
    ys[static_cast<Eigen::Index>(k)] = y_[r];
  }
  return Dataset(std::move(xs), std::move(ys));
}

Eigen::Index Dataset::count(Label y) const {
  const double v = to_double(y);
  return (y_.array() == v).count();
}

Eigen::VectorXd margins(const Dataset& data, const Theta& theta) {
  if (theta.dim() != data.dim()) {
    throw std::invalid_argument("theta dimension " + std::to_string(theta.dim()) +
                                " does not match data dimension " + std::to_string(data.dim()));
  }
  return (data.x() * theta.beta).array() + theta.alpha;
}

}  // namespace svmreg
