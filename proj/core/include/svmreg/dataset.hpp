#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace svmreg {

/// Input data that violates a documented contract (labels, shapes, non-finite values).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown: singular matrices, non-finite objectives.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CovariateMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Binary response. The integer values are the ones used in every formula.
enum class Label : int { Negative = -1, Positive = 1 };

inline constexpr double to_double(Label y) { return static_cast<double>(static_cast<int>(y)); }

/// Parameter vector (alpha, beta). The augmented covariate (1, x) is never stored.
struct Theta {
  double alpha = 0.0;
  Eigen::VectorXd beta;

  Theta() = default;
  Theta(double a, Eigen::VectorXd b);
  static Theta zeros(Eigen::Index d);
  /// Packs (alpha, beta_1..beta_d) into one vector of length d+1.
  static Theta from_vector(const Eigen::Ref<const Eigen::VectorXd>& packed);

  Eigen::Index dim() const { return beta.size(); }
  Eigen::VectorXd to_vector() const;
};

/// One (x, y) pair, viewed out of a Dataset.
struct LabeledSample {
  Eigen::Ref<const Eigen::VectorXd> x;
  Label y;
};

/// n labelled samples with a common covariate dimension d.
///
/// Covariates are stored row-wise in an n x d matrix; labels as +-1.0 so that
/// vectorised margin and loss computations can use them directly.
class Dataset {
 public:
  Dataset() = default;
  /// Throws DataError on empty input, mismatched lengths, non-finite entries or labels outside {-1, +1}.
  Dataset(CovariateMatrix x, Eigen::VectorXd y);
  Dataset(CovariateMatrix x, std::span<const Label> y);

  Eigen::Index size() const { return x_.rows(); }
  Eigen::Index dim() const { return x_.cols(); }

  const CovariateMatrix& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  Label label(Eigen::Index i) const { return y_[i] > 0 ? Label::Positive : Label::Negative; }
  LabeledSample sample(Eigen::Index i) const { return {x_.row(i).transpose(), label(i)}; }

  /// Rows selected by index, in the given order.
  Dataset subset(std::span<const Eigen::Index> rows) const;

  Eigen::Index count(Label y) const;

 private:
  CovariateMatrix x_;
  Eigen::VectorXd y_;
};

/// alpha + x . beta for every row.
Eigen::VectorXd margins(const Dataset& data, const Theta& theta);

}  // namespace svmreg
