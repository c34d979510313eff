#include "svmreg/inference.hpp"

#include "svmreg/model.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace svmreg {

namespace {

// X~^T diag(w) X~ / n for the design with a leading column of ones.
Eigen::MatrixXd weighted_gram(const Dataset& data, const Eigen::VectorXd& w) {
  const Eigen::Index d = data.dim();
  const double inv_n = 1.0 / static_cast<double>(data.size());
  Eigen::MatrixXd m(d + 1, d + 1);
  const Eigen::MatrixXd wx = w.asDiagonal() * data.x();
  m(0, 0) = w.sum() * inv_n;
  m.block(1, 0, d, 1) = wx.colwise().sum().transpose() * inv_n;
  m.block(0, 1, 1, d) = m.block(1, 0, d, 1).transpose();
  m.block(1, 1, d, d).noalias() = data.x().transpose() * wx * inv_n;
  // symmetric by construction; remove rounding asymmetry
  return 0.5 * (m + m.transpose());
}

}  // namespace

HessianEstimate estimate_A(const Dataset& data, const Theta& theta) {
  const Eigen::VectorXd t = margins(data, theta);
  Eigen::VectorXd d2(t.size());
  HessianEstimate out;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const auto d = log_density_derivatives(data.label(i), t[i]);
    d2[i] = d.second;
    if (d.near_kink) ++out.kink_count;
  }
  out.matrix = weighted_gram(data, d2);
  return out;
}

Eigen::MatrixXd estimate_B(const Dataset& data, const Theta& theta) {
  const Eigen::VectorXd t = margins(data, theta);
  Eigen::VectorXd sq(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double g = log_density_derivatives(data.label(i), t[i]).first;
    sq[i] = g * g;
  }
  return weighted_gram(data, sq);
}

Eigen::MatrixXd sandwich_cov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::Index n) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("sandwich_cov needs square matrices of equal size");
  }
  if (n < 1) throw std::invalid_argument("sample size must be positive");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  const double smin = sv.size() > 0 ? sv[sv.size() - 1] : 0.0;
  if (!(smin > 0.0) || !std::isfinite(smax)) {
    throw NumericalError("A is singular; sandwich covariance is undefined");
  }
  const double cond = smax / smin;
  if (cond > kMaxConditionNumber) {
    std::ostringstream msg;
    msg << "A is ill-conditioned (condition number " << cond << " > " << kMaxConditionNumber
        << ")";
    throw NumericalError(msg.str());
  }
  const Eigen::MatrixXd a_inv =
      svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  Eigen::MatrixXd cov = a_inv * b * a_inv.transpose() / static_cast<double>(n);
  return 0.5 * (cov + cov.transpose());
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

WaldResult wald_test(const Eigen::VectorXd& estimate, const Eigen::VectorXd& se) {
  if (estimate.size() != se.size()) {
    throw std::invalid_argument("estimate and standard error lengths differ");
  }
  WaldResult out{Eigen::VectorXd(estimate.size()), Eigen::VectorXd(estimate.size())};
  for (Eigen::Index j = 0; j < se.size(); ++j) {
    if (!(se[j] > 0.0)) {
      throw std::invalid_argument("standard error " + std::to_string(j) + " is not positive");
    }
    out.z[j] = estimate[j] / se[j];
    // 2 (1 - Phi(|z|)) written through erfc to keep precision in the tail
    out.p[j] = std::erfc(std::abs(out.z[j]) / std::sqrt(2.0));
  }
  return out;
}

InferenceReport margin_model_inference(const Dataset& data, const Theta& theta,
                                       const Eigen::VectorXd& dl, const Eigen::VectorXd& d2l,
                                       Eigen::Index kink_count) {
  if (dl.size() != data.size() || d2l.size() != data.size()) {
    throw std::invalid_argument("per-sample derivative vectors must have one entry per sample");
  }
  InferenceReport rep;
  rep.n = data.size();
  rep.kink_count = kink_count;
  rep.a_hat = weighted_gram(data, d2l);
  rep.b_hat = weighted_gram(data, dl.cwiseAbs2());
  rep.cov = sandwich_cov(rep.a_hat, rep.b_hat, rep.n);
  rep.se = rep.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  for (Eigen::Index j = 0; j < rep.se.size(); ++j) {
    if (!(rep.se[j] > 0.0)) {
      throw NumericalError("sandwich variance of coefficient " + std::to_string(j) + " vanishes");
    }
  }
  auto wald = wald_test(theta.to_vector(), rep.se);
  rep.z = std::move(wald.z);
  rep.p = std::move(wald.p);
  return rep;
}

InferenceReport infer(const Dataset& data, const Theta& theta) {
  const Eigen::VectorXd t = margins(data, theta);
  Eigen::VectorXd dl(t.size());
  Eigen::VectorXd d2l(t.size());
  Eigen::Index kinks = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const auto d = log_density_derivatives(data.label(i), t[i]);
    dl[i] = d.first;
    d2l[i] = d.second;
    if (d.near_kink) ++kinks;
  }
  return margin_model_inference(data, theta, dl, d2l, kinks);
}

ExistenceReport check_existence(const Dataset& data) {
  ExistenceReport rep;
  const Eigen::Index n = data.size();
  const Eigen::Index d = data.dim();
  const Eigen::Index n_pos = data.count(Label::Positive);
  const Eigen::Index n_neg = n - n_pos;
  rep.both_labels_present = n_pos > 0 && n_neg > 0;

  Eigen::MatrixXd design(n, d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = data.x();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(design);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  const double threshold = static_cast<double>(std::max(n, d + 1)) *
                           std::numeric_limits<double>::epsilon() * smax;
  rep.augmented_rank = (sv.array() > threshold).count();
  rep.full_rank = rep.augmented_rank == d + 1;

  // Opposite-label pairs with x_j = x_i, found by sorting negatives on the first covariate.
  constexpr double kRelTol = 1e-9;
  if (rep.both_labels_present) {
    std::vector<Eigen::Index> neg;
    std::vector<Eigen::Index> pos;
    for (Eigen::Index i = 0; i < n; ++i) (data.label(i) == Label::Positive ? pos : neg).push_back(i);
    const auto& x = data.x();
    std::sort(neg.begin(), neg.end(),
              [&x](Eigen::Index a, Eigen::Index b) { return x(a, 0) < x(b, 0); });
    const double global_scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    const double window = kRelTol * global_scale;
    for (Eigen::Index i : pos) {
      const double key = x(i, 0);
      auto it = std::lower_bound(neg.begin(), neg.end(), key - window,
                                 [&x](Eigen::Index a, double v) { return x(a, 0) < v; });
      for (; it != neg.end() && x(*it, 0) <= key + window; ++it) {
        const double scale =
            std::max({1.0, x.row(i).cwiseAbs().maxCoeff(), x.row(*it).cwiseAbs().maxCoeff()});
        if ((x.row(i) - x.row(*it)).cwiseAbs().maxCoeff() <= kRelTol * scale) {
          rep.remark2_pair_found = true;
          break;
        }
      }
      if (rep.remark2_pair_found) break;
    }
  }

  std::ostringstream msg;
  msg << "n=" << n << " d=" << d << "; positives=" << n_pos << " negatives=" << n_neg << "; ";
  if (!rep.both_labels_present) msg << "only one label observed, the MLE does not exist; ";
  msg << "augmented design rank " << rep.augmented_rank << " of " << d + 1;
  if (!rep.full_rank) msg << " (rank deficient: the covariate null spaces intersect nontrivially)";
  msg << "; opposite-label duplicate covariates " << (rep.remark2_pair_found ? "found" : "not found");
  rep.details = msg.str();
  return rep;
}

}  // namespace svmreg
