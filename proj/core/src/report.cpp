#include "svmreg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace svmreg {

namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

nlohmann::json to_json(const Eigen::VectorXd& v) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(number(v[i]));
  return arr;
}

nlohmann::json to_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return rows;
}

nlohmann::json to_json(const Theta& theta) {
  return {{"alpha", number(theta.alpha)}, {"beta", to_json(theta.beta)}};
}

nlohmann::json to_json(const FitResult& fit) {
  auto starts = nlohmann::json::array();
  for (double v : fit.all_start_logliks) starts.push_back(number(v));
  return {{"theta", to_json(fit.theta_hat)},
          {"loglik_mean", number(fit.loglik)},
          {"loglik_total", number(fit.total_loglik)},
          {"converged", fit.converged},
          {"termination", std::string(to_string(fit.reason))},
          {"n_iter", fit.n_iter},
          {"grad_norm", number(fit.grad_norm)},
          {"start_index", fit.start_index},
          {"all_start_logliks", starts}};
}

nlohmann::json to_json(const LogisticFit& fit) {
  return {{"theta", to_json(fit.theta_tilde)},
          {"loglik_total", number(fit.loglik)},
          {"converged", fit.converged},
          {"separation", fit.separation},
          {"n_iter", fit.n_iter},
          {"grad_norm", number(fit.grad_norm)}};
}

nlohmann::json to_json(const InferenceReport& rep) {
  return {{"A_hat", to_json(rep.a_hat)},
          {"B_hat", to_json(rep.b_hat)},
          {"cov", to_json(rep.cov)},
          {"se", to_json(rep.se)},
          {"z", to_json(rep.z)},
          {"p", to_json(rep.p)},
          {"n", rep.n},
          {"kink_count", rep.kink_count},
          {"kink_warning", rep.kink_warning()}};
}

nlohmann::json to_json(const ExistenceReport& rep) {
  return {{"both_labels_present", rep.both_labels_present},
          {"augmented_rank", rep.augmented_rank},
          {"full_rank", rep.full_rank},
          {"remark2_pair_found", rep.remark2_pair_found},
          {"passes_gate", rep.passes_gate()},
          {"details", rep.details}};
}

nlohmann::json to_json(const CvResult& cv) {
  auto folds = nlohmann::json::array();
  for (double a : cv.fold_accuracy) folds.push_back(number(a));
  return {{"mean", number(cv.mean)},
          {"sd", number(cv.sd)},
          {"fold_accuracy", folds},
          {"excluded_folds", cv.excluded_folds}};
}

nlohmann::json to_json(const ExperimentReport& rep) {
  auto cells = nlohmann::json::array();
  for (const auto& c : rep.cells) {
    auto values = nlohmann::json::array();
    for (double v : c.values) values.push_back(number(v));
    cells.push_back({{"n", c.n},
                     {"d", c.d},
                     {"scenario", c.scenario},
                     {"method", c.method},
                     {"mean", number(c.mean)},
                     {"sd", number(c.sd)},
                     {"R_effective", c.r_effective},
                     {"nonconverged", c.nonconverged},
                     {"failures", c.failures},
                     {"values", values}});
  }
  return {{"study", rep.study}, {"seed", rep.seed}, {"cells", cells}};
}

std::string format_mantissa_exponent(double v) {
  if (!std::isfinite(v)) return "nan";
  if (v == 0.0) return "0.00(+0)";
  int exponent = static_cast<int>(std::floor(std::log10(std::abs(v))));
  double mantissa = v / std::pow(10.0, exponent);
  // rounding can carry the mantissa to 10.0
  if (std::abs(std::round(mantissa * 100.0) / 100.0) >= 10.0) {
    mantissa /= 10.0;
    ++exponent;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f(%+d)", mantissa, exponent);
  return buf;
}

std::string format_mse_table(const ExperimentReport& rep) {
  std::vector<int> ns;
  std::vector<int> ds;
  for (const auto& c : rep.cells) {
    ns.push_back(c.n);
    ds.push_back(c.d);
  }
  ns = sorted_unique(ns);
  ds = sorted_unique(ds);

  std::ostringstream out;
  out << "Mean squared error of the MLE over replications; a(b) = a x 10^b\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%8s", "n \\ d");
  out << buf;
  for (int d : ds) {
    std::snprintf(buf, sizeof buf, " %12d", d);
    out << buf;
  }
  out << '\n';
  for (int n : ns) {
    std::snprintf(buf, sizeof buf, "%8d", n);
    out << buf;
    for (int d : ds) {
      std::string v = "-";
      for (const auto& c : rep.cells) {
        if (c.n == n && c.d == d) v = format_mantissa_exponent(c.mean);
      }
      std::snprintf(buf, sizeof buf, " %12s", v.c_str());
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string format_accuracy_table(const ExperimentReport& rep) {
  std::vector<int> ns;
  std::vector<int> ds;
  std::vector<std::string> scenarios;
  for (const auto& c : rep.cells) {
    ns.push_back(c.n);
    ds.push_back(c.d);
    if (std::find(scenarios.begin(), scenarios.end(), c.scenario) == scenarios.end()) {
      scenarios.push_back(c.scenario);
    }
  }
  ns = sorted_unique(ns);
  ds = sorted_unique(ds);
  const char* methods[] = {"svmreg", "logistic", "svm"};
  const char* headers[] = {"MAP", "LR", "SVM"};

  std::ostringstream out;
  char buf[64];
  out << "Mean test accuracy over replications (standard deviation below)\n";
  std::snprintf(buf, sizeof buf, "%6s %4s", "n", "d");
  out << buf;
  for (const auto& s : scenarios) {
    std::snprintf(buf, sizeof buf, " | %-23s", s.c_str());
    out << buf;
  }
  out << '\n';
  std::snprintf(buf, sizeof buf, "%6s %4s", "", "");
  out << buf;
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    out << " |";
    for (const char* h : headers) {
      std::snprintf(buf, sizeof buf, " %7s", h);
      out << buf;
    }
  }
  out << '\n';
  for (int n : ns) {
    for (int d : ds) {
      for (int line = 0; line < 2; ++line) {
        if (line == 0) {
          std::snprintf(buf, sizeof buf, "%6d %4d", n, d);
        } else {
          std::snprintf(buf, sizeof buf, "%6s %4s", "", "");
        }
        out << buf;
        for (const auto& s : scenarios) {
          out << " |";
          for (const char* m : methods) {
            const CellSummary* c = rep.find(n, d, s, m);
            if (c == nullptr) {
              std::snprintf(buf, sizeof buf, " %7s", "-");
            } else if (line == 0) {
              std::snprintf(buf, sizeof buf, " %7.3f", c->mean);
            } else {
              std::snprintf(buf, sizeof buf, " (%5.3f)", c->sd);
            }
            out << buf;
          }
        }
        out << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace svmreg
