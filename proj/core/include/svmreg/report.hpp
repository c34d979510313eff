#pragma once

#include "svmreg/baselines.hpp"
#include "svmreg/inference.hpp"
#include "svmreg/optimizer.hpp"
#include "svmreg/simulate.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace svmreg {

// JSON views of the result types. Non-finite numbers serialise as null.

nlohmann::json to_json(const Eigen::VectorXd& v);
nlohmann::json to_json(const Eigen::MatrixXd& m);  ///< array of rows
nlohmann::json to_json(const Theta& theta);
nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const LogisticFit& fit);
nlohmann::json to_json(const InferenceReport& rep);
nlohmann::json to_json(const ExistenceReport& rep);
nlohmann::json to_json(const CvResult& cv);

/// {"study", "seed", "cells": [{n, d, scenario, method, mean, sd, R_effective,
/// nonconverged, failures, values}]}. Wall-clock runtimes are left out so the
/// document is a pure function of the configuration.
nlohmann::json to_json(const ExperimentReport& rep);

/// a(b) meaning a x 10^b with three significant digits, e.g. 1.80(-1).
std::string format_mantissa_exponent(double v);

/// Rows n, columns d; one MSE per cell.
std::string format_mse_table(const ExperimentReport& rep);

/// Rows (n, d), column groups per overlap level with MAP, LR and SVM means and,
/// on the following line, standard deviations.
std::string format_accuracy_table(const ExperimentReport& rep);

}  // namespace svmreg
