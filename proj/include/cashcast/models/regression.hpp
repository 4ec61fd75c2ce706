#pragma once

#include "cashcast/linalg.hpp"
#include "cashcast/models/forecast_model.hpp"

namespace cashcast {

/// Ordinary least squares on the design matrix columns (intercept included as a column).
ForecastModel fit_regression(const DesignMatrix& X, RankPolicy policy = RankPolicy::Throw);
std::vector<double> predict_regression(const ForecastModel& model, const Eigen::MatrixXd& rows);

}  // namespace cashcast
