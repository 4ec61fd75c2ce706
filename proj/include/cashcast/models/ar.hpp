#pragma once

#include "cashcast/models/forecast_model.hpp"

#include <span>

namespace cashcast {

/// Order cap used when none is given: floor(10 log10 n), at most n - 10.
std::size_t default_max_order(std::size_t n);

/// Fits the lambda transform, demeans, and fits AR(p) by least squares for p = 0..max_p.
/// The order minimizing AIC = n ln(RSS/n) + 2(p+1) is selected, with every order scored
/// on the same n = N - max_p targets; the chosen order is then refit on all N - p targets.
/// Requires train.size() >= max_p + 10.
ForecastModel fit_ar(std::span<const double> train, std::size_t max_p,
                     std::span<const double> lambda_grid);
ForecastModel fit_ar(std::span<const double> train, std::size_t max_p);

/// Iterated multi-step forecasts from the last order_p values of `recent` (raw scale).
std::vector<double> predict_ar(const ForecastModel& model, std::span<const double> recent,
                               std::size_t horizon);

}  // namespace cashcast
