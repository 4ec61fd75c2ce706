#pragma once

#include "cashcast/models/forecast_model.hpp"

#include <span>

namespace cashcast {

/// Naive benchmark: the training mean at every horizon.
ForecastModel fit_mean(std::span<const double> train);
std::vector<double> predict_mean(const ForecastModel& model, std::size_t horizon);

}  // namespace cashcast
