#pragma once

#include "cashcast/models/forecast_model.hpp"

namespace cashcast {

/// Random forest of `a` CART regression trees. Tree k draws a bootstrap sample of the rows
/// and its split candidates from a generator seeded with seed + k. At each node `b` columns
/// that vary within the node are tried (drawn in random order); the split minimizing the children's total squared error over midpoints of
/// distinct sorted values wins (ties: lower column, then lower threshold). Nodes with at most
/// `c` samples, or no error reduction, become leaves holding the sample mean.
ForecastModel fit_random_forest(const DesignMatrix& X, std::size_t a, std::size_t b, std::size_t c,
                                std::uint64_t seed);

std::vector<double> predict_forest(const ForecastModel& model, const Eigen::MatrixXd& rows);

}  // namespace cashcast
