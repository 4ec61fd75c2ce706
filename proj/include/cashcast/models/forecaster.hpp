#pragma once

#include "cashcast/linalg.hpp"
#include "cashcast/models/forecast_model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cashcast {

/// Everything needed to refit one forecaster on an arbitrary training window.
struct ModelSpec {
    Family family = Family::Mean;
    FeatureSpec features;  // Regression, RBF and RandomForest

    std::optional<std::size_t> ar_max_p;  // unset: default_max_order(n)

    std::size_t rbf_clusters = 10;  // K
    unsigned rbf_alpha = 10;

    std::size_t forest_trees = 20;      // a
    std::size_t forest_mtry = 11;       // b
    std::size_t forest_node_size = 50;  // c

    RankPolicy rank_policy = RankPolicy::Throw;
    std::uint64_t seed = 0;
    /// Candidate lambdas for the power transform; empty means default_lambda_grid().
    std::vector<double> lambda_grid;

    /// Short description of the inputs, e.g. "d2..d31,s2..s5" or "p past values".
    std::string inputs_label() const;
    /// Hyperparameters, e.g. "K=10 alpha=10".
    std::string parameters_label() const;
    /// Rough parameter count used to prefer simpler models on ties.
    std::size_t complexity() const;
};

/// Fits `spec` on the training window (dates and values aligned, oldest first).
ForecastModel fit_model(const ModelSpec& spec, std::span<const Date> dates, std::span<const double> values);

/// Forecasts for `future_dates`, which follow the end of `history` consecutively. Lagged inputs
/// beyond the history are fed from earlier forecasts.
std::vector<double> forecast(const ForecastModel& model, std::span<const double> history,
                             std::span<const Date> future_dates);

}  // namespace cashcast
