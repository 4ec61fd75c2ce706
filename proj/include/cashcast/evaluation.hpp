#pragma once

#include "cashcast/models/forecaster.hpp"
#include "cashcast/timeseries.hpp"

#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace cashcast {

/// Sum of squared forecast errors over the sum of squared errors of `train_mean`.
/// 0 is a perfect forecast, 1 is no better than the training mean.
double error_ratio(std::span<const double> forecasts, std::span<const double> actuals, double train_mean);

enum class OriginMethod { FixedOrigin, RollingOrigin };

std::string_view to_string(OriginMethod method);

struct CVOptions {
    std::size_t g = 0;  // minimum training length
    std::size_t H = 1;  // maximum horizon
    OriginMethod method = OriginMethod::FixedOrigin;
    /// Refit every `stride` origins (1 = every origin).
    std::size_t stride = 1;
    /// Only use origins whose whole H-day window lies inside the series.
    bool full_windows_only = false;
};

/// 1-based origins i. Origin i trains on observations up to g + i - 1 and forecasts from g + i.
std::vector<std::size_t> cv_origins(std::size_t T, const CVOptions& options);

struct EvaluationReport {
    std::vector<double> per_horizon_epsilon;  // index h - 1
    std::vector<std::size_t> folds_per_horizon;
    double mean_epsilon = 0.0;
    /// Sample standard deviation of epsilon(h) across horizons.
    double epsilon_stddev = 0.0;
    std::size_t fold_count = 0;
    OriginMethod method = OriginMethod::FixedOrigin;
    std::size_t g = 0;
    std::size_t H = 0;
};

/// Returns forecasts for 0-based positions train_end .. train_end + count - 1 after training on
/// positions [train_begin, train_end).
using ForecastProvider =
    std::function<std::vector<double>(std::size_t train_begin, std::size_t train_end, std::size_t count)>;

/// Time-series cross validation. Squared errors are pooled over folds per horizon; each fold's
/// benchmark is the mean of its own training window.
EvaluationReport cross_validate(std::span<const double> values, const CVOptions& options,
                                const ForecastProvider& provider);
EvaluationReport cross_validate(const CashFlowSeries& series, const ModelSpec& spec, const CVOptions& options);

/// Provider that refits `spec` on each training window.
ForecastProvider model_provider(const CashFlowSeries& series, const ModelSpec& spec);

/// `h,epsilon` rows then `mean,<epsilon_bar>`.
void write_report_csv(const EvaluationReport& report, std::ostream& out);

struct SearchResult {
    std::size_t chosen = 0;
    ModelSpec spec;
    /// R^2 per candidate; NaN where the candidate failed to fit.
    std::vector<double> r_squared;
};

/// Fits each candidate on the oldest 80% of the first `train_fraction` of the series and scores R^2
/// of its multi-step forecast on the remaining 20% of that slice. Ties go to the lower complexity().
SearchResult parameter_search(const CashFlowSeries& series, std::span<const ModelSpec> candidates,
                              double train_fraction = 0.65);

}  // namespace cashcast
