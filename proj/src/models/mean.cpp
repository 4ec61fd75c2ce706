#include "cashcast/models/mean.hpp"

#include "cashcast/error.hpp"
#include "cashcast/stats.hpp"

namespace cashcast {

ForecastModel fit_mean(std::span<const double> train) {
    if (train.empty()) {
        throw ValidationError("mean model needs at least one training value");
    }
    const double m = stats::mean(train);
    TrainingSummary summary;
    summary.n_train = train.size();
    summary.train_mean = m;
    summary.residual_variance =
        train.size() > 1 ? stats::sum_squares_about(train, m) / static_cast<double>(train.size() - 1) : 0.0;
    return {Family::Mean, MeanParams{m}, summary};
}

std::vector<double> predict_mean(const ForecastModel& model, std::size_t horizon) {
    return std::vector<double>(horizon, std::get<MeanParams>(model.params).value);
}

}  // namespace cashcast
