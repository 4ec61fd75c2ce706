#include "cashcast/models/regression.hpp"

#include "cashcast/error.hpp"

namespace cashcast {

ForecastModel fit_regression(const DesignMatrix& X, RankPolicy policy) {
    if (X.rows() <= X.cols()) {
        throw ValidationError("regression needs more rows (" + std::to_string(X.rows()) +
                              ") than columns (" + std::to_string(X.cols()) + ")");
    }
    const auto names = X.column_names();
    const auto ls = solve_least_squares(X.values, X.target, policy, names);

    TrainingSummary summary;
    summary.n_train = X.rows();
    summary.train_mean = X.target.mean();
    summary.residual_variance = ls.rss / static_cast<double>(X.rows() - static_cast<std::size_t>(ls.rank));
    summary.rank_deficient = ls.rank_deficient;
    return {Family::Regression, RegressionParams{X.columns, ls.coefficients}, summary};
}

std::vector<double> predict_regression(const ForecastModel& model, const Eigen::MatrixXd& rows) {
    const auto& params = std::get<RegressionParams>(model.params);
    if (rows.cols() != params.coefficients.size()) {
        throw ValidationError("regression expects " + std::to_string(params.coefficients.size()) +
                              " feature columns, got " + std::to_string(rows.cols()));
    }
    const Eigen::VectorXd y = rows * params.coefficients;
    return {y.data(), y.data() + y.size()};
}

}  // namespace cashcast
