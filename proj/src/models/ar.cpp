#include "cashcast/models/ar.hpp"

#include "cashcast/error.hpp"
#include "cashcast/linalg.hpp"
#include "cashcast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cashcast {

std::size_t default_max_order(std::size_t n) {
    if (n < 11) {
        return 0;
    }
    const auto p = static_cast<std::size_t>(std::floor(10.0 * std::log10(static_cast<double>(n))));
    return std::min(p, n - 10);
}

namespace {

// Rows t = first..N-1 of [1, x_{t-1}, ..., x_{t-p}] with targets x_t.
void lag_design(const std::vector<double>& x, std::size_t p, std::size_t first, Eigen::MatrixXd& X,
                Eigen::VectorXd& y) {
    const std::size_t n = x.size() - first;
    X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p + 1));
    y.resize(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t t = first + r;
        const auto ri = static_cast<Eigen::Index>(r);
        X(ri, 0) = 1.0;
        for (std::size_t k = 1; k <= p; ++k) {
            X(ri, static_cast<Eigen::Index>(k)) = x[t - k];
        }
        y(ri) = x[t];
    }
}

}  // namespace

ForecastModel fit_ar(std::span<const double> train, std::size_t max_p) {
    const auto grid = default_lambda_grid();
    return fit_ar(train, max_p, grid);
}

ForecastModel fit_ar(std::span<const double> train, std::size_t max_p,
                     std::span<const double> lambda_grid) {
    if (train.size() < max_p + 10) {
        throw ValidationError("AR fit needs at least max_p + 10 = " + std::to_string(max_p + 10) +
                              " observations, got " + std::to_string(train.size()));
    }
    const LambdaTransform lt = fit_lambda(train, lambda_grid);
    auto z = lt.forward(train);
    const double z_mean = stats::mean(z);
    const auto [z_lo, z_hi] = std::minmax_element(z.begin(), z.end());
    std::vector<double> x(z.size());
    std::transform(z.begin(), z.end(), x.begin(), [&](double v) { return v - z_mean; });

    // Score every order on the common sample t = max_p..N-1 through the normal equations.
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    lag_design(x, max_p, max_p, X, y);
    const Eigen::MatrixXd gram = X.transpose() * X;
    const Eigen::VectorXd cross = X.transpose() * y;
    const double yy = y.squaredNorm();
    const auto n = static_cast<double>(y.size());

    std::size_t best_p = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p <= max_p; ++p) {
        const auto k = static_cast<Eigen::Index>(p + 1);
        const Eigen::VectorXd beta = gram.topLeftCorner(k, k).ldlt().solve(cross.head(k));
        const double rss = std::max(yy - beta.dot(cross.head(k)), yy * 1e-15 + 1e-300);
        const double aic = n * std::log(rss / n) + 2.0 * static_cast<double>(p + 1);
        if (aic < best_aic) {
            best_aic = aic;
            best_p = p;
        }
    }

    lag_design(x, best_p, best_p, X, y);
    const auto ls = solve_least_squares(X, y, RankPolicy::MinimumNorm);

    ARParams params;
    params.order_p = best_p;
    params.coefficients.assign(ls.coefficients.data(), ls.coefficients.data() + ls.coefficients.size());
    params.lambda_transform = lt;
    params.transformed_mean = z_mean;
    params.aic = best_aic;
    params.z_min = *z_lo;
    params.z_max = *z_hi;

    TrainingSummary summary;
    summary.n_train = train.size();
    summary.train_mean = stats::mean(train);
    summary.residual_variance = ls.rss / static_cast<double>(y.size());
    summary.rank_deficient = ls.rank_deficient;
    return {Family::AR, std::move(params), summary};
}

std::vector<double> predict_ar(const ForecastModel& model, std::span<const double> recent,
                               std::size_t horizon) {
    const auto& params = std::get<ARParams>(model.params);
    const std::size_t p = params.order_p;
    if (params.coefficients.size() != p + 1) {
        throw ValidationError("AR coefficient count does not match the order");
    }
    if (recent.size() < p) {
        throw ValidationError("AR(" + std::to_string(p) + ") forecast needs " + std::to_string(p) +
                              " recent observations, got " + std::to_string(recent.size()));
    }
    const auto& lt = params.lambda_transform;
    std::vector<double> buffer;
    buffer.reserve(p + horizon);
    for (std::size_t i = recent.size() - p; i < recent.size(); ++i) {
        buffer.push_back(lt.forward(recent[i]) - params.transformed_mean);
    }
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        double next = params.coefficients[0];
        for (std::size_t k = 1; k <= p; ++k) {
            next += params.coefficients[k] * buffer[buffer.size() - k];
        }
        buffer.push_back(next);
        const double z = std::clamp(next + params.transformed_mean, params.z_min, params.z_max);
        out.push_back(lt.inverse(z));
    }
    return out;
}

}  // namespace cashcast
