#include "cashcast/models/rbf.hpp"

#include "cashcast/error.hpp"
#include "cashcast/linalg.hpp"
#include "cashcast/models/kmedoids.hpp"

#include <algorithm>
#include <cmath>

namespace cashcast {

namespace {

bool is_lag(const FeatureColumn& c) { return c.kind == FeatureColumn::Kind::Lag; }

// Lag columns move to the transformed, standardized scale; dummies are left alone.
Eigen::MatrixXd transform_inputs(const RBFParams& params, const Eigen::MatrixXd& rows) {
    Eigen::MatrixXd out = rows;
    for (std::size_t j = 0; j < params.columns.size(); ++j) {
        if (!is_lag(params.columns[j])) continue;
        auto col = out.col(static_cast<Eigen::Index>(j));
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            col(i) = params.standardizer.apply(params.lambda_transform.forward(col(i)));
        }
    }
    return out;
}

}  // namespace

double rbf_activation(double distance, double alpha, double rho) {
    return std::exp(-distance * distance / (alpha * rho));
}

Eigen::MatrixXd rbf_activations(const RBFParams& params, const Eigen::MatrixXd& rows) {
    if (static_cast<std::size_t>(rows.cols()) != params.columns.size()) {
        throw ValidationError("RBF expects " + std::to_string(params.columns.size()) +
                              " feature columns, got " + std::to_string(rows.cols()));
    }
    const Eigen::MatrixXd inputs = transform_inputs(params, rows);
    const auto K = static_cast<Eigen::Index>(params.cluster_count);
    Eigen::MatrixXd phi(inputs.rows(), K);
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        for (Eigen::Index k = 0; k < K; ++k) {
            const double d = (inputs.row(i) - params.medoids.row(k)).norm();
            phi(i, k) = rbf_activation(d, params.alpha, params.rho[static_cast<std::size_t>(k)]);
        }
    }
    return phi;
}

ForecastModel fit_rbf(const DesignMatrix& X, std::size_t K, unsigned alpha, std::uint64_t seed) {
    const auto grid = default_lambda_grid();
    return fit_rbf(X, K, alpha, seed, grid);
}

ForecastModel fit_rbf(const DesignMatrix& X, std::size_t K, unsigned alpha, std::uint64_t seed,
                      std::span<const double> lambda_grid) {
    if (K == 0 || alpha == 0) {
        throw ValidationError("RBF needs K >= 1 and alpha >= 1");
    }
    if (X.rows() < K + 1) {
        throw ValidationError("RBF with K = " + std::to_string(K) + " needs at least " +
                              std::to_string(K + 1) + " rows");
    }

    RBFParams params;
    params.cluster_count = K;
    params.alpha = alpha;
    std::vector<Eigen::Index> keep;
    for (std::size_t j = 0; j < X.columns.size(); ++j) {
        if (X.columns[j].kind != FeatureColumn::Kind::Intercept) {
            keep.push_back(static_cast<Eigen::Index>(j));
            params.columns.push_back(X.columns[j]);
        }
    }
    if (keep.empty()) {
        throw ValidationError("RBF needs at least one non-intercept feature column");
    }

    const std::span<const double> target(X.target.data(), static_cast<std::size_t>(X.target.size()));
    params.lambda_transform = fit_lambda(target, lambda_grid);
    const auto z = params.lambda_transform.forward(target);
    const auto [z_lo, z_hi] = std::minmax_element(z.begin(), z.end());
    params.z_min = *z_lo;
    params.z_max = *z_hi;
    auto [standardizer, zs] = standardize(z);
    params.standardizer = standardizer;

    const Eigen::MatrixXd inputs = transform_inputs(params, X.values(Eigen::all, keep));
    const Clustering clustering = fit_kmedoids(inputs, K, seed);

    params.medoids.resize(static_cast<Eigen::Index>(K), inputs.cols());
    for (std::size_t k = 0; k < K; ++k) {
        params.medoids.row(static_cast<Eigen::Index>(k)) =
            inputs.row(static_cast<Eigen::Index>(clustering.medoids[k]));
    }
    params.rho.assign(K, 0.0);
    std::vector<double> members(K, 0.0);
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        const auto k = clustering.assignment[static_cast<std::size_t>(i)];
        params.rho[k] += (inputs.row(i) - params.medoids.row(static_cast<Eigen::Index>(k))).norm();
        members[k] += 1.0;
    }
    double min_positive = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        params.rho[k] /= members[k];
        if (params.rho[k] > 0.0 && (min_positive == 0.0 || params.rho[k] < min_positive)) {
            min_positive = params.rho[k];
        }
    }
    // Clusters whose members all sit on the medoid borrow the smallest positive spread.
    for (auto& r : params.rho) {
        if (r == 0.0) r = min_positive > 0.0 ? min_positive : 1.0;
    }

    const auto n = inputs.rows();
    Eigen::MatrixXd design(n, static_cast<Eigen::Index>(K) + 1);
    design.col(0).setOnes();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            const auto kk = static_cast<Eigen::Index>(k);
            const double d = (inputs.row(i) - params.medoids.row(kk)).norm();
            design(i, kk + 1) = rbf_activation(d, alpha, params.rho[k]);
        }
    }
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(zs.data(), static_cast<Eigen::Index>(zs.size()));
    const auto ls = solve_least_squares(design, y, RankPolicy::MinimumNorm);
    params.weights = ls.coefficients;

    TrainingSummary summary;
    summary.n_train = X.rows();
    summary.train_mean = X.target.mean();
    summary.residual_variance = ls.rss / static_cast<double>(n);  // standardized scale
    summary.rank_deficient = ls.rank_deficient;
    return {Family::RBF, std::move(params), summary};
}

std::vector<double> predict_rbf(const ForecastModel& model, const Eigen::MatrixXd& rows) {
    const auto& params = std::get<RBFParams>(model.params);
    const Eigen::MatrixXd phi = rbf_activations(params, rows);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index i = 0; i < phi.rows(); ++i) {
        const double standardized = params.weights(0) + phi.row(i).dot(params.weights.tail(phi.cols()));
        const double z = std::clamp(params.standardizer.restore(standardized), params.z_min, params.z_max);
        out.push_back(params.lambda_transform.inverse(z));
    }
    return out;
}

}  // namespace cashcast
