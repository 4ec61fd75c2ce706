#pragma once

#include "cashcast/timeseries.hpp"
#include "cashcast/transform.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <string_view>
#include <variant>
#include <vector>

namespace cashcast {

enum class Family { Mean, AR, Regression, RBF, RandomForest };

std::string_view to_string(Family family);
/// "mean", "ar", "regression", "rbf", "random_forest"
Family parse_family(std::string_view text);

struct TrainingSummary {
    std::size_t n_train = 0;
    double train_mean = 0.0;
    double residual_variance = 0.0;
    /// Least squares fell back to the minimum-norm solution.
    bool rank_deficient = false;
};

struct MeanParams {
    double value = 0.0;
};

/// AR(p) on the lambda-transformed, demeaned series:
/// x_t = b0 + b1 x_{t-1} + ... + bp x_{t-p}, x = forward(y) - transformed_mean.
struct ARParams {
    std::size_t order_p = 0;
    std::vector<double> coefficients;  // b0..bp
    LambdaTransform lambda_transform;
    double transformed_mean = 0.0;
    double aic = 0.0;
    /// Forecasts on the transformed scale are clamped to this range before inversion.
    double z_min = -std::numeric_limits<double>::infinity();
    double z_max = std::numeric_limits<double>::infinity();
};

struct RegressionParams {
    std::vector<FeatureColumn> columns;
    Eigen::VectorXd coefficients;  // aligned with columns
};

struct RBFParams {
    std::size_t cluster_count = 0;
    unsigned alpha = 1;
    std::vector<FeatureColumn> columns;
    Eigen::MatrixXd medoids;  // K x columns, on the transformed input scale
    std::vector<double> rho;  // mean member-to-medoid distance per cluster
    Eigen::VectorXd weights;  // b0..bK
    Standardizer standardizer;
    LambdaTransform lambda_transform;
    double z_min = -std::numeric_limits<double>::infinity();
    double z_max = std::numeric_limits<double>::infinity();
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double value = 0.0;  // leaf mean
    std::size_t samples = 0;

    bool is_leaf() const noexcept { return feature < 0; }
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
};

struct ForestParams {
    std::size_t tree_count = 0;  // a
    std::size_t mtry = 0;        // b
    std::size_t node_size = 0;   // c
    std::uint64_t seed = 0;
    std::vector<FeatureColumn> columns;
    std::vector<RegressionTree> trees;
};

using ModelParams = std::variant<MeanParams, ARParams, RegressionParams, RBFParams, ForestParams>;

/// A fitted forecaster of one family. Immutable once built.
struct ForecastModel {
    Family family = Family::Mean;
    ModelParams params;
    TrainingSummary training_summary;
};

}  // namespace cashcast
