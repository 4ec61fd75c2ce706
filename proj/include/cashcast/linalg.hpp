#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>

namespace cashcast {

enum class RankPolicy {
    Throw,        ///< CollinearityError naming the first dependent column
    MinimumNorm,  ///< minimum-norm solution, flagged in the result
};

struct LeastSquaresSolution {
    Eigen::VectorXd coefficients;
    Eigen::Index rank = 0;
    bool rank_deficient = false;
    double rss = 0.0;
};

/// Solves min ||X b - y||. `column_names` (may be empty) label the columns of X for errors.
LeastSquaresSolution solve_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                         RankPolicy policy,
                                         std::span<const std::string> column_names = {});

/// Index of the first column whose prefix X[:, 0..j] is rank deficient, or -1.
Eigen::Index first_dependent_column(const Eigen::MatrixXd& X);

}  // namespace cashcast
