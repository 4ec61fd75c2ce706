#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace cashcast {

/// Signed power transform sign(y)((|y|+1)^lambda - 1)/lambda, a Box-Cox extension that is
/// defined and invertible on the whole real line. lambda = 0 is sign(y) ln(|y|+1), lambda = 1
/// is the identity.
struct LambdaTransform {
    double lambda = 1.0;
    std::size_t fitted_on_length = 0;

    double forward(double y) const;
    /// Throws DomainError when lambda*|z| + 1 <= 0.
    double inverse(double z) const;

    std::vector<double> forward(std::span<const double> ys) const;
    bool operator==(const LambdaTransform&) const = default;
};

/// -2, -1.95, ..., 2
std::vector<double> default_lambda_grid();

/// Gaussian profile log-likelihood of the transformed values, Jacobian included.
double lambda_log_likelihood(std::span<const double> values, double lambda);

/// Grid maximizer of lambda_log_likelihood; ties go to the lambda closest to 1.
/// Requires >= 10 non-constant values and a nonempty grid.
LambdaTransform fit_lambda(std::span<const double> values, std::span<const double> grid);
inline LambdaTransform fit_lambda(std::span<const double> values) {
    const auto grid = default_lambda_grid();
    return fit_lambda(values, grid);
}

struct Standardizer {
    double mean = 0.0;
    double std_dev = 1.0;

    double apply(double v) const { return (v - mean) / std_dev; }
    double restore(double z) const { return z * std_dev + mean; }
    bool operator==(const Standardizer&) const = default;
};

/// Sample mean and sample standard deviation; throws DegenerateError for constant input.
std::pair<Standardizer, std::vector<double>> standardize(std::span<const double> values);

}  // namespace cashcast
