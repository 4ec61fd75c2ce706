#pragma once

#include "cashcast/models/forecast_model.hpp"

#include <span>

namespace cashcast {

/// Gaussian activation exp(-distance^2 / (alpha * rho)).
double rbf_activation(double distance, double alpha, double rho);

/// Radial basis function network. The target and any lag columns are lambda-transformed and
/// standardized, k-medoids picks K centres among the training rows, and the weights
/// b0..bK come from least squares on [1, phi_1..phi_K] (minimum norm if singular).
ForecastModel fit_rbf(const DesignMatrix& X, std::size_t K, unsigned alpha, std::uint64_t seed,
                      std::span<const double> lambda_grid);
ForecastModel fit_rbf(const DesignMatrix& X, std::size_t K, unsigned alpha, std::uint64_t seed);

/// Activations of raw feature rows against the stored medoids (rows x K).
Eigen::MatrixXd rbf_activations(const RBFParams& params, const Eigen::MatrixXd& rows);

/// Predictions on the raw cash-flow scale for raw feature rows.
std::vector<double> predict_rbf(const ForecastModel& model, const Eigen::MatrixXd& rows);

}  // namespace cashcast
