#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cashcast::stats {

double mean(std::span<const double> values);
/// Sample standard deviation (denominator n - 1).
double stddev(std::span<const double> values);
double sum_squares_about(std::span<const double> values, double center);

/// Average ranks (1-based), ties share the mean rank.
std::vector<double> ranks(std::span<const double> values);
double pearson(std::span<const double> x, std::span<const double> y);
double spearman(std::span<const double> x, std::span<const double> y);

/// Deterministic sub-seed for stream `stream` of a master seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace cashcast::stats
