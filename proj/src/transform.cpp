#include "cashcast/transform.hpp"

#include "cashcast/error.hpp"
#include "cashcast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cashcast {

double LambdaTransform::forward(double y) const {
    if (lambda == 1.0) {
        return y;
    }
    const double a = std::log1p(std::abs(y));
    const double magnitude = lambda == 0.0 ? a : std::expm1(lambda * a) / lambda;
    return std::copysign(magnitude, y);
}

double LambdaTransform::inverse(double z) const {
    if (lambda == 1.0) {
        return z;
    }
    const double a = std::abs(z);
    if (lambda == 0.0) {
        return std::copysign(std::expm1(a), z);
    }
    const double base = lambda * a;
    if (!(base > -1.0)) {
        throw DomainError("value " + std::to_string(z) + " outside the range of the lambda=" +
                          std::to_string(lambda) + " transform");
    }
    return std::copysign(std::expm1(std::log1p(base) / lambda), z);
}

std::vector<double> LambdaTransform::forward(std::span<const double> ys) const {
    std::vector<double> out;
    out.reserve(ys.size());
    for (double y : ys) out.push_back(forward(y));
    return out;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int k = -40; k <= 40; ++k) grid.push_back(k / 20.0);
    return grid;
}

double lambda_log_likelihood(std::span<const double> values, double lambda) {
    const LambdaTransform t{lambda, values.size()};
    double sum = 0.0;
    double log_jacobian = 0.0;
    for (double y : values) {
        sum += t.forward(y);
        log_jacobian += std::log1p(std::abs(y));
    }
    const auto n = static_cast<double>(values.size());
    const double m = sum / n;
    double ss = 0.0;
    for (double y : values) {
        const double d = t.forward(y) - m;
        ss += d * d;
    }
    if (!(ss > 0.0) || !std::isfinite(ss)) {
        return -std::numeric_limits<double>::infinity();
    }
    return -0.5 * n * std::log(ss / n) + (lambda - 1.0) * log_jacobian;
}

LambdaTransform fit_lambda(std::span<const double> values, std::span<const double> grid) {
    if (values.size() < 10) {
        throw ValidationError("lambda fit needs at least 10 values");
    }
    if (grid.empty()) {
        throw ValidationError("lambda grid is empty");
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
        throw DegenerateError("cannot fit a power transform to a constant series");
    }
    // Sorting makes the floating-point sums independent of input order.
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    double best_lambda = grid.front();
    double best_ll = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (double lambda : grid) {
        if (!std::isfinite(lambda)) {
            throw ValidationError("lambda grid contains a non-finite value");
        }
        const double ll = lambda_log_likelihood(sorted, lambda);
        if (!std::isfinite(ll)) {
            continue;
        }
        const bool better = !found || ll > best_ll;
        const bool tie = found && ll == best_ll && std::abs(lambda - 1.0) < std::abs(best_lambda - 1.0);
        if (better || tie) {
            best_lambda = lambda;
            best_ll = ll;
            found = true;
        }
    }
    if (!found) {
        throw DegenerateError("no lambda in the grid gives a finite likelihood");
    }
    return {best_lambda, values.size()};
}

std::pair<Standardizer, std::vector<double>> standardize(std::span<const double> values) {
    if (values.size() < 2) {
        throw ValidationError("standardize needs at least 2 values");
    }
    const double m = stats::mean(values);
    const double sd = stats::stddev(values);
    if (!(sd > 0.0)) {
        throw DegenerateError("cannot standardize a constant series");
    }
    Standardizer s{m, sd};
    std::vector<double> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(s.apply(v));
    return {s, std::move(out)};
}

}  // namespace cashcast
