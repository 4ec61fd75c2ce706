#include "cashcast/error.hpp"
#include "cashcast/stats.hpp"
#include "cashcast/transform.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace cashcast;

TEST_CASE("forward and inverse reference values") {
    const LambdaTransform id{1.0, 0};
    CHECK(id.forward(-7.3) == -7.3);
    CHECK(id.inverse(-7.3) == -7.3);

    const LambdaTransform log_t{0.0, 0};
    CHECK(log_t.forward(std::numbers::e - 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(log_t.inverse(1.0) == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-15));

    const LambdaTransform half{0.5, 0};
    CHECK(half.forward(3.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(half.inverse(2.0) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("inverse outside the range of forward is a domain error") {
    const LambdaTransform t{-1.0, 0};
    // forward maps the reals into (-1, 1) for lambda = -1
    CHECK_THROWS_AS(t.inverse(1.5), DomainError);
    CHECK_NOTHROW(t.inverse(0.5));
}

TEST_CASE("forward is odd and strictly increasing") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lam(-2.0, 2.0);
    std::uniform_real_distribution<double> y(-1e4, 1e4);
    for (int i = 0; i < 5000; ++i) {
        const LambdaTransform t{lam(rng), 0};
        double a = y(rng);
        double b = y(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        CHECK(t.forward(-a) == -t.forward(a));
        CHECK(t.forward(a) < t.forward(b));
    }
}

TEST_CASE("round trip in the well-conditioned range") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> lam(-0.5, 2.0);
    std::uniform_real_distribution<double> mag(0.0, 7.0);
    std::bernoulli_distribution neg(0.5);
    for (int i = 0; i < 10000; ++i) {
        const LambdaTransform t{lam(rng), 0};
        const double y = (neg(rng) ? -1.0 : 1.0) * std::pow(10.0, mag(rng));
        CHECK(std::abs(t.inverse(t.forward(y)) - y) / std::max(1.0, std::abs(y)) < 1e-9);
    }
}

TEST_CASE("fit_lambda on Gaussian data stays near 1") {
    const auto z = testdata::white_noise(5000, 123);
    const auto t = fit_lambda(z);
    CHECK(std::abs(t.lambda - 1.0) <= 0.1);
    CHECK(t.fitted_on_length == 5000);

    // brute-force oracle: likelihood at the chosen lambda is the grid maximum
    const auto grid = default_lambda_grid();
    double best = -INFINITY;
    for (double l : grid) best = std::max(best, lambda_log_likelihood(z, l));
    CHECK(lambda_log_likelihood(z, t.lambda) == best);
}

TEST_CASE("fit_lambda on log-normal-shaped data picks lambda near 0") {
    // z ~ N(6, 1) is positive on every draw, so log1p(y) = z is Gaussian
    auto z = testdata::white_noise(5000, 321);
    std::vector<double> y;
    for (double v : z) {
        REQUIRE(v + 6.0 > 0.0);
        y.push_back(std::expm1(v + 6.0));
    }
    const auto t = fit_lambda(y);
    // oracle: scan a fine grid
    std::vector<double> fine;
    for (int k = -400; k <= 400; ++k) fine.push_back(k / 200.0);
    const auto oracle = fit_lambda(y, fine);
    CHECK(std::abs(t.lambda) <= 0.15);
    CHECK(std::abs(t.lambda - oracle.lambda) <= 0.05);
}

TEST_CASE("fit_lambda contract") {
    const auto z = testdata::white_noise(50, 4);
    const std::vector<double> one{1.0};
    CHECK(fit_lambda(z, one).lambda == 1.0);
    CHECK_THROWS_AS(fit_lambda(std::vector<double>(20, 3.0)), DegenerateError);
    CHECK_THROWS_AS(fit_lambda(std::vector<double>(5, 1.0)), ValidationError);
    CHECK_THROWS_AS(fit_lambda(z, std::vector<double>{}), ValidationError);
}

TEST_CASE("fit_lambda is invariant to input order") {
    auto y = testdata::white_noise(400, 8, 50.0);
    for (auto& v : y) v = v * std::abs(v);
    const auto a = fit_lambda(y);
    std::mt19937_64 rng(1);
    std::shuffle(y.begin(), y.end(), rng);
    CHECK(fit_lambda(y).lambda == a.lambda);
}

TEST_CASE("standardize") {
    const auto [s, out] = standardize(std::vector<double>{0.0, 2.0});
    CHECK(s.mean == 1.0);
    CHECK(s.std_dev == doctest::Approx(std::sqrt(2.0)));
    CHECK(out[0] == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(out[1] == doctest::Approx(1.0 / std::sqrt(2.0)));

    const auto [s2, twice] = standardize(out);
    CHECK(std::abs(s2.mean) < 1e-15);
    CHECK(s2.std_dev == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(twice[0] == doctest::Approx(out[0]).epsilon(1e-15));

    const auto x = testdata::white_noise(1000, 77, 300.0);
    const auto [s3, z] = standardize(x);
    CHECK(std::abs(stats::mean(z)) < 1e-12);
    CHECK(std::abs(stats::stddev(z) - 1.0) < 1e-12);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(s3.restore(z[i]) - x[i]));
    CHECK(worst < 1e-12);

    CHECK_THROWS_AS(standardize(std::vector<double>{2.0, 2.0, 2.0}), DegenerateError);
}
