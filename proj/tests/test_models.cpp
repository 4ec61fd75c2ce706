#include "cashcast/error.hpp"
#include "cashcast/models/ar.hpp"
#include "cashcast/models/forecaster.hpp"
#include "cashcast/models/forest.hpp"
#include "cashcast/models/kmedoids.hpp"
#include "cashcast/models/mean.hpp"
#include "cashcast/models/rbf.hpp"
#include "cashcast/models/regression.hpp"
#include "cashcast/stats.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

using namespace cashcast;

namespace {

FeatureSpec calendar_spec() {
    FeatureSpec f;
    f.use_day_of_month = true;
    f.use_day_of_week = true;
    return f;
}

// Exhaustive k-medoids optimum over all K-subsets of rows.
double brute_force_cost(const Eigen::MatrixXd& P, std::size_t K) {
    const auto n = static_cast<std::size_t>(P.rows());
    std::vector<int> pick(n, 0);
    std::fill(pick.end() - static_cast<std::ptrdiff_t>(K), pick.end(), 1);
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < n; ++m) {
                if (pick[m]) d = std::min(d, (P.row(static_cast<Eigen::Index>(i)) - P.row(static_cast<Eigen::Index>(m))).norm());
            }
            cost += d;
        }
        best = std::min(best, cost);
    } while (std::next_permutation(pick.begin(), pick.end()));
    return best;
}

}  // namespace

TEST_CASE("mean model") {
    const auto m = fit_mean(std::vector<double>{1, 2, 3});
    const auto p = predict_mean(m, 100);
    CHECK(p.size() == 100);
    CHECK(std::all_of(p.begin(), p.end(), [](double v) { return v == 2.0; }));
    CHECK(predict_mean(fit_mean(std::vector<double>{-5}), 3)[2] == -5.0);
    CHECK(predict_mean(fit_mean(std::vector<double>(50, 0.0)), 1)[0] == 0.0);
    CHECK_THROWS_AS(fit_mean(std::vector<double>{}), ValidationError);
}

TEST_CASE("AR(1) coefficient matches the least-squares oracle") {
    const auto y = testdata::ar1(2000, 0.8, 2024);
    const auto model = fit_ar(y, 10);
    const auto& ar = std::get<ARParams>(model.params);
    REQUIRE(ar.order_p >= 1);
    REQUIRE(ar.coefficients.size() == ar.order_p + 1);

    // closed form: regress y_t on [1, y_{t-1}]
    Eigen::MatrixXd X(1999, 2);
    Eigen::VectorXd t(1999);
    for (int i = 1; i < 2000; ++i) {
        X(i - 1, 0) = 1.0;
        X(i - 1, 1) = y[static_cast<std::size_t>(i - 1)];
        t(i - 1) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd beta = (X.transpose() * X).ldlt().solve(X.transpose() * t);
    CHECK(std::abs(ar.coefficients[1] - beta(1)) <= 0.05);
    CHECK(std::abs(ar.coefficients[1] - 0.8) <= 0.05);
}

TEST_CASE("AR on white noise selects order 0 at the rate AIC theory predicts") {
    // Oracle: for white noise, AIC(p) - AIC(0) is asymptotically 2p - S_p with S_p a sum of p
    // independent chi-square(1) terms, so order 0 wins iff S_p < 2p for every p <= max_p.
    std::mt19937_64 rng(8);
    std::chi_squared_distribution<double> chi(1.0);
    int wins = 0;
    const int walks = 200000;
    for (int w = 0; w < walks; ++w) {
        double s = 0.0;
        bool zero = true;
        for (int p = 1; p <= 10 && zero; ++p) {
            s += chi(rng);
            zero = s < 2.0 * p;
        }
        wins += zero;
    }
    const double oracle = static_cast<double>(wins) / walks;
    CHECK(oracle == doctest::Approx(0.717).epsilon(0.02));

    int zero = 0;
    const int seeds = 100;
    for (int seed = 1; seed <= seeds; ++seed) {
        const auto y = testdata::white_noise(2000, 1000 + static_cast<std::uint64_t>(seed));
        zero += std::get<ARParams>(fit_ar(y, 10).params).order_p == 0;
    }
    // binomial sd with 100 draws is about 0.045
    CHECK(std::abs(zero / double(seeds) - oracle) < 0.135);
}

TEST_CASE("AR prediction iterates on the transformed scale") {
    ForecastModel m;
    m.family = Family::AR;
    ARParams ar;
    ar.order_p = 1;
    ar.coefficients = {0.0, 0.5};
    ar.lambda_transform = {1.0, 0};
    m.params = ar;
    const auto f = predict_ar(m, std::vector<double>{3.0, 8.0}, 3);
    CHECK(f == std::vector<double>{4.0, 2.0, 1.0});
    CHECK_THROWS_AS(predict_ar(m, std::vector<double>{}, 3), ValidationError);

    ARParams zero;
    zero.order_p = 0;
    zero.coefficients = {0.25};
    zero.lambda_transform = {0.5, 0};
    zero.transformed_mean = 1.0;
    m.params = zero;
    const auto c = predict_ar(m, std::vector<double>{}, 4);
    for (double v : c) CHECK(v == c[0]);
    CHECK(c[0] == doctest::Approx(zero.lambda_transform.inverse(1.25)));
}

TEST_CASE("AR rejects constant and short inputs") {
    CHECK_THROWS_AS(fit_ar(std::vector<double>(100, 2.0), 5), DegenerateError);
    CHECK_THROWS_AS(fit_ar(testdata::white_noise(12, 1), 5), ValidationError);
}

TEST_CASE("regression recovers a planted Friday effect exactly") {
    const auto dates = testdata::workdays(300);
    std::vector<double> y;
    for (const auto& d : dates) y.push_back(iso_weekday(d) == 5 ? 10.0 : 0.0);
    FeatureSpec f;
    f.use_day_of_week = true;
    const auto X = build_features(dates, y, f);
    const auto model = fit_regression(X);
    const auto& p = std::get<RegressionParams>(model.params);
    const auto names = X.column_names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        CHECK(p.coefficients(static_cast<Eigen::Index>(j)) == doctest::Approx(names[j] == "s5" ? 10.0 : 0.0).epsilon(1e-9).scale(1.0));
    }
    const auto fitted = predict_regression(model, X.values);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(fitted[i] - y[i]) < 1e-9);
}

TEST_CASE("regression with intercept only is the mean") {
    DesignMatrix X;
    X.columns = {{FeatureColumn::Kind::Intercept, 0}};
    X.values = Eigen::MatrixXd::Ones(5, 1);
    X.target = Eigen::VectorXd::LinSpaced(5, 1.0, 9.0);
    const auto model = fit_regression(X);
    CHECK(std::get<RegressionParams>(model.params).coefficients(0) == doctest::Approx(5.0));
}

TEST_CASE("regression residuals are orthogonal to the design") {
    const auto dates = testdata::workdays(800);
    const auto y = testdata::company_flows(dates, 5);
    const auto X = build_features(dates, y, calendar_spec());
    const auto model = fit_regression(X);
    const auto fitted = predict_regression(model, X.values);
    Eigen::VectorXd r(static_cast<Eigen::Index>(fitted.size()));
    for (std::size_t i = 0; i < fitted.size(); ++i) r(static_cast<Eigen::Index>(i)) = (X.target(static_cast<Eigen::Index>(i)) - fitted[i]) / 1e4;
    CHECK((X.values.transpose() * r).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("collinear design names the dependent column") {
    DesignMatrix X;
    X.columns = {{FeatureColumn::Kind::Intercept, 0}, {FeatureColumn::Kind::DayOfWeek, 2}, {FeatureColumn::Kind::DayOfWeek, 3}};
    X.values.resize(6, 3);
    X.values << 1, 1, 0,
                1, 1, 0,
                1, 1, 0,
                1, 1, 0,
                1, 1, 0,
                1, 1, 0;
    X.target = Eigen::VectorXd::LinSpaced(6, 0.0, 5.0);
    X.values.col(2).setZero();
    X.values(0, 2) = 1.0;
    X.values.col(1) = X.values.col(0);
    try {
        fit_regression(X);
        FAIL("expected a collinearity error");
    } catch (const CollinearityError& e) {
        CHECK(e.column() == "s2");
    }
    const auto relaxed = fit_regression(X, RankPolicy::MinimumNorm);
    CHECK(relaxed.training_summary.rank_deficient);
}

TEST_CASE("k-medoids on two obvious clusters") {
    Eigen::MatrixXd P(4, 1);
    P << 0, 1, 10, 11;
    const auto c = fit_kmedoids(P, 2, 7);
    CHECK(c.cost == doctest::Approx(2.0));
    CHECK(c.assignment[0] == c.assignment[1]);
    CHECK(c.assignment[2] == c.assignment[3]);
    CHECK(c.assignment[0] != c.assignment[2]);

    const auto all = fit_kmedoids(P, 4, 7);
    CHECK(all.cost == 0.0);
    CHECK_THROWS_AS(fit_kmedoids(P, 5, 7), ValidationError);
    CHECK_THROWS_AS(fit_kmedoids(P, 0, 7), ValidationError);
}

TEST_CASE("k-medoids ignores duplication of the data set") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    Eigen::MatrixXd P(30, 2);
    for (Eigen::Index i = 0; i < P.rows(); ++i) P.row(i) << z(rng) + (i % 3) * 4.0, z(rng);
    Eigen::MatrixXd D(60, 2);
    D << P, P;
    const auto a = fit_kmedoids(P, 3, 11);
    const auto b = fit_kmedoids(D, 3, 11);
    auto values = [](const Eigen::MatrixXd& M, const Clustering& c) {
        std::vector<std::pair<double, double>> v;
        for (auto m : c.medoids) v.emplace_back(M(static_cast<Eigen::Index>(m), 0), M(static_cast<Eigen::Index>(m), 1));
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(values(P, a) == values(D, b));
    CHECK(b.cost == doctest::Approx(2.0 * a.cost));
}

TEST_CASE("k-medoids invariants: nearest assignment, non-increasing cost, brute-force optimum") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 5 + trial % 4;
        Eigen::MatrixXd P(n, 2);
        for (Eigen::Index i = 0; i < n; ++i) P.row(i) << u(rng), u(rng);
        const std::size_t K = 1 + static_cast<std::size_t>(trial % 3);
        const auto c = fit_kmedoids(P, K, static_cast<std::uint64_t>(trial));
        REQUIRE(c.medoids.size() == K);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double own = (P.row(i) - P.row(static_cast<Eigen::Index>(c.medoids[c.assignment[static_cast<std::size_t>(i)]]))).norm();
            for (auto m : c.medoids) CHECK(own <= (P.row(i) - P.row(static_cast<Eigen::Index>(m))).norm() + 1e-12);
        }
        for (std::size_t s = 1; s < c.cost_history.size(); ++s) CHECK(c.cost_history[s] <= c.cost_history[s - 1] + 1e-12);
        CHECK(c.cost == doctest::Approx(brute_force_cost(P, K)).epsilon(1e-12));
    }
}

TEST_CASE("RBF activation") {
    CHECK(rbf_activation(0.0, 10.0, 3.0) == 1.0);
    CHECK(rbf_activation(std::sqrt(10.0 * 3.0), 10.0, 3.0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("RBF fit on calendar features") {
    const auto dates = testdata::workdays(600);
    const auto y = testdata::company_flows(dates, 21);
    FeatureSpec f = calendar_spec();
    f.include_intercept = false;
    const auto X = build_features(dates, y, f);
    const auto model = fit_rbf(X, 10, 10, 99);
    const auto& p = std::get<RBFParams>(model.params);
    CHECK(p.medoids.rows() == 10);
    CHECK(p.weights.size() == 11);
    // every medoid is a training row (no lag columns, so no input transform)
    for (Eigen::Index k = 0; k < p.medoids.rows(); ++k) {
        bool found = false;
        for (Eigen::Index i = 0; i < X.values.rows() && !found; ++i) found = X.values.row(i) == p.medoids.row(k);
        CHECK(found);
    }
    for (double r : p.rho) CHECK(r > 0.0);
    const Eigen::MatrixXd A = rbf_activations(p, X.values);
    CHECK(A.minCoeff() > 0.0);
    CHECK(A.maxCoeff() <= 1.0);
    const auto pred = predict_rbf(model, X.values);
    CHECK(pred.size() == X.rows());
    for (double v : pred) CHECK(std::isfinite(v));

    const auto again = fit_rbf(X, 10, 10, 99);
    CHECK(predict_rbf(again, X.values) == pred);

    Eigen::MatrixXd wrong(1, 3);
    wrong.setZero();
    CHECK_THROWS_AS(predict_rbf(model, wrong), ValidationError);
}

TEST_CASE("RBF query at a medoid activates its own slot and zero weights give a constant") {
    const auto dates = testdata::workdays(300);
    const auto y = testdata::company_flows(dates, 8);
    FeatureSpec f = calendar_spec();
    f.include_intercept = false;
    const auto X = build_features(dates, y, f);
    auto model = fit_rbf(X, 6, 10, 3);
    auto& p = std::get<RBFParams>(model.params);
    const Eigen::MatrixXd A = rbf_activations(p, p.medoids);
    for (Eigen::Index k = 0; k < A.rows(); ++k) CHECK(A(k, k) == 1.0);

    p.weights.tail(p.weights.size() - 1).setZero();
    const auto pred = predict_rbf(model, X.values);
    const double expected =
        p.lambda_transform.inverse(std::clamp(p.standardizer.restore(p.weights(0)), p.z_min, p.z_max));
    for (double v : pred) CHECK(v == doctest::Approx(expected));
}

TEST_CASE("RBF with many centres fits better than the intercept alone") {
    const auto dates = testdata::workdays(40);
    const auto y = testdata::white_noise(40, 6, 100.0);
    FeatureSpec f;
    f.lag_count = 2;
    f.include_intercept = false;
    const auto X = build_features(dates, y, f);
    const auto model = fit_rbf(X, X.rows() - 1, 1, 4);
    const auto pred = predict_rbf(model, X.values);
    double rss = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) rss += std::pow(pred[i] - X.target(static_cast<Eigen::Index>(i)), 2);
    std::vector<double> t(X.target.data(), X.target.data() + X.target.size());
    CHECK(rss < stats::sum_squares_about(t, stats::mean(t)));
}

TEST_CASE("forest with one forced leaf") {
    const auto dates = testdata::workdays(100);
    const auto y = testdata::white_noise(100, 2);
    FeatureSpec f = calendar_spec();
    f.include_intercept = false;
    const auto X = build_features(dates, y, f);
    const auto model = fit_random_forest(X, 1, 3, 100, 1);
    const auto& p = std::get<ForestParams>(model.params);
    REQUIRE(p.trees.size() == 1);
    CHECK(p.trees[0].nodes.size() == 1);
    CHECK(p.trees[0].nodes[0].samples == 100);
    const auto pred = predict_forest(model, X.values);
    for (double v : pred) CHECK(v == p.trees[0].nodes[0].value);
    CHECK_THROWS_AS(fit_random_forest(X, 1, X.cols() + 1, 5, 1), ValidationError);
}

TEST_CASE("forest on a constant target") {
    const auto dates = testdata::workdays(80);
    const std::vector<double> y(80, 5.0);
    FeatureSpec f = calendar_spec();
    f.include_intercept = false;
    const auto X = build_features(dates, y, f);
    const auto pred = predict_forest(fit_random_forest(X, 10, 5, 2, 4), X.values);
    for (double v : pred) CHECK(v == 5.0);
}

TEST_CASE("forest learns a planted Wednesday rule") {
    const auto dates = testdata::workdays(500);
    std::vector<double> y;
    for (const auto& d : dates) y.push_back(iso_weekday(d) == 3 ? 100.0 : 0.0);
    FeatureSpec f;
    f.use_day_of_week = true;
    f.include_intercept = false;
    const auto X = build_features(dates, y, f);
    DesignMatrix train = X;
    train.values = X.values.topRows(400);
    train.target = X.target.head(400);
    const auto model = fit_random_forest(train, 50, 2, 1, 77);
    const auto pred = predict_forest(model, X.values.bottomRows(100));
    for (std::size_t i = 0; i < pred.size(); ++i) CHECK(std::abs(pred[i] - y[400 + i]) <= 1.0);
}

TEST_CASE("forest ensemble lies within the per-tree range and is deterministic") {
    const auto dates = testdata::workdays(400);
    const auto y = testdata::company_flows(dates, 31);
    FeatureSpec f = calendar_spec();
    f.include_intercept = false;
    const auto X = build_features(dates, y, f);
    const auto model = fit_random_forest(X, 7, 11, 20, 5);
    const auto& p = std::get<ForestParams>(model.params);
    const auto pred = predict_forest(model, X.values);
    for (Eigen::Index i = 0; i < X.values.rows(); ++i) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& t : p.trees) {
            const double v = t.predict(X.values.row(i));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(pred[static_cast<std::size_t>(i)] >= lo - 1e-9);
        CHECK(pred[static_cast<std::size_t>(i)] <= hi + 1e-9);
    }
    for (const auto& t : p.trees) {
        for (const auto& n : t.nodes) {
            CHECK(n.samples >= 1);
            if (!n.is_leaf()) CHECK(n.samples > 20);
        }
    }
    CHECK(predict_forest(fit_random_forest(X, 7, 11, 20, 5), X.values) == pred);

    ForecastModel twin = model;
    auto& tp = std::get<ForestParams>(twin.params);
    tp.trees = {p.trees[0], p.trees[0]};
    tp.tree_count = 2;
    const auto twin_pred = predict_forest(twin, X.values);
    for (Eigen::Index i = 0; i < X.values.rows(); ++i) CHECK(twin_pred[static_cast<std::size_t>(i)] == p.trees[0].predict(X.values.row(i)));
}

TEST_CASE("every family returns finite forecasts of the requested length") {
    const auto dates = testdata::workdays(700);
    const auto y = testdata::company_flows(dates, 12);
    const std::size_t n = 600;
    const std::span<const Date> future(dates.data() + n, 100);
    for (auto family : {Family::Mean, Family::AR, Family::Regression, Family::RBF, Family::RandomForest}) {
        for (std::size_t lags : {std::size_t{0}, std::size_t{3}}) {
            ModelSpec spec;
            spec.family = family;
            spec.features = calendar_spec();
            spec.features.lag_count = lags;
            spec.forest_trees = 5;
            spec.seed = 9;
            const auto model = fit_model(spec, std::span(dates).first(n), std::span(y).first(n));
            const auto f = forecast(model, std::span(y).first(n), future);
            CHECK(f.size() == 100);
            for (double v : f) CHECK(std::isfinite(v));
            const auto again = forecast(fit_model(spec, std::span(dates).first(n), std::span(y).first(n)),
                                        std::span(y).first(n), future);
            CHECK(again == f);
        }
    }
}

TEST_CASE("model spec labels") {
    ModelSpec s;
    s.family = Family::RandomForest;
    s.features = calendar_spec();
    CHECK(s.inputs_label() == "d2..d31 s2..s5");
    CHECK(s.parameters_label() == "a=20 b=11 c=50");
    CHECK(parse_family("rbf") == Family::RBF);
    CHECK_THROWS_AS(parse_family("svm"), ValidationError);
}
