#include "cashcast/calendar.hpp"
#include "cashcast/error.hpp"
#include "cashcast/stats.hpp"
#include "cashcast/timeseries.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace cashcast;
using testdata::ymd;

TEST_CASE("calendar helpers") {
    CHECK(format_date(parse_date("2017-03-15")) == "2017-03-15");
    CHECK(iso_weekday(parse_date("2017-03-15")) == 3);
    CHECK_FALSE(is_workday(parse_date("2017-03-18")));
    CHECK(format_date(next_workday(parse_date("2017-03-17"))) == "2017-03-20");
    CHECK(iso_week(parse_date("2021-01-01")) == 53);
    CHECK(iso_week(parse_date("2021-01-04")) == 1);
    CHECK(iso_week(parse_date("2015-12-31")) == 53);
    CHECK_THROWS_AS(parse_date("2017-3-15"), ValidationError);
    CHECK_THROWS_AS(parse_date("2017-02-30"), ValidationError);
}

TEST_CASE("parse_series reads rows in date order") {
    std::istringstream in("date,amount\n2017-03-15,300.0\n2017-03-14,-120.5\n");
    const auto s = parse_series(in);
    REQUIRE(s.size() == 2);
    CHECK(s.values()[0] == -120.5);
    CHECK(s.values()[1] == 300.0);
    CHECK(s.variant() == Variant::Real);
}

TEST_CASE("parse_series errors") {
    std::istringstream dup("2017-03-15,300.0\n2017-03-15,300.0\n");
    CHECK_THROWS_AS(parse_series(dup), ValidationError);

    std::istringstream bad("date,amount\n2017-03-14,1\n2017-03-15,abc\n");
    try {
        parse_series(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    std::istringstream empty("");
    CHECK_THROWS_AS(parse_series(empty), ValidationError);

    std::istringstream weekend("2017-03-18,5\n2017-03-20,5\n");
    CHECK_THROWS_AS(parse_series(weekend), ValidationError);
}

TEST_CASE("write_series and parse_series round trip exactly") {
    const auto values = testdata::white_noise(300, 11, 1234.5);
    const auto s = testdata::series(values);
    std::stringstream io;
    write_series(s, io);
    const auto back = parse_series(io);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back.values()[i] == s.values()[i]);
        CHECK(back.dates()[i] == s.dates()[i]);
    }
}

TEST_CASE("a file with 2717 rows loads 2717 observations") {
    const auto dates = testdata::workdays(2717);
    std::ostringstream os;
    for (const auto& d : dates) os << format_date(d) << ",1.5\n";
    std::istringstream in(os.str());
    CHECK(parse_series(in).size() == 2717);
}

TEST_CASE("derive_variant caps and doubles against the input sigma") {
    // 60 followed by 35 zeros has sample standard deviation exactly 10.
    std::vector<double> v(36, 0.0);
    v[0] = 60.0;
    const auto s = testdata::series(v);
    CHECK(stats::stddev(s.values()) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(derive_variant(s, Variant::Real).values()[0] == doctest::Approx(50.0));
    CHECK(derive_variant(s, Variant::Stable).values()[0] == doctest::Approx(30.0));
    CHECK(derive_variant(s, Variant::Unstable).values()[0] == 120.0);

    std::vector<double> w(16, 0.0);
    w[3] = 35.0;  // sd 8.75, so 35 exceeds 3 sd
    CHECK(derive_variant(testdata::series(w), Variant::Unstable).values()[3] == 70.0);
}

TEST_CASE("derive_variant properties") {
    auto values = testdata::white_noise(500, 3, 10.0);
    values[10] = 400.0;
    values[20] = -300.0;
    const auto s = testdata::series(values);
    const double sd = stats::stddev(s.values());

    const auto real = derive_variant(s, Variant::Real);
    const auto twice = derive_variant(real, Variant::Real);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(twice.values()[i] == real.values()[i]);

    const auto stable = derive_variant(s, Variant::Stable);
    CHECK(stable.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(std::abs(stable.values()[i]) <= 3.0 * sd * (1 + 1e-15));
        CHECK(stable.dates()[i] == s.dates()[i]);
    }
}

TEST_CASE("random shock replaces round(5% N) points inside the input range") {
    const auto values = testdata::white_noise(100, 5);
    const auto s = testdata::series(values);
    const auto lo = *std::min_element(values.begin(), values.end());
    const auto hi = *std::max_element(values.begin(), values.end());
    const auto a = derive_variant(s, Variant::RandomShock, 42);
    const auto b = derive_variant(s, Variant::RandomShock, 42);
    const auto c = derive_variant(s, Variant::RandomShock, 43);
    int changed = 0;
    bool differs = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (a.values()[i] != values[i]) {
            ++changed;
            CHECK(a.values()[i] >= lo);
            CHECK(a.values()[i] <= hi);
        }
        CHECK(a.values()[i] == b.values()[i]);
        differs = differs || a.values()[i] != c.values()[i];
    }
    CHECK(changed == 5);
    CHECK(differs);
    CHECK(a.applied_seed() == 42);
    CHECK(a.variant() == Variant::RandomShock);
    CHECK_THROWS_AS(derive_variant(s, Variant::RandomShock), ValidationError);
}

TEST_CASE("summarize") {
    const auto s = summarize(std::vector<double>{-1, 1, -1, 1});
    CHECK(s.mean == 0.0);
    CHECK(s.stddev == doctest::Approx(1.1547005383792515));
    CHECK_THROWS_AS(summarize(std::vector<double>{5, 5, 5, 5}), DegenerateError);
    CHECK_THROWS_AS(summarize(std::vector<double>{1, 2, 3}), ValidationError);

    const auto normal = summarize(testdata::white_noise(100000, 2024));
    CHECK(std::abs(normal.excess_kurtosis) < 0.1);
    CHECK(summary_csv_row("ds", s).rfind("ds,4,0,", 0) == 0);
}

TEST_CASE("build_features calendar dummies") {
    const auto dates = testdata::workdays(60, ymd(2017, 3, 1));
    std::vector<double> values(dates.size(), 1.0);
    FeatureSpec spec;
    spec.use_day_of_month = true;
    spec.use_day_of_week = true;
    const auto X = build_features(dates, values, spec);
    const auto names = X.column_names();
    auto row = std::find(X.row_dates.begin(), X.row_dates.end(), ymd(2017, 3, 15)) - X.row_dates.begin();
    for (std::size_t j = 0; j < X.cols(); ++j) {
        const double v = X.values(row, static_cast<Eigen::Index>(j));
        const bool expected = names[j] == "intercept" || names[j] == "s3" || names[j] == "d15";
        CHECK_MESSAGE(v == (expected ? 1.0 : 0.0), names[j]);
    }
    CHECK(X.intercept_included());
}

TEST_CASE("day-of-month plus day-of-week gives 35 coefficients") {
    const auto dates = testdata::workdays(400);
    std::vector<double> values(dates.size(), 0.0);
    FeatureSpec spec;
    spec.use_day_of_month = true;
    spec.use_day_of_week = true;
    CHECK(build_features(dates, values, spec).cols() == 35);
}

TEST_CASE("build_features lag embedding") {
    const auto dates = testdata::workdays(4);
    const std::vector<double> values{1, 2, 3, 4};
    FeatureSpec spec;
    spec.lag_count = 2;
    spec.include_intercept = false;
    const auto X = build_features(dates, values, spec);
    REQUIRE(X.rows() == 2);
    REQUIRE(X.cols() == 2);
    CHECK(X.values(0, 0) == 2);
    CHECK(X.values(0, 1) == 1);
    CHECK(X.values(1, 0) == 3);
    CHECK(X.values(1, 1) == 2);
    CHECK(X.target(0) == 3);
    CHECK(X.target(1) == 4);

    FeatureSpec none;
    CHECK_THROWS_AS(build_features(dates, values, none), ValidationError);
    FeatureSpec too_many;
    too_many.lag_count = 4;
    CHECK_THROWS_AS(build_features(dates, values, too_many), ValidationError);
}

TEST_CASE("lag columns match direct indexing and dummy groups are one-hot") {
    const auto dates = testdata::workdays(700);
    const auto values = testdata::white_noise(700, 9);
    FeatureSpec spec{true, true, true, true, 5};
    const auto X = build_features(dates, values, spec);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const std::size_t t = r + 5;
        int groups[4] = {0, 0, 0, 0};
        for (std::size_t j = 0; j < X.cols(); ++j) {
            const auto& c = X.columns[j];
            const double v = X.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j));
            switch (c.kind) {
                case FeatureColumn::Kind::Lag: CHECK(v == values[t - c.level]); break;
                case FeatureColumn::Kind::DayOfMonth: groups[0] += v == 1.0; CHECK((v == 0.0 || v == 1.0)); break;
                case FeatureColumn::Kind::DayOfWeek: groups[1] += v == 1.0; CHECK((v == 0.0 || v == 1.0)); break;
                case FeatureColumn::Kind::Month: groups[2] += v == 1.0; CHECK((v == 0.0 || v == 1.0)); break;
                case FeatureColumn::Kind::Week: groups[3] += v == 1.0; CHECK((v == 0.0 || v == 1.0)); break;
                default: break;
            }
        }
        for (int g : groups) CHECK(g <= 1);
        CHECK(X.target(static_cast<Eigen::Index>(r)) == values[t]);
    }
    for (Eigen::Index j = 0; j < X.values.cols(); ++j) CHECK((X.values.col(j).array() != 0.0).any());
}

TEST_CASE("weekday reference level is configurable") {
    const auto dates = testdata::workdays(30);
    std::vector<double> values(30, 1.0);
    FeatureSpec spec;
    spec.use_day_of_week = true;
    spec.weekday_reference = 5;
    const auto names = build_features(dates, values, spec).column_names();
    CHECK(std::find(names.begin(), names.end(), "s1") != names.end());
    CHECK(std::find(names.begin(), names.end(), "s5") == names.end());
}

TEST_CASE("stats helpers") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{2, 1, 4, 3, 5};
    CHECK(stats::spearman(x, x) == doctest::Approx(1.0));
    CHECK(stats::spearman(x, y) == doctest::Approx(0.8));
    const auto r = stats::ranks(std::vector<double>{3, 1, 3});
    CHECK(r[0] == 2.5);
    CHECK(r[1] == 1.0);
    CHECK(stats::derive_seed(7, 1) == stats::derive_seed(7, 1));
    CHECK(stats::derive_seed(7, 1) != stats::derive_seed(7, 2));
}
