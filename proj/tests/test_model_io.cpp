#include "cashcast/error.hpp"
#include "cashcast/models/forecaster.hpp"
#include "cashcast/models/model_io.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <filesystem>

using namespace cashcast;

TEST_CASE("every family survives a save and reload with identical forecasts") {
    const auto dates = testdata::workdays(500);
    const auto y = testdata::company_flows(dates, 44);
    const std::size_t n = 400;
    const std::span<const Date> future(dates.data() + n, 50);
    for (auto family : {Family::Mean, Family::AR, Family::Regression, Family::RBF, Family::RandomForest}) {
        ModelSpec spec;
        spec.family = family;
        spec.features.use_day_of_month = true;
        spec.features.use_day_of_week = true;
        spec.features.lag_count = family == Family::RBF ? 2 : 0;
        spec.forest_trees = 4;
        spec.seed = 3;
        const auto model = fit_model(spec, std::span(dates).first(n), std::span(y).first(n));
        const auto text = serialize_model(model);
        const auto back = deserialize_model(text);
        CHECK(back.family == family);
        CHECK(back.training_summary.n_train == model.training_summary.n_train);
        CHECK(forecast(back, std::span(y).first(n), future) == forecast(model, std::span(y).first(n), future));
        CHECK(serialize_model(back) == text);
    }
}

TEST_CASE("files round trip and bad documents are rejected") {
    const auto model = fit_model(ModelSpec{}, testdata::workdays(20), testdata::white_noise(20, 1));
    const auto path = std::filesystem::temp_directory_path() / "cashcast_model_io_test.json";
    save_model(model, path);
    CHECK(serialize_model(load_model(path)) == serialize_model(model));
    std::filesystem::remove(path);

    CHECK_THROWS_AS(deserialize_model("{"), ValidationError);
    CHECK_THROWS_AS(deserialize_model(R"({"format":"cashcast-model","version":99})"), ValidationError);
    CHECK_THROWS_AS(deserialize_model(R"({"format":"other","version":1})"), ValidationError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), IoError);
}
