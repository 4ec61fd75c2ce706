#include "cashcast/models/forecaster.hpp"

#include "cashcast/error.hpp"
#include "cashcast/models/ar.hpp"
#include "cashcast/models/forest.hpp"
#include "cashcast/models/mean.hpp"
#include "cashcast/models/rbf.hpp"
#include "cashcast/models/regression.hpp"

#include <sstream>

namespace cashcast {

std::string ModelSpec::inputs_label() const {
    if (family == Family::Mean) return "none";
    if (family == Family::AR) return "p past values";
    std::vector<std::string> parts;
    const auto& f = features;
    const std::string weekday_range = f.weekday_reference == 1 ? "s2..s5"
                                      : f.weekday_reference == 5 ? "s1..s4"
                                                                 : "s1..s5\\s" + std::to_string(f.weekday_reference);
    if (f.use_day_of_month) parts.push_back("d2..d31");
    if (f.use_day_of_week) parts.push_back(weekday_range);
    if (f.use_month) parts.push_back("m2..m12");
    if (f.use_week) parts.push_back("w2..w53");
    if (f.lag_count > 0) parts.push_back(std::to_string(f.lag_count) + " past values");
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ' ';
        out += parts[i];
    }
    return out.empty() ? "none" : out;
}

std::string ModelSpec::parameters_label() const {
    std::ostringstream os;
    switch (family) {
        case Family::Mean: os << "mean"; break;
        case Family::AR:
            os << "max_p=" << (ar_max_p ? std::to_string(*ar_max_p) : std::string("auto"));
            break;
        case Family::Regression: os << "ols"; break;
        case Family::RBF: os << "K=" << rbf_clusters << " alpha=" << rbf_alpha; break;
        case Family::RandomForest:
            os << "a=" << forest_trees << " b=" << forest_mtry << " c=" << forest_node_size;
            break;
    }
    return os.str();
}

std::size_t ModelSpec::complexity() const {
    switch (family) {
        case Family::Mean: return 1;
        case Family::AR: return ar_max_p.value_or(32) + 1;
        case Family::Regression: return candidate_columns(features).size();
        case Family::RBF: return rbf_clusters + 1;
        case Family::RandomForest: return forest_trees * forest_mtry;
    }
    return 0;
}

ForecastModel fit_model(const ModelSpec& spec, std::span<const Date> dates, std::span<const double> values) {
    if (dates.size() != values.size()) {
        throw ValidationError("training dates and values differ in length");
    }
    const std::vector<double> grid = spec.lambda_grid.empty() ? default_lambda_grid() : spec.lambda_grid;
    switch (spec.family) {
        case Family::Mean:
            return fit_mean(values);
        case Family::AR: {
            const std::size_t max_p = spec.ar_max_p.value_or(default_max_order(values.size()));
            return fit_ar(values, max_p, grid);
        }
        case Family::Regression: {
            FeatureSpec features = spec.features;
            features.include_intercept = true;
            return fit_regression(build_features(dates, values, features), spec.rank_policy);
        }
        case Family::RBF: {
            FeatureSpec features = spec.features;
            features.include_intercept = false;
            return fit_rbf(build_features(dates, values, features), spec.rbf_clusters, spec.rbf_alpha,
                           spec.seed, grid);
        }
        case Family::RandomForest: {
            FeatureSpec features = spec.features;
            features.include_intercept = false;
            return fit_random_forest(build_features(dates, values, features), spec.forest_trees,
                                     spec.forest_mtry, spec.forest_node_size, spec.seed);
        }
    }
    throw ValidationError("unknown model family");
}

namespace {

const std::vector<FeatureColumn>& columns_of(const ForecastModel& model) {
    switch (model.family) {
        case Family::Regression: return std::get<RegressionParams>(model.params).columns;
        case Family::RBF: return std::get<RBFParams>(model.params).columns;
        case Family::RandomForest: return std::get<ForestParams>(model.params).columns;
        default: break;
    }
    throw ValidationError("model has no feature columns");
}

std::vector<double> predict_rows(const ForecastModel& model, const Eigen::MatrixXd& rows) {
    switch (model.family) {
        case Family::Regression: return predict_regression(model, rows);
        case Family::RBF: return predict_rbf(model, rows);
        case Family::RandomForest: return predict_forest(model, rows);
        default: break;
    }
    throw ValidationError("model does not predict from feature rows");
}

}  // namespace

std::vector<double> forecast(const ForecastModel& model, std::span<const double> history,
                             std::span<const Date> future_dates) {
    const std::size_t horizon = future_dates.size();
    switch (model.family) {
        case Family::Mean: return predict_mean(model, horizon);
        case Family::AR: return predict_ar(model, history, horizon);
        default: break;
    }
    const auto& columns = columns_of(model);
    const std::size_t p = max_lag(columns);
    if (history.size() < p) {
        throw ValidationError("forecast needs " + std::to_string(p) + " observations of history");
    }
    if (p == 0) {
        Eigen::MatrixXd rows(static_cast<Eigen::Index>(horizon), static_cast<Eigen::Index>(columns.size()));
        for (std::size_t h = 0; h < horizon; ++h) {
            rows.row(static_cast<Eigen::Index>(h)) = feature_row(columns, future_dates[h], {});
        }
        return predict_rows(model, rows);
    }
    std::vector<double> buffer(history.end() - static_cast<std::ptrdiff_t>(p), history.end());
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const Eigen::MatrixXd row = feature_row(columns, future_dates[h], buffer);
        const double next = predict_rows(model, row).front();
        out.push_back(next);
        buffer.erase(buffer.begin());
        buffer.push_back(next);
    }
    return out;
}

}  // namespace cashcast
