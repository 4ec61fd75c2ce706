#include "cashcast/evaluation.hpp"

#include "cashcast/error.hpp"
#include "cashcast/numfmt.hpp"
#include "cashcast/stats.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace cashcast {

double error_ratio(std::span<const double> forecasts, std::span<const double> actuals, double train_mean) {
    if (forecasts.size() != actuals.size() || forecasts.empty()) {
        throw ValidationError("error_ratio needs equally sized, nonempty vectors");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        num += (forecasts[i] - actuals[i]) * (forecasts[i] - actuals[i]);
        den += (train_mean - actuals[i]) * (train_mean - actuals[i]);
    }
    if (den == 0.0) throw DegenerateError("test values all equal the training mean");
    return num / den;
}

std::string_view to_string(OriginMethod method) {
    return method == OriginMethod::FixedOrigin ? "fixed_origin" : "rolling_origin";
}

std::vector<std::size_t> cv_origins(std::size_t T, const CVOptions& o) {
    if (o.g == 0 || o.H == 0 || o.stride == 0) throw ValidationError("g, H and stride must be positive");
    if (T < o.g + o.H + 1) {
        throw ValidationError("cross validation with g=" + std::to_string(o.g) + " and H=" + std::to_string(o.H) +
                              " needs T >= " + std::to_string(o.g + o.H + 1) + " observations, got " +
                              std::to_string(T));
    }
    const std::size_t last = o.full_windows_only ? T - o.g - o.H + 1 : T - o.g;
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i <= last; i += o.stride) out.push_back(i);
    return out;
}

EvaluationReport cross_validate(std::span<const double> values, const CVOptions& options,
                                const ForecastProvider& provider) {
    const std::size_t T = values.size();
    const auto origins = cv_origins(T, options);
    const std::size_t H = options.H;
    std::vector<double> num(H, 0.0), den(H, 0.0);
    std::vector<std::size_t> folds(H, 0);
    for (std::size_t i : origins) {
        const std::size_t train_end = options.g + i - 1;
        const std::size_t train_begin = options.method == OriginMethod::FixedOrigin ? 0 : i - 1;
        const std::size_t count = std::min(H, T - train_end);
        const double ybar = stats::mean(values.subspan(train_begin, train_end - train_begin));
        const auto yhat = provider(train_begin, train_end, count);
        if (yhat.size() != count) throw ValidationError("forecast provider returned the wrong number of values");
        for (std::size_t h = 0; h < count; ++h) {
            const double y = values[train_end + h];
            num[h] += (yhat[h] - y) * (yhat[h] - y);
            den[h] += (ybar - y) * (ybar - y);
            ++folds[h];
        }
    }
    EvaluationReport report;
    report.method = options.method;
    report.g = options.g;
    report.H = H;
    report.folds_per_horizon = folds;
    for (std::size_t h = 0; h < H; ++h) {
        if (den[h] == 0.0) {
            throw DegenerateError("horizon " + std::to_string(h + 1) + ": test values equal the training means");
        }
        report.per_horizon_epsilon.push_back(num[h] / den[h]);
        report.fold_count += folds[h];
    }
    report.mean_epsilon = stats::mean(report.per_horizon_epsilon);
    report.epsilon_stddev = H > 1 ? stats::stddev(report.per_horizon_epsilon) : 0.0;
    return report;
}

ForecastProvider model_provider(const CashFlowSeries& series, const ModelSpec& spec) {
    return [&series, spec](std::size_t begin, std::size_t end, std::size_t count) {
        const auto dates = series.dates();
        const auto values = series.values();
        const auto model = fit_model(spec, dates.subspan(begin, end - begin), values.subspan(begin, end - begin));
        return forecast(model, values.subspan(begin, end - begin), dates.subspan(end, count));
    };
}

EvaluationReport cross_validate(const CashFlowSeries& series, const ModelSpec& spec, const CVOptions& options) {
    return cross_validate(series.values(), options, model_provider(series, spec));
}

void write_report_csv(const EvaluationReport& report, std::ostream& out) {
    out << "h,epsilon\n";
    for (std::size_t h = 0; h < report.per_horizon_epsilon.size(); ++h) {
        out << h + 1 << ',' << fmt_num(report.per_horizon_epsilon[h]) << '\n';
    }
    out << "mean," << fmt_num(report.mean_epsilon) << '\n';
}

SearchResult parameter_search(const CashFlowSeries& series, std::span<const ModelSpec> candidates,
                              double train_fraction) {
    if (candidates.empty()) throw ValidationError("parameter search needs at least one candidate");
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw ValidationError("train fraction must lie in (0, 1]");
    const auto slice = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(series.size())));
    const auto fit_n = static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(slice)));
    if (fit_n < 2 || slice - fit_n < 2) throw ValidationError("series too short for parameter search");
    const auto dates = series.dates();
    const auto values = series.values();
    const auto valid = values.subspan(fit_n, slice - fit_n);
    const double tss = stats::sum_squares_about(valid, stats::mean(valid));
    if (tss == 0.0) throw DegenerateError("validation slice is constant");

    SearchResult result;
    result.r_squared.assign(candidates.size(), std::numeric_limits<double>::quiet_NaN());
    bool any = false;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        try {
            const auto model = fit_model(candidates[c], dates.first(fit_n), values.first(fit_n));
            const auto yhat = forecast(model, values.first(fit_n), dates.subspan(fit_n, slice - fit_n));
            double rss = 0.0;
            for (std::size_t t = 0; t < valid.size(); ++t) rss += (yhat[t] - valid[t]) * (yhat[t] - valid[t]);
            const double r2 = 1.0 - rss / tss;
            if (!std::isfinite(r2)) continue;
            result.r_squared[c] = r2;
            const double best = any ? result.r_squared[result.chosen] : -std::numeric_limits<double>::infinity();
            const bool tie = any && std::abs(r2 - best) <= 1e-12 * std::max(1.0, std::abs(best));
            if (!any || (!tie && r2 > best) ||
                (tie && candidates[c].complexity() < candidates[result.chosen].complexity())) {
                result.chosen = c;
                any = true;
            }
        } catch (const DegenerateError&) {
        } catch (const CollinearityError&) {
        }
    }
    if (!any) throw DegenerateError("every candidate in the parameter search failed to fit");
    result.spec = candidates[result.chosen];
    return result;
}

}  // namespace cashcast
