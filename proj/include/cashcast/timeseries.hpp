#pragma once

#include "cashcast/calendar.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cashcast {

enum class Variant { Real, Stable, Unstable, RandomShock };

std::string_view to_string(Variant variant);
/// Accepts "real", "stable", "unstable", "random_shock". Throws ValidationError.
Variant parse_variant(std::string_view text);

struct Observation {
    Date date;
    double amount;
};

/// Daily net cash flows on workdays, strictly increasing in date.
class CashFlowSeries {
public:
    /// Validates ordering, uniqueness, workday-only dates and length >= 2.
    explicit CashFlowSeries(std::vector<Observation> observations, Variant variant = Variant::Real,
                            std::optional<std::uint64_t> applied_seed = std::nullopt);
    CashFlowSeries(std::vector<Date> dates, std::vector<double> values,
                   Variant variant = Variant::Real,
                   std::optional<std::uint64_t> applied_seed = std::nullopt);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const Date> dates() const noexcept { return dates_; }
    Observation operator[](std::size_t i) const { return {dates_[i], values_[i]}; }

    Variant variant() const noexcept { return variant_; }
    std::optional<std::uint64_t> applied_seed() const noexcept { return applied_seed_; }
    /// True when the values are the output of derive_variant rather than raw input.
    bool derived() const noexcept { return derived_; }

private:
    void validate() const;

    std::vector<Date> dates_;
    std::vector<double> values_;
    Variant variant_;
    std::optional<std::uint64_t> applied_seed_;
    bool derived_ = false;

    friend CashFlowSeries derive_variant(const CashFlowSeries&, Variant, std::optional<std::uint64_t>);
};

/// Reads `date,amount` rows; header line optional, lines starting with # skipped. Output is sorted by date.
CashFlowSeries load_series(const std::filesystem::path& path);
CashFlowSeries parse_series(std::istream& in);
void write_series(const CashFlowSeries& series, std::ostream& out);

/// Outlier treatment and random shocks applied to a whole series.
/// Real caps |y| > 5 sd at 5 sd, Stable caps at 3 sd, Unstable doubles values beyond 3 sd,
/// RandomShock overwrites round(5% N) distinct points with Uniform(min, max) draws.
/// A series already derived with the same variant (and seed) is returned unchanged.
CashFlowSeries derive_variant(const CashFlowSeries& series, Variant variant,
                              std::optional<std::uint64_t> seed = std::nullopt);

struct SeriesSummary {
    std::size_t length;
    double mean;
    double stddev;
    double excess_kurtosis;
};

SeriesSummary summarize(std::span<const double> values);
inline SeriesSummary summarize(const CashFlowSeries& series) { return summarize(series.values()); }
/// One CSV row `dataset,length,mean,stddev,kurtosis`.
std::string summary_csv_row(std::string_view dataset, const SeriesSummary& summary);

// ---------------------------------------------------------------------------
// Explanatory variables

struct FeatureSpec {
    bool use_day_of_month = false;
    bool use_day_of_week = false;
    bool use_month = false;
    bool use_week = false;
    std::size_t lag_count = 0;
    /// ISO weekday (1 = Monday .. 5 = Friday) whose dummy is dropped.
    unsigned weekday_reference = 1;
    bool include_intercept = true;

    bool selects_anything() const noexcept {
        return use_day_of_month || use_day_of_week || use_month || use_week || lag_count > 0;
    }
    bool operator==(const FeatureSpec&) const = default;
};

struct FeatureColumn {
    enum class Kind { Intercept, DayOfMonth, DayOfWeek, Month, Week, Lag };

    Kind kind;
    unsigned level = 0;

    /// intercept, d2..d31, s1..s5, m2..m12, w2..w53, lag1..lagP
    std::string name() const;
    bool operator==(const FeatureColumn&) const = default;
};

FeatureColumn parse_feature_column(std::string_view name);

/// All columns a spec can produce, before empty dummies are dropped.
std::vector<FeatureColumn> candidate_columns(const FeatureSpec& spec);

/// Value of one column at `date`. `history` holds the observations strictly before
/// `date`, most recent last; lag k reads history[size - k].
double feature_value(const FeatureColumn& column, const Date& date, std::span<const double> history);

struct DesignMatrix {
    std::vector<FeatureColumn> columns;
    Eigen::MatrixXd values;   // rows x columns
    Eigen::VectorXd target;
    std::vector<Date> row_dates;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
    std::size_t cols() const noexcept { return columns.size(); }
    bool intercept_included() const noexcept;
    std::vector<std::string> column_names() const;
};

std::size_t max_lag(std::span<const FeatureColumn> columns);

/// Builds one row per time t with t > lag_count. Dummy columns that are zero on every row
/// are dropped so the remaining columns carry information.
DesignMatrix build_features(std::span<const Date> dates, std::span<const double> values,
                            const FeatureSpec& spec);
inline DesignMatrix build_features(const CashFlowSeries& series, const FeatureSpec& spec) {
    return build_features(series.dates(), series.values(), spec);
}

/// Feature rows for given columns; `history` precedes `date` as in feature_value.
Eigen::RowVectorXd feature_row(std::span<const FeatureColumn> columns, const Date& date,
                               std::span<const double> history);

}  // namespace cashcast
