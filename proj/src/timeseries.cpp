#include "cashcast/timeseries.hpp"

#include "cashcast/error.hpp"
#include "cashcast/numfmt.hpp"
#include "cashcast/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace cashcast {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                          s.front() == '\xEF' || s.front() == '\xBB' || s.front() == '\xBF')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::string_view to_string(Variant variant) {
    switch (variant) {
        case Variant::Real: return "real";
        case Variant::Stable: return "stable";
        case Variant::Unstable: return "unstable";
        case Variant::RandomShock: return "random_shock";
    }
    return "unknown";
}

Variant parse_variant(std::string_view text) {
    if (text == "real") return Variant::Real;
    if (text == "stable") return Variant::Stable;
    if (text == "unstable") return Variant::Unstable;
    if (text == "random_shock") return Variant::RandomShock;
    throw ValidationError("unknown variant '" + std::string(text) + "'");
}

CashFlowSeries::CashFlowSeries(std::vector<Observation> observations, Variant variant,
                               std::optional<std::uint64_t> applied_seed)
    : variant_(variant), applied_seed_(applied_seed) {
    dates_.reserve(observations.size());
    values_.reserve(observations.size());
    for (const auto& o : observations) {
        dates_.push_back(o.date);
        values_.push_back(o.amount);
    }
    validate();
}

CashFlowSeries::CashFlowSeries(std::vector<Date> dates, std::vector<double> values, Variant variant,
                               std::optional<std::uint64_t> applied_seed)
    : dates_(std::move(dates)), values_(std::move(values)), variant_(variant),
      applied_seed_(applied_seed) {
    if (dates_.size() != values_.size()) {
        throw ValidationError("dates and values differ in length");
    }
    validate();
}

void CashFlowSeries::validate() const {
    if (values_.size() < 2) {
        throw ValidationError("a cash-flow series needs at least 2 observations");
    }
    for (std::size_t i = 0; i < dates_.size(); ++i) {
        if (!is_workday(dates_[i])) {
            throw ValidationError("date " + format_date(dates_[i]) + " is not a workday");
        }
        if (!std::isfinite(values_[i])) {
            throw ValidationError("non-finite amount on " + format_date(dates_[i]));
        }
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            throw ValidationError(dates_[i - 1] == dates_[i]
                                      ? "duplicate date " + format_date(dates_[i])
                                      : "dates are not increasing at " + format_date(dates_[i]));
        }
    }
}

CashFlowSeries parse_series(std::istream& in) {
    std::vector<Observation> rows;
    std::string line;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError(line_no, "expected two fields 'date,amount'");
        }
        const auto date_text = trim(text.substr(0, comma));
        const auto amount_text = trim(text.substr(comma + 1));
        Date date;
        try {
            date = parse_date(date_text);
        } catch (const ValidationError& e) {
            if (!seen_content) {  // header row
                seen_content = true;
                continue;
            }
            throw ParseError(line_no, e.what());
        }
        seen_content = true;
        double amount = 0.0;
        const char* first = amount_text.data();
        const char* last = first + amount_text.size();
        if (!amount_text.empty() && *first == '+') {
            ++first;
        }
        auto [ptr, ec] = std::from_chars(first, last, amount);
        if (amount_text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(amount)) {
            throw ParseError(line_no, "malformed amount '" + std::string(amount_text) + "'");
        }
        rows.push_back({date, amount});
    }
    if (rows.empty()) {
        throw ValidationError("series file has no data rows");
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Observation& a, const Observation& b) { return a.date < b.date; });
    return CashFlowSeries(std::move(rows));
}

CashFlowSeries load_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open series file " + path.string());
    }
    return parse_series(in);
}

void write_series(const CashFlowSeries& series, std::ostream& out) {
    out << "date,amount\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << format_date(series.dates()[i]) << ',' << fmt_num(series.values()[i]) << '\n';
    }
}

CashFlowSeries derive_variant(const CashFlowSeries& series, Variant variant,
                              std::optional<std::uint64_t> seed) {
    if (series.derived() && series.variant() == variant &&
        (variant != Variant::RandomShock || series.applied_seed() == seed)) {
        return series;
    }
    const auto input = series.values();
    std::vector<double> out(input.begin(), input.end());
    const double sd = stats::stddev(input);

    // a constant series has no outliers
    auto cap = [&](double k) {
        if (sd == 0.0) {
            return;
        }
        const double limit = k * sd;
        for (double& y : out) {
            if (std::abs(y) > limit) {
                y = std::copysign(limit, y);
            }
        }
    };

    switch (variant) {
        case Variant::Real:
            cap(5.0);
            break;
        case Variant::Stable:
            cap(3.0);
            break;
        case Variant::Unstable:
            for (double& y : out) {
                if (sd > 0.0 && std::abs(y) > 3.0 * sd) {
                    y = 2.0 * y;
                }
            }
            break;
        case Variant::RandomShock: {
            if (!seed) {
                throw ValidationError("random_shock variant requires a seed");
            }
            const auto [lo, hi] = std::minmax_element(input.begin(), input.end());
            const std::size_t n = out.size();
            const auto count = static_cast<std::size_t>(std::llround(0.05 * static_cast<double>(n)));
            std::mt19937_64 rng(*seed);
            std::vector<std::size_t> index(n);
            std::iota(index.begin(), index.end(), std::size_t{0});
            // partial Fisher-Yates: the first `count` slots are a uniform sample
            for (std::size_t i = 0; i < count; ++i) {
                std::uniform_int_distribution<std::size_t> pick(i, n - 1);
                std::swap(index[i], index[pick(rng)]);
            }
            std::uniform_real_distribution<double> draw(*lo, *hi);
            for (std::size_t i = 0; i < count; ++i) {
                out[index[i]] = draw(rng);
            }
            break;
        }
        default:
            throw ValidationError("unknown variant");
    }

    std::vector<Date> dates(series.dates().begin(), series.dates().end());
    CashFlowSeries result(std::move(dates), std::move(out), variant,
                          variant == Variant::RandomShock ? seed : std::nullopt);
    result.derived_ = true;
    return result;
}

SeriesSummary summarize(std::span<const double> values) {
    if (values.size() < 4) {
        throw ValidationError("summary needs at least 4 observations");
    }
    const double m = stats::mean(values);
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d2 = (v - m) * (v - m);
        m2 += d2;
        m4 += d2 * d2;
    }
    const auto n = static_cast<double>(values.size());
    if (m2 == 0.0) {
        throw DegenerateError("kurtosis undefined for a constant series");
    }
    m2 /= n;
    m4 /= n;
    return {values.size(), m, stats::stddev(values), m4 / (m2 * m2) - 3.0};
}

std::string summary_csv_row(std::string_view dataset, const SeriesSummary& s) {
    std::ostringstream os;
    os << dataset << ',' << s.length << ',' << fmt_num(s.mean) << ','
       << fmt_num(s.stddev) << ',' << fmt_num(s.excess_kurtosis);
    return os.str();
}

// ---------------------------------------------------------------------------

std::string FeatureColumn::name() const {
    switch (kind) {
        case Kind::Intercept: return "intercept";
        case Kind::DayOfMonth: return "d" + std::to_string(level);
        case Kind::DayOfWeek: return "s" + std::to_string(level);
        case Kind::Month: return "m" + std::to_string(level);
        case Kind::Week: return "w" + std::to_string(level);
        case Kind::Lag: return "lag" + std::to_string(level);
    }
    return "?";
}

FeatureColumn parse_feature_column(std::string_view name) {
    if (name == "intercept") {
        return {FeatureColumn::Kind::Intercept, 0};
    }
    auto parse_level = [&](std::size_t prefix, FeatureColumn::Kind kind, unsigned lo, unsigned hi) {
        unsigned level = 0;
        const char* first = name.data() + prefix;
        const char* last = name.data() + name.size();
        auto [ptr, ec] = std::from_chars(first, last, level);
        if (ec != std::errc{} || ptr != last || level < lo || level > hi) {
            throw ValidationError("unknown feature column '" + std::string(name) + "'");
        }
        return FeatureColumn{kind, level};
    };
    if (name.starts_with("lag")) return parse_level(3, FeatureColumn::Kind::Lag, 1, 1u << 20);
    if (name.starts_with("d")) return parse_level(1, FeatureColumn::Kind::DayOfMonth, 1, 31);
    if (name.starts_with("s")) return parse_level(1, FeatureColumn::Kind::DayOfWeek, 1, 5);
    if (name.starts_with("m")) return parse_level(1, FeatureColumn::Kind::Month, 1, 12);
    if (name.starts_with("w")) return parse_level(1, FeatureColumn::Kind::Week, 1, 53);
    throw ValidationError("unknown feature column '" + std::string(name) + "'");
}

std::vector<FeatureColumn> candidate_columns(const FeatureSpec& spec) {
    using Kind = FeatureColumn::Kind;
    if (spec.weekday_reference < 1 || spec.weekday_reference > 5) {
        throw ValidationError("weekday_reference must be an ISO workday in 1..5");
    }
    std::vector<FeatureColumn> cols;
    if (spec.include_intercept) {
        cols.push_back({Kind::Intercept, 0});
    }
    if (spec.use_day_of_month) {
        for (unsigned d = 2; d <= 31; ++d) cols.push_back({Kind::DayOfMonth, d});
    }
    if (spec.use_day_of_week) {
        for (unsigned s = 1; s <= 5; ++s) {
            if (s != spec.weekday_reference) cols.push_back({Kind::DayOfWeek, s});
        }
    }
    if (spec.use_month) {
        for (unsigned m = 2; m <= 12; ++m) cols.push_back({Kind::Month, m});
    }
    if (spec.use_week) {
        for (unsigned w = 2; w <= 53; ++w) cols.push_back({Kind::Week, w});
    }
    for (std::size_t k = 1; k <= spec.lag_count; ++k) {
        cols.push_back({Kind::Lag, static_cast<unsigned>(k)});
    }
    return cols;
}

double feature_value(const FeatureColumn& column, const Date& date, std::span<const double> history) {
    using Kind = FeatureColumn::Kind;
    switch (column.kind) {
        case Kind::Intercept: return 1.0;
        case Kind::DayOfMonth: return static_cast<unsigned>(date.day()) == column.level ? 1.0 : 0.0;
        case Kind::DayOfWeek: return iso_weekday(date) == column.level ? 1.0 : 0.0;
        case Kind::Month: return static_cast<unsigned>(date.month()) == column.level ? 1.0 : 0.0;
        case Kind::Week: return iso_week(date) == column.level ? 1.0 : 0.0;
        case Kind::Lag:
            if (history.size() < column.level) {
                throw ValidationError("not enough history for column " + column.name());
            }
            return history[history.size() - column.level];
    }
    return 0.0;
}

bool DesignMatrix::intercept_included() const noexcept {
    return std::any_of(columns.begin(), columns.end(), [](const FeatureColumn& c) {
        return c.kind == FeatureColumn::Kind::Intercept;
    });
}

std::vector<std::string> DesignMatrix::column_names() const {
    std::vector<std::string> names;
    names.reserve(columns.size());
    for (const auto& c : columns) names.push_back(c.name());
    return names;
}

std::size_t max_lag(std::span<const FeatureColumn> columns) {
    std::size_t p = 0;
    for (const auto& c : columns) {
        if (c.kind == FeatureColumn::Kind::Lag) p = std::max<std::size_t>(p, c.level);
    }
    return p;
}

Eigen::RowVectorXd feature_row(std::span<const FeatureColumn> columns, const Date& date,
                               std::span<const double> history) {
    Eigen::RowVectorXd row(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        row(static_cast<Eigen::Index>(j)) = feature_value(columns[j], date, history);
    }
    return row;
}

DesignMatrix build_features(std::span<const Date> dates, std::span<const double> values,
                            const FeatureSpec& spec) {
    if (!spec.selects_anything()) {
        throw ValidationError("feature spec selects no explanatory variables");
    }
    if (dates.size() != values.size()) {
        throw ValidationError("dates and values differ in length");
    }
    const std::size_t p = spec.lag_count;
    if (p >= values.size()) {
        throw ValidationError("lag_count must be smaller than the series length");
    }
    auto candidates = candidate_columns(spec);
    const std::size_t rows = values.size() - p;

    Eigen::MatrixXd full(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(candidates.size()));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + p;
        full.row(static_cast<Eigen::Index>(r)) = feature_row(candidates, dates[t], values.first(t));
    }

    DesignMatrix dm;
    std::vector<Eigen::Index> keep;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        const auto col = full.col(static_cast<Eigen::Index>(j));
        const auto kind = candidates[j].kind;
        if (kind == FeatureColumn::Kind::Intercept || kind == FeatureColumn::Kind::Lag ||
            (col.array() != 0.0).any()) {
            keep.push_back(static_cast<Eigen::Index>(j));
            dm.columns.push_back(candidates[j]);
        }
    }
    dm.values = full(Eigen::all, keep);
    dm.target = Eigen::Map<const Eigen::VectorXd>(values.data() + p, static_cast<Eigen::Index>(rows));
    dm.row_dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(p), dates.end());
    return dm;
}

}  // namespace cashcast
